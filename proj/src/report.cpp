#include "finsler/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace finsler {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string number_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_number(v[i]);
  return out + "]";
}

const char* variance_name(const IndexRole& r) {
  if (r.variance == Variance::Up) return r.slot == Slot::Fiber ? "up-fiber" : "up";
  return r.slot == Slot::Fiber ? "down-fiber" : "down";
}

std::string tensor_json(const TensorValue& t) {
  std::string out = "{\"dim\": " + std::to_string(t.dim()) + ", \"indices\": [";
  for (std::size_t i = 0; i < t.roles().size(); ++i) out += (i ? ", " : "") + quote(variance_name(t.roles()[i]));
  out += "], \"lowering\": " + quote(to_string(t.lowering()));
  if (!t.note.empty()) out += ", \"note\": " + quote(t.note);
  const auto c = t.components();
  out += ", \"components\": " + number_array(std::vector<double>(c.begin(), c.end())) + "}";
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string to_json(const Report& r) {
  std::string out = "{\n";
  out += "  \"schema\": " + std::to_string(kReportSchema) + ",\n";
  out += "  \"tool_version\": " + quote(kToolVersion) + ",\n";
  out += "  \"timestamp\": " + quote(r.timestamp) + ",\n";
  out += "  \"command\": " + quote(r.command) + ",\n";
  out += "  \"config\": {";
  for (std::size_t i = 0; i < r.config.size(); ++i)
    out += std::string(i ? ", " : "") + quote(r.config[i].first) + ": " + quote(r.config[i].second);
  out += "},\n  \"checks\": [";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const auto& c = r.checks[i];
    out += std::string(i ? "," : "") + "\n    {\"name\": " + quote(c.name) +
           ", \"max_residual\": " + format_number(c.max_residual) + ", \"tolerance\": " + format_number(c.tolerance) +
           ", \"pass\": " + (c.pass ? "true" : "false") + ", \"sample_count\": " + std::to_string(c.sample_count) +
           ", \"seed\": " + std::to_string(c.seed) + ", \"notes\": " + quote(c.notes) + "}";
  }
  out += r.checks.empty() ? "],\n" : "\n  ],\n";
  out += "  \"verdicts\": {";
  for (std::size_t i = 0; i < r.verdicts.size(); ++i)
    out += std::string(i ? ", " : "") + quote(r.verdicts[i].first) + ": " + quote(r.verdicts[i].second);
  out += "},\n";
  if (!r.dumps.empty()) {
    out += "  \"samples\": [";
    for (std::size_t i = 0; i < r.dumps.size(); ++i) {
      const auto& d = r.dumps[i];
      out += std::string(i ? "," : "") + "\n    {\"x\": " + number_array(d.x) + ", \"y\": " + number_array(d.y);
      for (const auto& [name, v] : d.scalars) out += ", " + quote(name) + ": " + format_number(v);
      out += ", \"tensors\": {";
      for (std::size_t t = 0; t < d.tensors.size(); ++t)
        out += std::string(t ? ", " : "") + "\n      " + quote(d.tensors[t].first) + ": " + tensor_json(d.tensors[t].second);
      out += "}}";
    }
    out += "\n  ],\n";
  }
  out += std::string("  \"pass\": ") + (r.all_pass() ? "true" : "false") + "\n}\n";
  return out;
}

std::string to_csv(const Report& r) {
  std::string out = "name,max_residual,tolerance,pass,sample_count,seed,notes\n";
  for (const auto& c : r.checks)
    out += csv_field(c.name) + "," + format_number(c.max_residual) + "," + format_number(c.tolerance) + "," +
           (c.pass ? "true" : "false") + "," + std::to_string(c.sample_count) + "," + std::to_string(c.seed) + "," +
           csv_field(c.notes) + "\n";
  return out;
}

}  // namespace finsler
