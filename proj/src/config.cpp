#include "finsler/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace finsler {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto t = trim(text);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(ErrorKind::ConfigError, "config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto t = trim(text);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(ErrorKind::ConfigError, "config: '" + key + "' expects an integer, got '" + text + "'");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "command", "metric", "dim",   "a",       "c",      "c_mu",     "phi",       "finsler", "form",   "f",
      "P",       "samples", "seed", "radius",  "tol",    "scheme",   "out",       "format",  "threads", "x_points",
      "y_samples", "rows",  "grid_r", "grid_s"};
  return keys;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"tensors", "check-parallel", "scan", "sphsym", "scalar-curvature",
                                              "invariants"};
  return names;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double("list", item));
  return out;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "command") cfg.command = v;
  else if (key == "metric") cfg.metric = v;
  else if (key == "dim") cfg.dim = static_cast<int>(parse_int(key, v));
  else if (key == "a") cfg.a = parse_number_list(v);
  else if (key == "c") cfg.c = parse_double(key, v);
  else if (key == "c_mu") cfg.c_mu = parse_number_list(v);
  else if (key == "phi") cfg.phi = v;
  else if (key == "finsler") cfg.finsler = v;
  else if (key == "form") cfg.form = v.empty() ? std::vector<std::string>{} : split(v, ',');
  else if (key == "f") cfg.f = v;
  else if (key == "P") cfg.P = v;
  else if (key == "samples") cfg.samples = static_cast<int>(parse_int(key, v));
  else if (key == "seed") {
    const long long s = parse_int(key, v);
    if (s < 0) fail(ErrorKind::ConfigError, "config: seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "radius") cfg.radius = parse_double(key, v);
  else if (key == "tol") cfg.tol = parse_double(key, v);
  else if (key == "scheme") {
    if (v == "ad") cfg.scheme = Scheme::Taylor;
    else if (v == "fd") cfg.scheme = Scheme::FiniteDifference;
    else fail(ErrorKind::ConfigError, "config: scheme must be 'ad' or 'fd'");
  } else if (key == "out") cfg.out = v;
  else if (key == "format") {
    if (v == "json") cfg.format = OutputFormat::Json;
    else if (v == "csv") cfg.format = OutputFormat::Csv;
    else fail(ErrorKind::ConfigError, "config: format must be 'json' or 'csv'");
  } else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, v));
  else if (key == "x_points") cfg.x_points = static_cast<int>(parse_int(key, v));
  else if (key == "y_samples") cfg.y_samples = static_cast<int>(parse_int(key, v));
  else if (key == "rows") {
    if (v != "all" && v != "G" && v != "R") fail(ErrorKind::ConfigError, "config: rows must be all, G or R");
    cfg.rows = v;
  } else if (key == "grid_r") cfg.grid_r = static_cast<int>(parse_int(key, v));
  else if (key == "grid_s") cfg.grid_s = static_cast<int>(parse_int(key, v));
  else fail(ErrorKind::ConfigError, "config: unknown key '" + key + "'");
}

void RunConfig::validate() const {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end())
    fail(ErrorKind::ConfigError, "unknown command '" + command + "'");
  if (dim < 2) fail(ErrorKind::ConfigError, "dimension must be at least 2");
  if (samples < 10) fail(ErrorKind::ConfigError, "sample count must be at least 10");
  if (threads < 1) fail(ErrorKind::ConfigError, "threads must be at least 1");
  if (radius && !(*radius > 0.0)) fail(ErrorKind::ConfigError, "radius must be positive");
  if (tol && !(*tol > 0.0)) fail(ErrorKind::ConfigError, "tolerance must be positive");
  if (x_points < 1 || y_samples < 1 || grid_r < 1 || grid_s < 1)
    fail(ErrorKind::ConfigError, "scan and grid sizes must be positive");
  if (!a.empty() && static_cast<int>(a.size()) != dim)
    fail(ErrorKind::ConfigError, "parameter a must have dim entries");
}

RunConfig parse_config(std::string_view text, const std::string& command_override) {
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorKind::ConfigError, where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      const auto& names = command_names();
      if (std::find(names.begin(), names.end(), section) == names.end())
        fail(ErrorKind::ConfigError, where + "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, where + "expected key = value");
    Entry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), e.key) == keys.end())
      fail(ErrorKind::ConfigError, where + "unknown key '" + e.key + "'");
    if (e.key == "command" && !e.section.empty())
      fail(ErrorKind::ConfigError, where + "'command' must be a top-level key");
    entries.push_back(std::move(e));
  }

  RunConfig cfg;
  for (const auto& e : entries)
    if (e.section.empty()) set_config_value(cfg, e.key, e.value);
  if (!command_override.empty()) cfg.command = command_override;
  for (const auto& e : entries)
    if (!e.section.empty() && e.section == cfg.command) set_config_value(cfg, e.key, e.value);
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& command_override) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command_override);
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
  std::string forms;
  for (std::size_t i = 0; i < cfg.form.size(); ++i) forms += (i ? "," : "") + cfg.form[i];
  return {
      {"command", cfg.command},
      {"metric", cfg.metric},
      {"dim", std::to_string(cfg.dim)},
      {"a", format_list(cfg.a)},
      {"c", format_double(cfg.c)},
      {"c_mu", format_list(cfg.c_mu)},
      {"phi", cfg.phi},
      {"finsler", cfg.finsler},
      {"form", forms},
      {"f", cfg.f},
      {"P", cfg.P},
      {"samples", std::to_string(cfg.samples)},
      {"seed", std::to_string(cfg.seed)},
      {"radius", cfg.radius ? format_double(*cfg.radius) : ""},
      {"tol", cfg.tol ? format_double(*cfg.tol) : ""},
      {"scheme", cfg.scheme == Scheme::Taylor ? "ad" : "fd"},
      {"format", cfg.format == OutputFormat::Json ? "json" : "csv"},
      {"threads", std::to_string(cfg.threads)},
      {"x_points", std::to_string(cfg.x_points)},
      {"y_samples", std::to_string(cfg.y_samples)},
      {"rows", cfg.rows},
      {"grid_r", std::to_string(cfg.grid_r)},
      {"grid_s", std::to_string(cfg.grid_s)},
  };
}

}  // namespace finsler
