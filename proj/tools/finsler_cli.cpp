#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "finsler/commands.hpp"

namespace {

struct FlagValue {
  const char* key;
  std::string value;
  CLI::Option* option = nullptr;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical Finsler geometry toolkit"};
  app.set_version_flag("--version", finsler::kToolVersion);

  std::string command;
  std::string config_path;
  app.add_option("command", command, "tensors | check-parallel | scan | sphsym | scalar-curvature | invariants");
  app.add_option("--config", config_path, "key = value config file; flags override it");

  std::vector<FlagValue> flags{
      {"metric", {}},   {"dim", {}},      {"a", {}},       {"c", {}},        {"c_mu", {}},    {"phi", {}},
      {"finsler", {}},  {"form", {}},     {"f", {}},       {"P", {}},        {"samples", {}}, {"seed", {}},
      {"radius", {}},   {"tol", {}},      {"scheme", {}},  {"out", {}},      {"format", {}},  {"threads", {}},
      {"x_points", {}}, {"y_samples", {}}, {"rows", {}},   {"grid_r", {}},   {"grid_s", {}}};
  const std::vector<std::pair<std::string, std::string>> help{
      {"metric", "catalogue metric: euclidean, klein, example1, berwald_classic, general_berwald"},
      {"dim", "dimension n (default 3)"},
      {"a", "parameter vector, comma separated"},
      {"c", "form constant c (example1)"},
      {"c_mu", "form constants c_mu, comma separated (example1)"},
      {"phi", "profile phi(r, s) of F = |y| phi(|x|, <x,y>/|y|)"},
      {"finsler", "Finsler function in x1..xn, y1..yn"},
      {"form", "form coefficients b_i(x1..xn), comma separated"},
      {"f", "radial factor f(r) of b_i = f(r) x_i"},
      {"P", "spray coefficient P(r, s)"},
      {"samples", "sample count (default 100, at least 10)"},
      {"seed", "RNG seed (default 0)"},
      {"radius", "sampling radius for x"},
      {"tol", "tolerance override"},
      {"scheme", "ad | fd"},
      {"out", "output file; stdout when omitted"},
      {"format", "json | csv (default json, or csv for a .csv output file)"},
      {"threads", "worker threads over samples (default 1)"},
      {"x_points", "scan: base points (default 5)"},
      {"y_samples", "scan: directions per base point (default 20)"},
      {"rows", "scan: all | G | R"},
      {"grid_r", "sphsym: grid size in r (default 20)"},
      {"grid_s", "sphsym: grid size in s (default 20)"}};
  for (std::size_t i = 0; i < flags.size(); ++i) {
    std::string name = "--" + std::string(flags[i].key);
    if (flags[i].key == std::string("x_points")) name += ",--x-points";
    if (flags[i].key == std::string("y_samples")) name += ",--y-samples";
    if (flags[i].key == std::string("grid_r")) name += ",--grid-r";
    if (flags[i].key == std::string("grid_s")) name += ",--grid-s";
    if (flags[i].key == std::string("c_mu")) name += ",--c-mu";
    flags[i].option = app.add_option(name, flags[i].value, help[i].second)->allow_extra_args(false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    finsler::RunConfig cfg = config_path.empty() ? finsler::RunConfig{} : finsler::load_config(config_path, command);
    if (config_path.empty()) cfg.command = command;
    bool format_given = false;
    for (const auto& f : flags) {
      if (f.option->count() == 0) continue;
      finsler::set_config_value(cfg, f.key, f.value);
      if (f.key == std::string("format")) format_given = true;
    }
    if (!format_given && ends_with(cfg.out, ".csv")) cfg.format = finsler::OutputFormat::Csv;
    if (cfg.command.empty()) finsler::fail(finsler::ErrorKind::ConfigError, "no command given");

    const finsler::Report report = finsler::run(cfg);
    const std::string text = cfg.format == finsler::OutputFormat::Json ? finsler::to_json(report) : finsler::to_csv(report);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out, std::ios::binary);
      if (!out) finsler::fail(finsler::ErrorKind::ConfigError, "cannot write '" + cfg.out + "'");
      out << text;
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " max_residual=" << finsler::format_number(c.max_residual)
                  << " tol=" << finsler::format_number(c.tolerance) << "\n";
      for (const auto& [k, v] : report.verdicts) std::cout << k << ": " << v << "\n";
    }
    return finsler::exit_code(report);
  } catch (const finsler::Error& e) {
    std::cerr << "error [" << finsler::to_string(e.kind()) << "]: " << e.what() << "\n";
    return finsler::exit_code(e.kind());
  }
}
