#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/calculus.hpp"

namespace finsler {

enum class OutputFormat { Json, Csv };

// Everything a command needs. Defaults match the CLI defaults.
struct RunConfig {
  std::string command;
  std::string metric;  // catalogue name; empty with `phi` or `finsler` set
  int dim = 3;
  std::vector<double> a;
  double c = 1.0;
  std::vector<double> c_mu;
  std::string phi;                // profile phi(r, s)
  std::string finsler;            // F(x1..xn, y1..yn)
  std::vector<std::string> form;  // b_i(x1..xn)
  std::string f;                  // radial factor f(r)
  std::string P;                  // P(r, s)
  int samples = 100;
  std::uint64_t seed = 0;
  std::optional<double> radius;
  std::optional<double> tol;
  Scheme scheme = Scheme::Taylor;
  std::string out;  // empty writes to stdout
  OutputFormat format = OutputFormat::Json;
  int threads = 1;
  // scan
  int x_points = 5;
  int y_samples = 20;
  std::string rows = "all";  // all | G | R
  // sphsym grid
  int grid_r = 20;
  int grid_s = 20;

  // n >= 2, samples >= 10, threads >= 1 and a known command; ConfigError otherwise.
  void validate() const;
};

const std::vector<std::string>& command_names();

// Flat key-value text with optional [section] headers:
//
//   # comment
//   command = scan        # top-level keys
//   [scan]
//   metric = general_berwald
//   a = 0.1, 0.05, 0      # inline comment
//
// A section applies only when it names the selected command. Unknown keys,
// malformed values and unknown sections are ConfigError.
RunConfig parse_config(std::string_view text, const std::string& command_override = {});
RunConfig load_config(const std::string& path, const std::string& command_override = {});

// Applies one key to the config, as the file parser and CLI both do.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

std::vector<double> parse_number_list(const std::string& text);

// Ordered (key, value) echo of the config for reports.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

}  // namespace finsler
