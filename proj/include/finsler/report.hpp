#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "finsler/tensor.hpp"

namespace finsler {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct CheckRecord {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int sample_count = 0;
  std::uint64_t seed = 0;
  std::string notes;  // conventions and other context
};

struct TensorDump {
  std::vector<double> x, y;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, TensorValue>> tensors;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, std::string>> verdicts;
  std::vector<TensorDump> dumps;
  std::string timestamp;  // excluded from the determinism contract

  bool all_pass() const;
  void add(CheckRecord r) { checks.push_back(std::move(r)); }
};

// Numbers use 17 significant digits; non-finite numbers are written as null.
std::string to_json(const Report& r);
// One row per check record, with the same fields as the JSON records.
std::string to_csv(const Report& r);

std::string format_number(double v);
std::string utc_timestamp();

}  // namespace finsler
