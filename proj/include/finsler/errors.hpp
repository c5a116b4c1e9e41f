#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

enum class ErrorKind {
  NonFiniteValue,
  DegenerateMetric,
  ConventionMismatch,
  NotPositive,
  BadParameter,
  SingularDenominator,
  DivisionByZero,
  InsufficientSamples,
  MissingFinslerFunction,
  ParseError,
  ConfigError,
};

// Every failure raised by the toolkit carries a kind so the CLI can map it to an
// exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::ConventionMismatch: return "ConventionMismatch";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::MissingFinslerFunction: return "MissingFinslerFunction";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace finsler
