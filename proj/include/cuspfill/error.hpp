#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace cuspfill {

enum class ErrorKind {
  InvalidInput,
  NecessityViolation,
  ConstructionInfeasible,
  EpsTooLarge,
  InvalidCurve,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NecessityViolation: return "necessity-violation";
    case ErrorKind::ConstructionInfeasible: return "construction-infeasible";
    case ErrorKind::EpsTooLarge: return "eps-too-large";
    case ErrorKind::InvalidCurve: return "invalid-curve";
  }
  return "unknown";
}

// `value` carries the number the caller most likely wants back: the offending
// radius, or the largest feasible eps for EpsTooLarge.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        double value = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message,
                              double value = std::numeric_limits<double>::quiet_NaN()) {
  throw Error(kind, message, value);
}

}  // namespace cuspfill
