#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace confstab {

enum class ErrorKind {
  kPointOutsideChart,
  kStepTooLargeForMargin,
  kInvalidChart,
  kMetricSingular,
  kDegenerateSpan,
  kInvalidDimensions,
  kPLessThanTwo,
  kTOutOfRange,
  kPointOutsideUnitBall,
  kThresholdUnreachable,
  kInvalidBracket,
  kUnknownCase,
  kInvalidArgument,
  kGInversionFailure,
};

std::string_view to_string(ErrorKind kind);

/// Every precondition failure in the library is reported as an Error whose
/// kind() names the violated contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kPointOutsideChart: return "point-outside-chart";
    case ErrorKind::kStepTooLargeForMargin: return "step-too-large-for-margin";
    case ErrorKind::kInvalidChart: return "invalid-chart";
    case ErrorKind::kMetricSingular: return "metric-singular";
    case ErrorKind::kDegenerateSpan: return "degenerate-span";
    case ErrorKind::kInvalidDimensions: return "invalid-dimensions";
    case ErrorKind::kPLessThanTwo: return "p-less-than-2";
    case ErrorKind::kTOutOfRange: return "t-out-of-range";
    case ErrorKind::kPointOutsideUnitBall: return "point-outside-unit-ball";
    case ErrorKind::kThresholdUnreachable: return "threshold-unreachable";
    case ErrorKind::kInvalidBracket: return "invalid-bracket";
    case ErrorKind::kUnknownCase: return "unknown-case";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kGInversionFailure: return "g-inversion-failure";
  }
  return "unknown-error";
}

}  // namespace confstab
