#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spheremax {

enum class ErrorCode {
  DimensionMismatch,
  InvalidInput,
  NoConvergence,
  NotSymmetric,
  NotPSD,
  ZeroGradient,
  NonConverged,
  BudgetExceeded,
  NotZeroDimensional,
  PreconditionViolated,
  DegenerateEigenvector,
  RepeatedEigenvalue,
  NotAState,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::NonConverged: return "NonConverged";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotZeroDimensional: return "NotZeroDimensional";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::DegenerateEigenvector: return "DegenerateEigenvector";
    case ErrorCode::RepeatedEigenvalue: return "RepeatedEigenvalue";
    case ErrorCode::NotAState: return "NotAState";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spheremax
