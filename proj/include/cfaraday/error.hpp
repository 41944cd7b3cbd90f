#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cfaraday {

enum class ErrorCode {
  NonFinite,
  NotAntisymmetric,
  NegativeRadicand,
  NumericallyUnstable,
  NoConvergence,
  NonAnalytic,
  UnstableStep,
  NonconservedSources,
  QuadratureToleranceNotMet,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NON_FINITE";
    case ErrorCode::NotAntisymmetric: return "NOT_ANTISYMMETRIC";
    case ErrorCode::NegativeRadicand: return "NEGATIVE_RADICAND";
    case ErrorCode::NumericallyUnstable: return "NUMERICALLY_UNSTABLE";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::NonAnalytic: return "NON_ANALYTIC";
    case ErrorCode::UnstableStep: return "UNSTABLE_STEP";
    case ErrorCode::NonconservedSources: return "NONCONSERVED_SOURCES";
    case ErrorCode::QuadratureToleranceNotMet: return "QUADRATURE_TOLERANCE_NOT_MET";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

/// Single exception type for every failure raised by the library. The code
/// is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cfaraday
