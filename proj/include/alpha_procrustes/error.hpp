#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alpha_procrustes {

enum class ErrorCode {
  NonFinite,
  ConvergenceFailure,
  NotPositive,  // eigenvalue below -psd_tol where a PSD matrix was required
  SingularBase,
  DomainError,
  NumericalInconsistency,
  DimensionError,
  ComplexSpectrum,
  UnsupportedKernel,
  NonSpdIntermediate,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::SingularBase: return "SingularBase";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::UnsupportedKernel: return "UnsupportedKernel";
    case ErrorCode::NonSpdIntermediate: return "NonSpdIntermediate";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace alpha_procrustes
