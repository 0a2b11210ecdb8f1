#pragma once

#include <stdexcept>
#include <string>

namespace hyperwave {

enum class ErrorCode {
  InvalidDimension,
  UnsupportedDimension,
  Domain,
  Discretization,
  IncompatibleGrid,
  CalibrationRequired,
  Resolution,
  SpectralPositivity,
  SingularMultiplier,
  Precondition,
  ConstraintViolation,
  DivergentIntegral,
  InterpolationRequired,
  Divergence,
  TimeUnderflow,
  Horizon,
  Config,
  IO,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::UnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Discretization: return "discretization";
    case ErrorCode::IncompatibleGrid: return "incompatible-grid";
    case ErrorCode::CalibrationRequired: return "calibration-required";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::SpectralPositivity: return "spectral-positivity";
    case ErrorCode::SingularMultiplier: return "singular-multiplier";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::ConstraintViolation: return "constraint-violation";
    case ErrorCode::DivergentIntegral: return "divergent-integral";
    case ErrorCode::InterpolationRequired: return "interpolation-required";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::TimeUnderflow: return "time-underflow";
    case ErrorCode::Horizon: return "horizon";
    case ErrorCode::Config: return "config";
    case ErrorCode::IO: return "io";
  }
  return "unknown";
}

/// Constraint violations are user errors; everything numerical maps to a
/// failure of the computation itself.
inline bool is_constraint_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::Domain:
    case ErrorCode::SpectralPositivity:
    case ErrorCode::Precondition:
    case ErrorCode::ConstraintViolation:
    case ErrorCode::Config:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace hyperwave
