#include "noarb/error.hpp"

namespace noarb {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MismatchedStates: return "MismatchedStates";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ArbitrageViolation: return "ArbitrageViolation";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::UnstableConfig: return "UnstableConfig";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ArbitrageViolation:
    case ErrorKind::ConstraintViolated:
      return 2;
    case ErrorKind::NumericalFailure:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::UnstableConfig:
      return 3;
    default:
      return 1;
  }
}

}  // namespace noarb
