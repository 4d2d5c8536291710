#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace noarb {

/// Failure categories shared by every module. The CLI maps each category
/// onto its exit code (see `exit_code_for`).
enum class ErrorKind {
  MismatchedStates,
  NonFinite,
  InvalidParams,
  DomainError,
  OutOfRange,
  ArbitrageViolation,
  ConstraintViolated,
  NumericalFailure,
  QuadratureFailure,
  UnstableConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// 1 = invalid input, 2 = arbitrage / constraint violation detected,
/// 3 = numerical failure.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace noarb
