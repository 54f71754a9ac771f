#pragma once

#include <stdexcept>
#include <string>

namespace rdo {

enum class ErrorCode {
  InvalidPoint,
  InvalidTangent,
  BeyondInjectivity,
  BaseMismatch,
  InvalidBall,
  InvalidShrinkage,
  DomainViolation,
  InvalidTopology,
  NotValidated,
  NoConvergence,
  DegenerateConfiguration,
  GradientBlowup,
  InfeasibleQuery,
  InvalidConfig,
  Io,
};

const char *to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure
/// class, the message carries the context.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Raised by iterative solvers; keeps the last residual for diagnostics.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &message, double residual)
      : Error(ErrorCode::NoConvergence, message), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace rdo
