#include "rdo/error.hpp"

namespace rdo {

const char *to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidPoint: return "InvalidPoint";
  case ErrorCode::InvalidTangent: return "InvalidTangent";
  case ErrorCode::BeyondInjectivity: return "BeyondInjectivity";
  case ErrorCode::BaseMismatch: return "BaseMismatch";
  case ErrorCode::InvalidBall: return "InvalidBall";
  case ErrorCode::InvalidShrinkage: return "InvalidShrinkage";
  case ErrorCode::DomainViolation: return "DomainViolation";
  case ErrorCode::InvalidTopology: return "InvalidTopology";
  case ErrorCode::NotValidated: return "NotValidated";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
  case ErrorCode::GradientBlowup: return "GradientBlowup";
  case ErrorCode::InfeasibleQuery: return "InfeasibleQuery";
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

} // namespace rdo
