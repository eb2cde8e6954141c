#include "rtep/error.hpp"

namespace rtep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kValidation:
      return "validation-error";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kBackend:
      return "backend-error";
    case ErrorCode::kIterationLimit:
      return "iteration-limit";
    case ErrorCode::kEnumerationTooLarge:
      return "enumeration-too-large";
    case ErrorCode::kNumericalIntegrality:
      return "numerical-integrality-error";
    case ErrorCode::kDualBoundTooTight:
      return "dual-bound-too-tight";
    case ErrorCode::kPrecondition:
      return "precondition-error";
    case ErrorCode::kModelConstruction:
      return "model-construction-error";
    case ErrorCode::kNumericalStall:
      return "numerical-stall";
  }
  return "unknown";
}

}  // namespace rtep
