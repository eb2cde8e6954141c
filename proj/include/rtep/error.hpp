#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtep {

// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorCode {
  kInvalidInput,
  kParse,
  kValidation,
  kInfeasible,
  kBackend,
  kIterationLimit,
  kEnumerationTooLarge,
  kNumericalIntegrality,
  kDualBoundTooTight,
  kPrecondition,
  kModelConstruction,
  kNumericalStall,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rtep
