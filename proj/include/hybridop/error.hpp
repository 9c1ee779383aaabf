#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridop {

enum class ErrorCode {
  ZeroVector,
  NotUnit,
  OutOfFrame,
  NotFoundWithinBudget,
  BadParameter,
  BadData,
  BadSupport,
  NotInRange,
  BadDimensions,
  IndeterminateClassification,
  NotAComplement,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; callers that need to
// distinguish cases switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hybridop
