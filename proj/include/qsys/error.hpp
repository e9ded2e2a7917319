#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsys {

enum class ErrorCode {
  kZeroCoefficient,
  kNonzeroSum,
  kSignConditionViolated,
  kProgressionOutOfRange,
  kBudgetExceeded,
  kHypothesisViolated,
  kNoWitness,
  kUniformSet,
  kCertificateFailed,
  kInvalidParams,
  kInvalidSpec,
  kParseError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qsys
