#pragma once

#include <stdexcept>
#include <string>

namespace nalin {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kIncompatibleField,
  kDivisionByZero,
  kNotIntegral,
  kNonUnitMultiplier,
  kRootOfUnity,
  kPrecisionExhausted,
  kHypothesisViolated,
  kOutsideDomain,
  kCheckFailed,
  kIo,
  kInternal,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the library; the code drives the C API status and
// the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace nalin
