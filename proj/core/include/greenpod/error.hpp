#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace greenpod {

enum class ErrorCode {
  kInvalidMatrix,
  kInvalidWeights,
  kNoNodes,
  kNoFeasibleNodes,
  kInfeasible,
  kInvalidParams,
  kInvalidAssumptions,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every greenpod module. The code is stable and
/// machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace greenpod
