#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evsynth {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateWindow,
  kDegeneratePath,
  kInvalidProfile,
  kInsufficientPoses,
  kInvalidInterval,
  kMalformedSequence,
  kParse,
  kBounds,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable category alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evsynth
