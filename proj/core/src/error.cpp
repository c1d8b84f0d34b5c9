#include "evsynth/error.hpp"

namespace evsynth {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDegenerateWindow: return "degenerate window";
    case ErrorCode::kDegeneratePath: return "degenerate path";
    case ErrorCode::kInvalidProfile: return "invalid profile";
    case ErrorCode::kInsufficientPoses: return "insufficient poses";
    case ErrorCode::kInvalidInterval: return "invalid interval";
    case ErrorCode::kMalformedSequence: return "malformed sequence";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kBounds: return "out of bounds";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace evsynth
