#pragma once

#include <cmath>
#include <cstdint>

#include "evsynth/error.hpp"

namespace evsynth {

inline constexpr double kDefaultFps = 2400.0;

/// Integer microsecond spacing of consecutive frames: floor(1e6 / fps).
inline std::uint64_t frame_period_us(double fps) {
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw Error(ErrorCode::kInvalidArgument, "frame rate must be positive");
  }
  const auto period = static_cast<std::uint64_t>(std::floor(1e6 / fps));
  if (period == 0) throw Error(ErrorCode::kInvalidArgument, "frame rate exceeds 1 MHz");
  return period;
}

}  // namespace evsynth
