#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evsynth/geometry.hpp"

namespace evsynth::io {

/// One pose per line: `frame_id qw qx qy qz tx ty tz time_us intrinsics_id`.
/// Reals use 17 significant digits; a missing time or intrinsics id is -1.
std::string write_trajectory(std::span<const geometry::Pose> poses);

/// Inverse of write_trajectory; frame ids must count up from 0.
std::vector<geometry::Pose> read_trajectory(std::string_view text);

}  // namespace evsynth::io
