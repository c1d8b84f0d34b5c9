#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "evsynth/geometry.hpp"

namespace evsynth::io {

struct ColmapImage {
  std::uint32_t image_id = 0;
  std::uint32_t camera_id = 0;
  std::string name;
  /// Camera-to-world pose; intrinsics_id holds the CAMERA_ID.
  geometry::Pose pose;
};

/// Parses COLMAP images.txt. Each image occupies two lines (the second, the
/// 2D point list, may be empty and is ignored); `#` lines are comments. The
/// stored world-to-camera (q, t) becomes R = R_wc^T, C = -R_wc^T t. Result is
/// ordered by NAME. Throws kParse naming the offending line.
std::vector<ColmapImage> read_colmap_images(std::string_view text);

/// Camera-to-world poses from images.txt, ordered by NAME.
std::vector<geometry::Pose> read_colmap_poses(std::string_view text);

/// Parses COLMAP cameras.txt into an id -> intrinsics table. Pinhole-family
/// models are accepted; distortion parameters are ignored.
std::map<std::uint32_t, geometry::CameraIntrinsics> read_colmap_cameras(std::string_view text);

}  // namespace evsynth::io
