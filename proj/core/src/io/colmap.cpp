#include "evsynth/io/colmap.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "evsynth/error.hpp"
#include "text_util.hpp"

namespace evsynth::io {
namespace {

constexpr double kUnitTolerance = 1e-3;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

template <class T>
T field(std::string_view text, std::size_t line, const char* name) {
  const auto v = detail::parse_number<T>(text);
  if (!v) fail(line, std::string("cannot parse ") + name + " '" + std::string(text) + "'");
  return *v;
}

}  // namespace

std::vector<ColmapImage> read_colmap_images(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::vector<ColmapImage> images;
  std::set<std::uint32_t> seen;
  bool expect_points = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t lineno = i + 1;
    if (!line.empty() && line.front() == '#') continue;
    if (expect_points) {
      expect_points = false;
      continue;
    }
    const auto f = detail::split_fields(line);
    if (f.empty()) continue;
    if (f.size() < 10) {
      fail(lineno, "expected 10 fields (IMAGE_ID QW QX QY QZ TX TY TZ CAMERA_ID NAME), got " +
                       std::to_string(f.size()));
    }

    ColmapImage img;
    img.image_id = field<std::uint32_t>(f[0], lineno, "IMAGE_ID");
    const double qw = field<double>(f[1], lineno, "QW");
    const double qx = field<double>(f[2], lineno, "QX");
    const double qy = field<double>(f[3], lineno, "QY");
    const double qz = field<double>(f[4], lineno, "QZ");
    const Eigen::Vector3d t(field<double>(f[5], lineno, "TX"), field<double>(f[6], lineno, "TY"),
                            field<double>(f[7], lineno, "TZ"));
    img.camera_id = field<std::uint32_t>(f[8], lineno, "CAMERA_ID");
    // NAME is the remainder of the line so names with spaces survive.
    const std::size_t name_pos = static_cast<std::size_t>(f[9].data() - line.data());
    img.name = std::string(line.substr(name_pos));
    while (!img.name.empty() && (img.name.back() == ' ' || img.name.back() == '\t')) {
      img.name.pop_back();
    }

    const double norm = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitTolerance) {
      fail(lineno, "quaternion norm " + std::to_string(norm) + " is not unit");
    }
    if (!t.allFinite()) fail(lineno, "non-finite translation");
    if (!seen.insert(img.image_id).second) {
      fail(lineno, "duplicate IMAGE_ID " + std::to_string(img.image_id));
    }

    const geometry::Rotation world_to_cam(qw, qx, qy, qz);
    img.pose.rotation = world_to_cam.inverse();
    img.pose.translation = -(img.pose.rotation.rotate(t));
    img.pose.intrinsics_id = img.camera_id;
    images.push_back(std::move(img));
    expect_points = true;
  }

  std::stable_sort(images.begin(), images.end(),
                   [](const ColmapImage& a, const ColmapImage& b) { return a.name < b.name; });
  return images;
}

std::vector<geometry::Pose> read_colmap_poses(std::string_view text) {
  std::vector<geometry::Pose> poses;
  for (auto& img : read_colmap_images(text)) poses.push_back(img.pose);
  return poses;
}

std::map<std::uint32_t, geometry::CameraIntrinsics> read_colmap_cameras(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::map<std::uint32_t, geometry::CameraIntrinsics> cameras;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (!lines[i].empty() && lines[i].front() == '#') continue;
    const auto f = detail::split_fields(lines[i]);
    if (f.empty()) continue;
    if (f.size() < 5) fail(lineno, "camera line needs CAMERA_ID MODEL WIDTH HEIGHT PARAMS");

    const auto id = field<std::uint32_t>(f[0], lineno, "CAMERA_ID");
    const std::string model(f[1]);
    geometry::CameraIntrinsics k;
    k.width = field<std::uint32_t>(f[2], lineno, "WIDTH");
    k.height = field<std::uint32_t>(f[3], lineno, "HEIGHT");
    std::vector<double> params;
    for (std::size_t j = 4; j < f.size(); ++j) params.push_back(field<double>(f[j], lineno, "PARAM"));

    const bool single_focal = model == "SIMPLE_PINHOLE" || model == "SIMPLE_RADIAL" ||
                              model == "RADIAL" || model == "SIMPLE_RADIAL_FISHEYE" ||
                              model == "RADIAL_FISHEYE";
    const bool two_focal = model == "PINHOLE" || model == "OPENCV" || model == "OPENCV_FISHEYE" ||
                           model == "FULL_OPENCV" || model == "FOV" || model == "THIN_PRISM_FISHEYE";
    if (single_focal && params.size() >= 3) {
      k.fx = k.fy = params[0];
      k.cx = params[1];
      k.cy = params[2];
    } else if (two_focal && params.size() >= 4) {
      k.fx = params[0];
      k.fy = params[1];
      k.cx = params[2];
      k.cy = params[3];
    } else {
      fail(lineno, "unsupported camera model or missing parameters: " + model);
    }
    try {
      k.validate();
    } catch (const Error& e) {
      fail(lineno, e.what());
    }
    if (!cameras.emplace(id, k).second) fail(lineno, "duplicate CAMERA_ID " + std::to_string(id));
  }
  return cameras;
}

}  // namespace evsynth::io
