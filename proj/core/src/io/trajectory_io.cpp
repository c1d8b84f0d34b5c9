#include "evsynth/io/trajectory_io.hpp"

#include <cstdio>
#include <string>

#include "evsynth/error.hpp"
#include "text_util.hpp"

namespace evsynth::io {

std::string write_trajectory(std::span<const geometry::Pose> poses) {
  std::string out;
  char buf[512];
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto& p = poses[i];
    const std::string time = p.time_us ? std::to_string(*p.time_us) : "-1";
    const std::string intr = p.intrinsics_id ? std::to_string(*p.intrinsics_id) : "-1";
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g %.17g %.17g %.17g %.17g %.17g %s %s\n", i,
                  p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z(),
                  p.translation.x(), p.translation.y(), p.translation.z(), time.c_str(),
                  intr.c_str());
    out += buf;
  }
  return out;
}

std::vector<geometry::Pose> read_trajectory(std::string_view text) {
  std::vector<geometry::Pose> poses;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = detail::split_fields(lines[i]);
    if (f.empty()) continue;
    const std::string where = "trajectory line " + std::to_string(i + 1);
    if (f.size() != 10) throw Error(ErrorCode::kParse, where + ": expected 10 fields");
    const auto id = detail::parse_number<std::size_t>(f[0]);
    if (!id || *id != poses.size()) throw Error(ErrorCode::kParse, where + ": bad frame id");
    double v[7];
    for (int k = 0; k < 7; ++k) {
      const auto d = detail::parse_number<double>(f[1 + k]);
      if (!d) throw Error(ErrorCode::kParse, where + ": non-numeric pose field");
      v[k] = *d;
    }
    geometry::Pose p;
    try {
      p.rotation = geometry::Rotation(v[0], v[1], v[2], v[3]);
    } catch (const Error&) {
      throw Error(ErrorCode::kParse, where + ": invalid quaternion");
    }
    p.translation = Eigen::Vector3d(v[4], v[5], v[6]);
    if (f[8] != "-1") {
      const auto t = detail::parse_number<std::uint64_t>(f[8]);
      if (!t) throw Error(ErrorCode::kParse, where + ": bad time_us");
      p.time_us = *t;
    }
    if (f[9] != "-1") {
      const auto k = detail::parse_number<std::uint32_t>(f[9]);
      if (!k) throw Error(ErrorCode::kParse, where + ": bad intrinsics_id");
      p.intrinsics_id = *k;
    }
    poses.push_back(p);
  }
  return poses;
}

}  // namespace evsynth::io
