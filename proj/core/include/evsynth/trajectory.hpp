#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evsynth/geometry.hpp"
#include "evsynth/profile.hpp"
#include "evsynth/spline.hpp"
#include "evsynth/timing.hpp"

namespace evsynth::trajectory {

using geometry::DisplacementWeights;
using geometry::Pose;

/// Ordered poses with their cumulative weighted arc length (arclens[0] = 0).
struct Trajectory {
  std::vector<Pose> poses;
  std::vector<double> arclens;
  DisplacementWeights weights;

  static Trajectory from_poses(std::vector<Pose> poses, const DisplacementWeights& weights);

  std::size_t size() const { return poses.size(); }
  double length() const { return arclens.empty() ? 0.0 : arclens.back(); }
};

/// Moving-window smoothing with half-width w; windows are truncated at the
/// sequence ends. Translation is the window mean, rotation the window
/// rotation average. Timestamps and intrinsics are kept per pose.
std::vector<Pose> smooth_poses(std::span<const Pose> poses, std::size_t half_width);

std::vector<double> cumulative_arclength(std::span<const Pose> poses,
                                         const DisplacementWeights& weights);

/// Fits the interpolating pose spline after collapsing zero-displacement
/// neighbours. Throws kDegeneratePath when the whole path has zero length.
PoseSpline fit_pose_spline(const Trajectory& traj);

/// M = ceil(gamma * N), guarded against floating-point overshoot.
std::size_t dense_count(std::size_t input_count, double gamma);

struct DensifyOptions {
  double fps = kDefaultFps;
  /// When set, timestamps are spread uniformly over this many microseconds.
  std::optional<std::uint64_t> duration_us;
};

/// smooth -> arc length -> sample speed profile -> reparameterize -> evaluate
/// spline at the target arc lengths. Output has dense_count(N, gamma) poses.
Trajectory densify(std::span<const Pose> poses, double gamma, const VelocityProfile& profile,
                   const DisplacementWeights& weights, std::size_t half_width,
                   const DensifyOptions& options = {});

/// G groups of K distinct indices into the dense trajectory, each sorted.
/// Deterministic in seed. Throws kInsufficientPoses when K > M.
std::vector<std::vector<std::size_t>> sample_keyframe_groups(const Trajectory& dense,
                                                             std::size_t groups,
                                                             std::size_t keyframes,
                                                             std::uint64_t seed);

struct CurveKind {
  enum class Type { kBSpline, kBezier };
  Type type = Type::kBSpline;
  int degree = 3;

  static CurveKind bspline() { return {Type::kBSpline, 3}; }
  static CurveKind bezier(int degree) { return {Type::kBezier, degree}; }

  friend bool operator==(const CurveKind&, const CurveKind&) = default;
};

/// Random curve for group `group`: B-spline or Bezier of degree 2..5, drawn
/// from a seeded substream.
CurveKind draw_curve_kind(std::uint64_t seed, std::size_t group);

struct MiniTrajectory {
  std::vector<Pose> poses;
  std::vector<std::size_t> source_keyframe_indices;
  CurveKind curve;
  std::optional<std::uint32_t> intrinsics_id;
};

struct AugmentOptions {
  /// Off by default: targets are uniform in local arc length.
  std::optional<VelocityProfile> profile;
  double fps = kDefaultFps;
};

MiniTrajectory augment_mini_trajectory(const Trajectory& dense,
                                       std::span<const std::size_t> group, std::size_t frames,
                                       const CurveKind& curve, const DisplacementWeights& weights,
                                       const AugmentOptions& options = {});

}  // namespace evsynth::trajectory
