#include "evsynth/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "evsynth/error.hpp"
#include "evsynth/rng.hpp"

namespace evsynth::trajectory {
namespace {

// Substream tags so keyframe sampling and curve choice never share draws.
constexpr std::uint32_t kKeyframeStream = 0x4b455946u;
constexpr std::uint32_t kCurveStream = 0x43555256u;

std::vector<std::uint64_t> uniform_timestamps(std::size_t count, double fps,
                                              const std::optional<std::uint64_t>& duration_us) {
  std::vector<std::uint64_t> times(count, 0);
  if (count < 2) return times;
  if (duration_us) {
    if (*duration_us < count - 1) {
      throw Error(ErrorCode::kInvalidArgument, "duration too short for distinct microsecond stamps");
    }
    // floor(j * D / n) computed as j * q + floor(j * r / n) with D = q * n + r.
    const std::uint64_t n = count - 1;
    const std::uint64_t q = *duration_us / n;
    const std::uint64_t r = *duration_us % n;
    for (std::size_t j = 1; j < count; ++j) times[j] = j * q + j * r / n;
    return times;
  }
  const std::uint64_t period = frame_period_us(fps);
  for (std::size_t j = 0; j < count; ++j) times[j] = j * period;
  return times;
}

}  // namespace

Trajectory Trajectory::from_poses(std::vector<Pose> poses, const DisplacementWeights& weights) {
  Trajectory t;
  t.arclens = cumulative_arclength(poses, weights);
  t.poses = std::move(poses);
  t.weights = weights;
  return t;
}

std::vector<Pose> smooth_poses(std::span<const Pose> poses, std::size_t half_width) {
  if (poses.empty()) throw Error(ErrorCode::kInsufficientPoses, "no poses to smooth");
  const std::size_t n = poses.size();
  std::vector<Pose> out(poses.begin(), poses.end());
  std::vector<geometry::Rotation> window;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > half_width ? i - half_width : 0;
    const std::size_t hi = std::min(n - 1, i + half_width);
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    window.clear();
    for (std::size_t j = lo; j <= hi; ++j) {
      sum += poses[j].translation;
      window.push_back(poses[j].rotation);
    }
    out[i].translation = sum / static_cast<double>(hi - lo + 1);
    out[i].rotation = geometry::window_rotation_average(window);
  }
  return out;
}

std::vector<double> cumulative_arclength(std::span<const Pose> poses,
                                         const DisplacementWeights& weights) {
  if (poses.empty()) throw Error(ErrorCode::kInsufficientPoses, "no poses for arc length");
  weights.validate();
  std::vector<double> s(poses.size(), 0.0);
  for (std::size_t i = 1; i < poses.size(); ++i) {
    s[i] = s[i - 1] + geometry::pose_displacement(poses[i - 1], poses[i], weights);
  }
  return s;
}

PoseSpline fit_pose_spline(const Trajectory& traj) {
  if (traj.poses.size() != traj.arclens.size()) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory arc lengths do not match its poses");
  }
  if (traj.poses.size() < 2) {
    throw Error(ErrorCode::kInsufficientPoses, "spline fitting needs at least two poses");
  }
  std::vector<Pose> controls;
  std::vector<double> knots;
  for (std::size_t i = 0; i < traj.poses.size(); ++i) {
    if (!knots.empty() && !(traj.arclens[i] > knots.back())) continue;
    controls.push_back(traj.poses[i]);
    knots.push_back(traj.arclens[i]);
  }
  if (controls.size() < 2) {
    throw Error(ErrorCode::kDegeneratePath, "all poses coincide; path length is zero");
  }
  return PoseSpline::fit(controls, knots);
}

std::size_t dense_count(std::size_t input_count, double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument, "interpolation multiplier must exceed 1");
  }
  const double product = gamma * static_cast<double>(input_count);
  // 5 * 30 must give 150, not 151, even if the product lands one ulp high.
  return static_cast<std::size_t>(std::ceil(product * (1.0 - 1e-12)));
}

Trajectory densify(std::span<const Pose> poses, double gamma, const VelocityProfile& profile,
                   const DisplacementWeights& weights, std::size_t half_width,
                   const DensifyOptions& options) {
  if (poses.size() < 2) {
    throw Error(ErrorCode::kInsufficientPoses, "densification needs at least two poses");
  }
  weights.validate();
  const std::size_t m = dense_count(poses.size(), gamma);

  const Trajectory base = Trajectory::from_poses(smooth_poses(poses, half_width), weights);
  const PoseSpline spline = fit_pose_spline(base);
  const std::vector<double> speeds = sample_profile(profile, m);
  const std::vector<double> targets = reparameterize(base.length(), speeds);
  const std::vector<std::uint64_t> times = uniform_timestamps(m, options.fps, options.duration_us);

  std::vector<Pose> dense;
  dense.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Pose p = spline.evaluate(targets[j]);
    p.time_us = times[j];
    p.intrinsics_id = poses.front().intrinsics_id;
    dense.push_back(std::move(p));
  }
  return Trajectory::from_poses(std::move(dense), weights);
}

std::vector<std::vector<std::size_t>> sample_keyframe_groups(const Trajectory& dense,
                                                             std::size_t groups,
                                                             std::size_t keyframes,
                                                             std::uint64_t seed) {
  if (groups < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one group");
  if (keyframes < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two keyframes");
  const std::size_t m = dense.size();
  if (keyframes > m) {
    throw Error(ErrorCode::kInsufficientPoses, "cannot draw " + std::to_string(keyframes) +
                                                   " keyframes from " + std::to_string(m) +
                                                   " poses");
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups);
  std::vector<std::size_t> pool(m);
  for (std::size_t g = 0; g < groups; ++g) {
    rng::CounterStream stream(seed, kKeyframeStream, static_cast<std::uint32_t>(g));
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first K slots are a uniform K-subset.
    for (std::size_t k = 0; k < keyframes; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(stream.bounded(m - k));
      std::swap(pool[k], pool[pick]);
    }
    std::vector<std::size_t> group(pool.begin(), pool.begin() + static_cast<long>(keyframes));
    std::sort(group.begin(), group.end());
    out.push_back(std::move(group));
  }
  return out;
}

CurveKind draw_curve_kind(std::uint64_t seed, std::size_t group) {
  rng::CounterStream stream(seed, kCurveStream, static_cast<std::uint32_t>(group));
  if (stream.bounded(2) == 0) return CurveKind::bspline();
  return CurveKind::bezier(2 + static_cast<int>(stream.bounded(4)));
}

MiniTrajectory augment_mini_trajectory(const Trajectory& dense,
                                       std::span<const std::size_t> group, std::size_t frames,
                                       const CurveKind& curve, const DisplacementWeights& weights,
                                       const AugmentOptions& options) {
  if (frames < 2) throw Error(ErrorCode::kInvalidArgument, "mini-trajectory needs F >= 2");
  if (group.size() < 2) throw Error(ErrorCode::kInvalidArgument, "group needs >= 2 keyframes");
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (group[k] >= dense.size() || (k > 0 && group[k] <= group[k - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "keyframe indices must be strictly increasing and in range");
    }
  }
  if (curve.type == CurveKind::Type::kBezier && (curve.degree < 2 || curve.degree > 5)) {
    throw Error(ErrorCode::kInvalidArgument, "Bezier degree must lie in [2, 5]");
  }

  std::vector<Pose> keys;
  keys.reserve(group.size());
  for (std::size_t idx : group) keys.push_back(dense.poses[idx]);
  const Trajectory local = Trajectory::from_poses(keys, weights);
  const double length = local.length();
  if (!(length > 0.0)) {
    throw Error(ErrorCode::kDegeneratePath, "keyframe group spans zero path length");
  }

  std::vector<double> targets;
  if (options.profile) {
    targets = reparameterize(length, sample_profile(*options.profile, frames));
  } else {
    targets.resize(frames);
    for (std::size_t l = 0; l < frames; ++l) {
      targets[l] = static_cast<double>(l) * length / static_cast<double>(frames - 1);
    }
    targets.back() = length;
  }

  MiniTrajectory mini;
  mini.source_keyframe_indices.assign(group.begin(), group.end());
  mini.curve = curve;
  mini.intrinsics_id = keys.front().intrinsics_id;
  mini.poses.reserve(frames);

  const std::vector<std::uint64_t> times = uniform_timestamps(frames, options.fps, std::nullopt);
  auto emit = [&](Pose p, std::size_t l) {
    p.intrinsics_id = mini.intrinsics_id;
    p.time_us = times[l];
    mini.poses.push_back(std::move(p));
  };
  if (curve.type == CurveKind::Type::kBSpline) {
    const PoseSpline spline = fit_pose_spline(local);
    for (std::size_t l = 0; l < frames; ++l) emit(spline.evaluate(targets[l]), l);
  } else {
    const BezierPoseCurve bezier = BezierPoseCurve::fit(local.poses, local.arclens, curve.degree);
    for (std::size_t l = 0; l < frames; ++l) emit(bezier.evaluate(targets[l]), l);
  }
  return mini;
}

}  // namespace evsynth::trajectory
