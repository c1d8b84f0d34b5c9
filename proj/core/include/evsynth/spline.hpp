#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "evsynth/geometry.hpp"

namespace evsynth::trajectory {

/// Interpolating pose curve over a strictly increasing knot vector (the
/// cumulative weighted arc length of the control poses).
///
/// Translation is a natural cubic spline through the control translations
/// (linear for two controls). Rotation is a piecewise cubic quaternion Bezier
/// evaluated by de Casteljau slerps; inner control points come from a
/// knot-weighted angular-rate estimate at each control, and consecutive
/// controls are sign-aligned. Both channels reproduce the controls at knots.
class PoseSpline {
 public:
  /// Throws kInsufficientPoses for fewer than two controls, kInvalidArgument
  /// for mismatched sizes or knots that are not strictly increasing.
  static PoseSpline fit(std::span<const geometry::Pose> controls, std::span<const double> knots);

  double start() const { return knots_.front(); }
  double end() const { return knots_.back(); }
  std::size_t control_count() const { return knots_.size(); }
  std::span<const double> knots() const { return knots_; }

  /// Throws kInvalidArgument outside [start(), end()].
  geometry::Pose evaluate(double s) const;

 private:
  std::size_t segment_of(double s) const;

  std::vector<double> knots_;
  std::vector<Eigen::Vector3d> points_;
  std::vector<Eigen::Vector3d> second_derivatives_;
  // Four Bezier control quaternions per segment.
  std::vector<Eigen::Quaterniond> rotation_controls_;
  std::optional<std::uint32_t> intrinsics_id_;
};

/// Degree-d Bezier pose curve fitted to keyframes at parameters u = s / S.
/// The end control points are pinned to the first and last keyframes; the
/// interior ones are fitted by least squares (minimum-norm offset from the
/// chord when underdetermined). Rotation is fitted the same way on
/// sign-aligned quaternions and renormalized on evaluation.
class BezierPoseCurve {
 public:
  static BezierPoseCurve fit(std::span<const geometry::Pose> keyframes,
                             std::span<const double> knots, int degree);

  int degree() const { return static_cast<int>(translation_controls_.size()) - 1; }
  double length() const { return length_; }

  /// s in [0, length()].
  geometry::Pose evaluate(double s) const;

 private:
  double length_ = 0.0;
  std::vector<Eigen::Vector3d> translation_controls_;
  std::vector<Eigen::Vector4d> rotation_controls_;
  std::optional<std::uint32_t> intrinsics_id_;
};

}  // namespace evsynth::trajectory
