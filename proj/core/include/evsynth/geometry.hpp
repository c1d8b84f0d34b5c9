#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace evsynth::geometry {

/// Unit quaternion rotation kept in canonical form (w >= 0; on a tie the
/// first nonzero component is positive), so q and -q compare bit-identical.
class Rotation {
 public:
  Rotation() = default;

  /// Normalizes and canonicalizes. Throws kInvalidArgument on a zero or
  /// non-finite quaternion.
  Rotation(double w, double x, double y, double z);
  explicit Rotation(const Eigen::Quaterniond& q);

  static Rotation identity() { return {}; }
  static Rotation from_axis_angle(const Eigen::Vector3d& axis, double angle);
  static Rotation from_matrix(const Eigen::Matrix3d& m);

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  const Eigen::Quaterniond& quaternion() const { return q_; }
  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }
  Eigen::Vector3d rotate(const Eigen::Vector3d& v) const { return q_ * v; }

  Rotation inverse() const;
  Rotation operator*(const Rotation& rhs) const;

  friend bool operator==(const Rotation& a, const Rotation& b) {
    return a.q_.coeffs() == b.q_.coeffs();
  }

 private:
  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

struct Pose {
  Rotation rotation;
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  std::optional<std::uint64_t> time_us;
  std::optional<std::uint32_t> intrinsics_id;
};

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  /// Throws kInvalidArgument unless fx, fy > 0 and the principal point lies
  /// inside the image.
  void validate() const;
};

/// Weights of the rotational (per radian) and translational (per scene unit)
/// terms of the pose displacement metric.
struct DisplacementWeights {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
};

/// Angle of the relative rotation, in [0, pi].
double geodesic_distance(const Rotation& a, const Rotation& b);

/// Constant angular speed interpolation along the shorter arc. Falls back to
/// normalized lerp when the endpoints are nearly identical.
Rotation slerp(const Rotation& a, const Rotation& b, double u);

/// Sign-aligned normalized quaternion mean. For two rotations this is the
/// slerp midpoint. Throws kDegenerateWindow for an empty or antipodal window.
Rotation window_rotation_average(std::span<const Rotation> rotations);

/// alpha * geodesic angle + beta * translation distance.
double pose_displacement(const Pose& a, const Pose& b, const DisplacementWeights& w);

}  // namespace evsynth::geometry
