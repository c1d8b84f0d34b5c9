#pragma once

// Raw (non-canonical) quaternion helpers shared by slerp and the rotation
// spline. Sign continuity matters there, so nothing here canonicalizes.

#include <cmath>

#include <Eigen/Geometry>

namespace evsynth::geometry::detail {

inline constexpr double kSlerpLinearThreshold = 1.0 - 1e-9;

// Angle between two unit 4-vectors, stable for nearly parallel inputs.
inline double chord_angle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  return 2.0 * std::atan2((a.coeffs() - b.coeffs()).norm(), (a.coeffs() + b.coeffs()).norm());
}

inline Eigen::Quaterniond normalized(const Eigen::Vector4d& coeffs) {
  Eigen::Quaterniond q;
  q.coeffs() = coeffs / coeffs.norm();
  return q;
}

// Slerp without canonicalization. Aligns b to the hemisphere of a.
inline Eigen::Quaterniond slerp_raw(const Eigen::Quaterniond& a, Eigen::Quaterniond b, double u) {
  if (a.coeffs().dot(b.coeffs()) < 0.0) b.coeffs() = -b.coeffs();
  if (u == 0.0) return a;
  if (u == 1.0) return b;
  const double dot = a.coeffs().dot(b.coeffs());
  if (dot > kSlerpLinearThreshold) {
    return normalized((1.0 - u) * a.coeffs() + u * b.coeffs());
  }
  const double omega = chord_angle(a, b);
  const double s = std::sin(omega);
  const double wa = std::sin((1.0 - u) * omega) / s;
  const double wb = std::sin(u * omega) / s;
  return normalized(wa * a.coeffs() + wb * b.coeffs());
}

// Rotation vector (axis * angle) of a unit quaternion, angle in [0, 2pi).
inline Eigen::Vector3d log_map(const Eigen::Quaterniond& q) {
  const Eigen::Vector3d v = q.vec();
  const double n = v.norm();
  if (n < 1e-12) return 2.0 * v / q.w();
  return 2.0 * std::atan2(n, q.w()) * v / n;
}

inline Eigen::Quaterniond exp_map(const Eigen::Vector3d& r) {
  const double angle = r.norm();
  if (angle < 1e-12) return normalized(Eigen::Vector4d(0.5 * r.x(), 0.5 * r.y(), 0.5 * r.z(), 1.0));
  const double half = 0.5 * angle;
  const Eigen::Vector3d axis = r / angle;
  Eigen::Quaterniond q;
  q.w() = std::cos(half);
  q.vec() = std::sin(half) * axis;
  return q;
}

}  // namespace evsynth::geometry::detail
