#include "evsynth/geometry.hpp"

#include <cmath>
#include <string>

#include "evsynth/error.hpp"
#include "quaternion_ops.hpp"

namespace evsynth::geometry {
namespace {

Eigen::Quaterniond canonical(Eigen::Quaterniond q) {
  const double n = q.coeffs().norm();
  if (!std::isfinite(n) || n < 1e-300) {
    throw Error(ErrorCode::kInvalidArgument, "rotation quaternion must be finite and nonzero");
  }
  q.coeffs() /= n;
  bool flip = q.w() < 0.0;
  if (q.w() == 0.0) {
    for (double c : {q.x(), q.y(), q.z()}) {
      if (c != 0.0) {
        flip = c < 0.0;
        break;
      }
    }
  }
  if (flip) q.coeffs() = -q.coeffs();
  // Collapse signed zeros so q and -q are bit-identical.
  q.coeffs() = q.coeffs().array() + 0.0;
  return q;
}

}  // namespace

Rotation::Rotation(double w, double x, double y, double z)
    : q_(canonical(Eigen::Quaterniond(w, x, y, z))) {}

Rotation::Rotation(const Eigen::Quaterniond& q) : q_(canonical(q)) {}

Rotation Rotation::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(angle)) {
    throw Error(ErrorCode::kInvalidArgument, "axis must be nonzero and angle finite");
  }
  return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis / n)));
}

Rotation Rotation::from_matrix(const Eigen::Matrix3d& m) {
  return Rotation(Eigen::Quaterniond(m));
}

Rotation Rotation::inverse() const { return Rotation(q_.conjugate()); }

Rotation Rotation::operator*(const Rotation& rhs) const { return Rotation(q_ * rhs.q_); }

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive");
  }
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw Error(ErrorCode::kInvalidArgument, "principal point outside the image");
  }
}

void DisplacementWeights::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha + beta > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta)) {
    throw Error(ErrorCode::kInvalidArgument,
                "displacement weights must be nonnegative with a positive sum");
  }
}

double geodesic_distance(const Rotation& a, const Rotation& b) {
  // Same angle as acos((tr(Rb Ra^T) - 1) / 2), but well conditioned near 0.
  const Eigen::Quaterniond rel = a.quaternion().conjugate() * b.quaternion();
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

Rotation slerp(const Rotation& a, const Rotation& b, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "slerp parameter must lie in [0, 1]");
  }
  return Rotation(detail::slerp_raw(a.quaternion(), b.quaternion(), u));
}

Rotation window_rotation_average(std::span<const Rotation> rotations) {
  if (rotations.empty()) {
    throw Error(ErrorCode::kDegenerateWindow, "empty rotation window");
  }
  const Eigen::Vector4d ref = rotations.front().quaternion().coeffs();
  Eigen::Vector4d sum = Eigen::Vector4d::Zero();
  for (const Rotation& r : rotations) {
    const Eigen::Vector4d c = r.quaternion().coeffs();
    sum += ref.dot(c) < 0.0 ? Eigen::Vector4d(-c) : c;
  }
  const Eigen::Vector4d mean = sum / static_cast<double>(rotations.size());
  if (mean.norm() < 1e-6) {
    throw Error(ErrorCode::kDegenerateWindow, "rotation window mean vanishes (antipodal inputs)");
  }
  return Rotation(detail::normalized(mean));
}

double pose_displacement(const Pose& a, const Pose& b, const DisplacementWeights& w) {
  return w.alpha * geodesic_distance(a.rotation, b.rotation) +
         w.beta * (b.translation - a.translation).norm();
}

}  // namespace evsynth::geometry
