#include "evsynth/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "evsynth/error.hpp"
#include "quaternion_ops.hpp"

namespace evsynth::trajectory {

using geometry::Pose;
using geometry::Rotation;

namespace {

// Natural cubic spline second derivatives (Thomas algorithm).
std::vector<Eigen::Vector3d> natural_second_derivatives(std::span<const double> s,
                                                        std::span<const Eigen::Vector3d> y) {
  const std::size_t n = s.size();
  std::vector<Eigen::Vector3d> m(n, Eigen::Vector3d::Zero());
  if (n < 3) return m;

  const std::size_t inner = n - 2;
  std::vector<double> diag(inner), upper(inner);
  std::vector<Eigen::Vector3d> rhs(inner);
  for (std::size_t k = 0; k < inner; ++k) {
    const std::size_t i = k + 1;
    const double h0 = s[i] - s[i - 1];
    const double h1 = s[i + 1] - s[i];
    diag[k] = 2.0 * (h0 + h1);
    upper[k] = h1;
    rhs[k] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  // Forward sweep; the sub-diagonal entry of row k is h_{k} = s[k+1] - s[k].
  for (std::size_t k = 1; k < inner; ++k) {
    const double lower = s[k + 1] - s[k];
    const double w = lower / diag[k - 1];
    diag[k] -= w * upper[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  m[inner] = rhs[inner - 1] / diag[inner - 1];
  for (std::size_t k = inner - 1; k-- > 0;) {
    m[k + 1] = (rhs[k] - upper[k] * m[k + 2]) / diag[k];
  }
  return m;
}

Eigen::Quaterniond de_casteljau(const Eigen::Quaterniond* c, double u) {
  using geometry::detail::slerp_raw;
  const Eigen::Quaterniond a = slerp_raw(c[0], c[1], u);
  const Eigen::Quaterniond b = slerp_raw(c[1], c[2], u);
  const Eigen::Quaterniond d = slerp_raw(c[2], c[3], u);
  return slerp_raw(slerp_raw(a, b, u), slerp_raw(b, d, u), u);
}

void check_knots(std::size_t controls, std::span<const double> knots) {
  if (controls != knots.size()) {
    throw Error(ErrorCode::kInvalidArgument, "control and knot counts differ");
  }
  if (controls < 2) {
    throw Error(ErrorCode::kInsufficientPoses, "a pose curve needs at least two controls");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || (i > 0 && !(knots[i] > knots[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "knots must be finite and strictly increasing");
    }
  }
}

// Bernstein basis values B_{m,d}(u), m = 0..d.
Eigen::VectorXd bernstein(int degree, double u) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(degree + 1);
  b[0] = 1.0;
  const double v = 1.0 - u;
  for (int j = 1; j <= degree; ++j) {
    double saved = 0.0;
    for (int m = 0; m < j; ++m) {
      const double t = b[m];
      b[m] = saved + v * t;
      saved = u * t;
    }
    b[j] = saved;
  }
  return b;
}

template <int Dim>
std::vector<Eigen::Matrix<double, Dim, 1>> fit_pinned_bezier(
    std::span<const Eigen::Matrix<double, Dim, 1>> data, std::span<const double> params,
    int degree) {
  using Vec = Eigen::Matrix<double, Dim, 1>;
  const Vec first = data.front();
  const Vec last = data.back();
  std::vector<Vec> controls(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    const double f = static_cast<double>(m) / degree;
    controls[m] = (1.0 - f) * first + f * last;
  }
  const std::size_t rows = data.size() - 2;
  const int unknowns = degree - 1;
  if (rows == 0 || unknowns == 0) return controls;

  // Offsets of the interior controls from the chord; the chord itself is
  // reproduced exactly by Bernstein linear precision.
  Eigen::MatrixXd a(rows, unknowns);
  Eigen::MatrixXd rhs(rows, Dim);
  for (std::size_t k = 0; k < rows; ++k) {
    const double u = params[k + 1];
    const Eigen::VectorXd b = bernstein(degree, u);
    a.row(k) = b.segment(1, unknowns).transpose();
    rhs.row(k) = (data[k + 1] - ((1.0 - u) * first + u * last)).transpose();
  }
  const Eigen::MatrixXd offsets = a.completeOrthogonalDecomposition().solve(rhs);
  for (int m = 1; m < degree; ++m) {
    controls[m] += offsets.row(m - 1).transpose();
  }
  return controls;
}

template <class Vec>
Vec evaluate_bezier(const std::vector<Vec>& controls, double u) {
  std::vector<Vec> work = controls;
  for (std::size_t level = work.size() - 1; level > 0; --level) {
    for (std::size_t m = 0; m < level; ++m) {
      work[m] = (1.0 - u) * work[m] + u * work[m + 1];
    }
  }
  return work.front();
}

}  // namespace

PoseSpline PoseSpline::fit(std::span<const Pose> controls, std::span<const double> knots) {
  check_knots(controls.size(), knots);
  const std::size_t n = controls.size();

  PoseSpline spline;
  spline.knots_.assign(knots.begin(), knots.end());
  spline.intrinsics_id_ = controls.front().intrinsics_id;
  spline.points_.reserve(n);
  for (const Pose& p : controls) spline.points_.push_back(p.translation);
  spline.second_derivatives_ = natural_second_derivatives(spline.knots_, spline.points_);

  std::vector<Eigen::Quaterniond> q(n);
  q[0] = controls[0].rotation.quaternion();
  for (std::size_t i = 1; i < n; ++i) {
    q[i] = controls[i].rotation.quaternion();
    if (q[i].coeffs().dot(q[i - 1].coeffs()) < 0.0) q[i].coeffs() = -q[i].coeffs();
  }

  // Body-frame angular rate per unit arc length at each control.
  std::vector<Eigen::Vector3d> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Vector3d forward = Eigen::Vector3d::Zero();
    Eigen::Vector3d backward = Eigen::Vector3d::Zero();
    double h_fwd = 0.0;
    double h_bwd = 0.0;
    if (i + 1 < n) {
      h_fwd = knots[i + 1] - knots[i];
      forward = geometry::detail::log_map(q[i].conjugate() * q[i + 1]) / h_fwd;
    }
    if (i > 0) {
      h_bwd = knots[i] - knots[i - 1];
      backward = -geometry::detail::log_map(q[i].conjugate() * q[i - 1]) / h_bwd;
    }
    if (i == 0) {
      rate[i] = forward;
    } else if (i + 1 == n) {
      rate[i] = backward;
    } else {
      rate[i] = (h_fwd * backward + h_bwd * forward) / (h_bwd + h_fwd);
    }
  }

  spline.rotation_controls_.reserve(4 * (n - 1));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = knots[i + 1] - knots[i];
    spline.rotation_controls_.push_back(q[i]);
    spline.rotation_controls_.push_back(q[i] * geometry::detail::exp_map(rate[i] * (h / 3.0)));
    spline.rotation_controls_.push_back(q[i + 1] *
                                        geometry::detail::exp_map(rate[i + 1] * (-h / 3.0)));
    spline.rotation_controls_.push_back(q[i + 1]);
  }
  return spline;
}

std::size_t PoseSpline::segment_of(double s) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const auto idx = static_cast<std::size_t>(std::distance(knots_.begin(), it));
  return std::clamp<std::size_t>(idx, 1, knots_.size() - 1) - 1;
}

Pose PoseSpline::evaluate(double s) const {
  if (!(s >= start() && s <= end())) {
    throw Error(ErrorCode::kInvalidArgument,
                "spline query " + std::to_string(s) + " outside its domain");
  }
  const std::size_t i = segment_of(s);
  const double h = knots_[i + 1] - knots_[i];
  const double b = (s - knots_[i]) / h;
  const double a = 1.0 - b;

  Pose pose;
  pose.translation = a * points_[i] + b * points_[i + 1] +
                     ((a * a * a - a) * second_derivatives_[i] +
                      (b * b * b - b) * second_derivatives_[i + 1]) *
                         (h * h / 6.0);
  pose.rotation = Rotation(de_casteljau(&rotation_controls_[4 * i], b));
  pose.intrinsics_id = intrinsics_id_;
  return pose;
}

BezierPoseCurve BezierPoseCurve::fit(std::span<const Pose> keyframes,
                                     std::span<const double> knots, int degree) {
  if (degree < 1) throw Error(ErrorCode::kInvalidArgument, "Bezier degree must be positive");
  if (keyframes.size() != knots.size()) {
    throw Error(ErrorCode::kInvalidArgument, "keyframe and knot counts differ");
  }
  if (keyframes.size() < 2) {
    throw Error(ErrorCode::kInsufficientPoses, "a Bezier curve needs at least two keyframes");
  }
  const double length = knots.back() - knots.front();
  if (!(length > 0.0)) throw Error(ErrorCode::kDegeneratePath, "keyframes span zero length");

  std::vector<double> params(knots.size());
  for (std::size_t k = 0; k < knots.size(); ++k) {
    params[k] = (knots[k] - knots.front()) / length;
  }

  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector4d> quats;
  for (const Pose& p : keyframes) {
    points.push_back(p.translation);
    Eigen::Vector4d c = p.rotation.quaternion().coeffs();
    if (!quats.empty() && c.dot(quats.front()) < 0.0) c = -c;
    quats.push_back(c);
  }

  BezierPoseCurve curve;
  curve.length_ = length;
  curve.intrinsics_id_ = keyframes.front().intrinsics_id;
  curve.translation_controls_ =
      fit_pinned_bezier<3>(std::span<const Eigen::Vector3d>(points), params, degree);
  curve.rotation_controls_ =
      fit_pinned_bezier<4>(std::span<const Eigen::Vector4d>(quats), params, degree);
  return curve;
}

Pose BezierPoseCurve::evaluate(double s) const {
  if (!(s >= 0.0 && s <= length_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "Bezier query " + std::to_string(s) + " outside its domain");
  }
  const double u = s / length_;
  Pose pose;
  pose.translation = evaluate_bezier(translation_controls_, u);
  const Eigen::Vector4d c = evaluate_bezier(rotation_controls_, u);
  if (c.norm() < 1e-9) {
    throw Error(ErrorCode::kDegeneratePath, "rotation Bezier passes through zero");
  }
  pose.rotation = Rotation(geometry::detail::normalized(c));
  pose.intrinsics_id = intrinsics_id_;
  return pose;
}

}  // namespace evsynth::trajectory
