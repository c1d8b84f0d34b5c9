#include "evsynth/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evsynth/error.hpp"

namespace evsynth::trajectory {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double speed_list_at(const SpeedList& list, double t) {
  const std::size_t segments = list.multipliers.size();
  const double segment = 1.0 / static_cast<double>(segments);
  // Kernel support [-2h, 2h] spans the 2*tau window centred on a boundary.
  const double h = 0.5 * list.blend_tau_fraction * segment;
  double v = list.multipliers.front();
  for (std::size_t k = 1; k < segments; ++k) {
    const double boundary = static_cast<double>(k) * segment;
    const double step = list.multipliers[k] - list.multipliers[k - 1];
    v += step * cubic_bspline_step((t - boundary) / h);
  }
  return v;
}

}  // namespace

AnalyticProfile sinusoidal_profile() {
  return {[](double t) { return 0.25 * std::sin(t) + 1.1; }, "gs2e"};
}

AnalyticProfile constant_profile(double speed) {
  return {[speed](double) { return speed; }, "const:" + std::to_string(speed)};
}

void validate(const SpeedList& list) {
  if (list.multipliers.empty()) {
    throw Error(ErrorCode::kInvalidProfile, "speed list is empty");
  }
  for (double r : list.multipliers) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::kInvalidProfile, "speed multipliers must be positive and finite");
    }
  }
  if (!(list.base_fps > 0.0)) {
    throw Error(ErrorCode::kInvalidProfile, "base frame rate must be positive");
  }
  // Blend windows of neighbouring boundaries must not overlap.
  if (!(list.blend_tau_fraction > 0.0 && list.blend_tau_fraction <= 0.5)) {
    throw Error(ErrorCode::kInvalidProfile, "blend tau fraction must lie in (0, 0.5]");
  }
}

double cubic_bspline_step(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  if (x > 0.0) return 1.0 - cubic_bspline_step(-x);
  if (x <= -1.0) {
    const double a = x + 2.0;
    return a * a * a * a / 24.0;
  }
  // Integral of (4 - 6y^2 - 3y^3) / 6 from -1, plus the mass 1/24 below -1.
  const double x2 = x * x;
  return 0.5 + (4.0 * x - 2.0 * x2 * x - 0.75 * x2 * x2) / 6.0;
}

double speed_at(const VelocityProfile& profile, double t) {
  t = std::clamp(t, 0.0, 1.0);
  return std::visit(Overloaded{
                        [t](const AnalyticProfile& p) { return p.v(t); },
                        [t](const SpeedList& list) {
                          validate(list);
                          return speed_list_at(list, t);
                        },
                    },
                    profile);
}

std::vector<double> sample_profile(const VelocityProfile& profile, std::size_t sample_count) {
  if (sample_count < 2) {
    throw Error(ErrorCode::kInvalidArgument, "profile needs at least 2 samples");
  }
  if (const auto* list = std::get_if<SpeedList>(&profile)) validate(*list);
  if (const auto* fn = std::get_if<AnalyticProfile>(&profile); fn && !fn->v) {
    throw Error(ErrorCode::kInvalidProfile, "analytic profile has no function");
  }

  std::vector<double> speeds(sample_count - 1);
  const double denom = static_cast<double>(sample_count - 1);
  for (std::size_t j = 0; j + 1 < sample_count; ++j) {
    const double u = speed_at(profile, static_cast<double>(j) / denom);
    if (!(u > 0.0) || !std::isfinite(u)) {
      throw Error(ErrorCode::kInvalidProfile,
                  "speed at sample " + std::to_string(j) + " is not positive");
    }
    speeds[j] = u;
  }
  return speeds;
}

std::vector<double> reparameterize(double total_length, std::span<const double> speeds) {
  if (!(total_length >= 0.0) || !std::isfinite(total_length)) {
    throw Error(ErrorCode::kInvalidArgument, "total length must be finite and nonnegative");
  }
  if (speeds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one speed sample");
  }
  double sum = 0.0;
  for (double u : speeds) {
    if (!(u > 0.0) || !std::isfinite(u)) {
      throw Error(ErrorCode::kInvalidProfile, "speeds must be positive and finite");
    }
    sum += u;
  }

  std::vector<double> targets(speeds.size() + 1, 0.0);
  for (std::size_t j = 0; j + 1 < speeds.size(); ++j) {
    targets[j + 1] = std::min(targets[j] + speeds[j] / sum * total_length, total_length);
  }
  targets.back() = total_length;
  return targets;
}

}  // namespace evsynth::trajectory
