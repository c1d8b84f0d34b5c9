#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace evsynth::trajectory {

/// Speed as a function of normalized time t in [0, 1]. Must stay positive.
struct AnalyticProfile {
  std::function<double(double)> v;
  std::string name;
};

/// Piecewise-constant frame-rate multipliers over L equal segments, blended
/// into a C2 curve by a cubic B-spline window of half-width tau around each
/// segment boundary (tau = blend_tau_fraction * segment length).
struct SpeedList {
  std::vector<double> multipliers;
  double base_fps = 2400.0;
  double blend_tau_fraction = 0.1;
};

using VelocityProfile = std::variant<AnalyticProfile, SpeedList>;

/// v(t) = 0.25 sin(t) + 1.1, the preset used for the released dataset.
AnalyticProfile sinusoidal_profile();
AnalyticProfile constant_profile(double speed);

/// Throws kInvalidProfile for an empty/nonpositive list or a bad tau.
void validate(const SpeedList& list);

/// Cumulative distribution of the uniform cubic B-spline kernel on [-2, 2].
double cubic_bspline_step(double x);

/// Continuous speed at normalized time t (clamped to [0, 1]).
double speed_at(const VelocityProfile& profile, double t);

/// u_j = v(j / (M - 1)) for j = 0 .. M-2. Throws kInvalidProfile if a sample
/// is not positive and finite, kInvalidArgument if M < 2.
std::vector<double> sample_profile(const VelocityProfile& profile, std::size_t sample_count);

/// Target arc lengths s_0 = 0, s_{j+1} = s_j + u_j / sum(u) * S. Returns
/// speeds.size() + 1 values; the last is exactly total_length.
std::vector<double> reparameterize(double total_length, std::span<const double> speeds);

}  // namespace evsynth::trajectory
