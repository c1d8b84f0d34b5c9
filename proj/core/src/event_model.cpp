#include "evsynth/event_model.hpp"

#include <algorithm>
#include <cmath>

#include "evsynth/error.hpp"

namespace evsynth::events {
namespace {

// Crossings that land within this relative margin past t1 still count, so a
// ramp ending exactly on a threshold multiple emits its last event.
constexpr double kEndTolerance = 1e-12;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }
bool nonnegative_finite(double v) { return v >= 0.0 && std::isfinite(v); }

void check_interval(const LogSegment& s) {
  if (s.t1_us <= s.t0_us) {
    throw Error(ErrorCode::kInvalidInterval, "interval end must follow its start");
  }
  if (!std::isfinite(s.log_l0) || !std::isfinite(s.log_l1)) {
    throw Error(ErrorCode::kInvalidArgument, "log intensities must be finite");
  }
}

double duration_seconds(const LogSegment& s) {
  return static_cast<double>(s.t1_us - s.t0_us) * 1e-6;
}

std::uint64_t crossing_time(const LogSegment& s, double fraction) {
  const std::uint64_t span = s.t1_us - s.t0_us;
  const double offset = std::floor(std::clamp(fraction, 0.0, 1.0) * static_cast<double>(span));
  const auto t = s.t0_us + static_cast<std::uint64_t>(offset);
  return std::clamp(t, s.t0_us + 1, s.t1_us);
}

void emit(PixelState& state, std::uint64_t t, int polarity, std::uint64_t refractory_us,
          std::vector<PixelEvent>& out) {
  if (state.fired) {
    if (t <= state.t_ref_us) return;                  // same microsecond: merged
    if (t - state.t_ref_us < refractory_us) return;   // refractory
  }
  state.t_ref_us = t;
  state.fired = true;
  out.push_back({t, static_cast<std::int8_t>(polarity)});
}

double clamp_residual(double v, double on, double off) {
  return std::clamp(v, std::nextafter(-off, 0.0), std::nextafter(on, 0.0));
}

// Deterministic linear sweep of the residual by `delta` over the segment.
// Crossing k sits at fraction (k * threshold - v0) / delta, evaluated from
// the segment start so no error accumulates between events.
void sweep_linear(const LogSegment& s, PixelState& state, double delta, double on, double off,
                  std::uint64_t refractory_us, std::vector<PixelEvent>& out) {
  const double v0 = state.v_residual;
  double v = v0 + delta;
  if (delta > 0.0) {
    std::uint64_t k = 0;
    for (;;) {
      const double f = (static_cast<double>(k + 1) * on - v0) / delta;
      if (!(f <= 1.0 + kEndTolerance)) break;
      ++k;
      emit(state, crossing_time(s, f), +1, refractory_us, out);
    }
    v = v0 + delta - static_cast<double>(k) * on;
  } else if (delta < 0.0) {
    std::uint64_t k = 0;
    for (;;) {
      const double f = (-static_cast<double>(k + 1) * off - v0) / delta;
      if (!(f <= 1.0 + kEndTolerance)) break;
      ++k;
      emit(state, crossing_time(s, f), -1, refractory_us, out);
    }
    v = v0 + delta + static_cast<double>(k) * off;
  }
  state.v_residual = clamp_residual(v, on, off);
}

}  // namespace

void IdealParams::validate() const {
  if (!positive_finite(c_on) || !positive_finite(c_off)) {
    throw Error(ErrorCode::kInvalidArgument, "contrast thresholds must be positive");
  }
  if (!positive_finite(log_floor)) {
    throw Error(ErrorCode::kInvalidArgument, "log floor must be positive");
  }
}

void VoltmeterParams::validate() const {
  for (double k : {k1, k2, k3, k4, k5, k6}) {
    if (!nonnegative_finite(k)) {
      throw Error(ErrorCode::kInvalidArgument, "sensor constants k1..k6 must be nonnegative");
    }
  }
  if (!positive_finite(theta_on) || !positive_finite(theta_off)) {
    throw Error(ErrorCode::kInvalidArgument, "ON/OFF thresholds must be positive");
  }
  if (!positive_finite(log_floor)) {
    throw Error(ErrorCode::kInvalidArgument, "log floor must be positive");
  }
}

PixelState initial_pixel_state(double log_l, std::uint64_t t_us, std::uint32_t substream) {
  PixelState s;
  s.last_log_l = log_l;
  s.t_ref_us = t_us;
  s.rng_substream = substream;
  return s;
}

double to_log_intensity(double l, double eps) { return std::log(std::max(l, eps)); }

void ideal_pixel_events(const LogSegment& segment, PixelState& state, const IdealParams& params,
                        std::vector<PixelEvent>& out) {
  check_interval(segment);
  sweep_linear(segment, state, segment.log_l1 - segment.log_l0, params.c_on, params.c_off,
               params.refractory_us, out);
  state.last_log_l = segment.log_l1;
  ++state.interval;
}

DriftDiffusion drift_diffusion(double l_linear, double dlog_dt, const VoltmeterParams& p) {
  const double l = std::max(l_linear, 0.0);
  DriftDiffusion dd;
  dd.mu = p.k1 * dlog_dt + p.k4 + p.k6 * l;
  dd.sigma2 = (p.k3 > 0.0 ? p.k3 / (l + p.k2) : 0.0) + p.k5 * std::abs(dlog_dt);
  return dd;
}

double hit_probability(double mu, double sigma2, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "passage boundaries must be positive");
  }
  if (sigma2 <= 0.0) {
    if (mu > 0.0) return 1.0;
    if (mu < 0.0) return 0.0;
    return b / (a + b);
  }
  const double kappa = 2.0 * mu / sigma2;
  if (std::abs(kappa * (a + b)) < 1e-12) return b / (a + b);
  if (kappa > 0.0) return std::expm1(-kappa * b) / std::expm1(-kappa * (a + b));
  return std::exp(kappa * a) * std::expm1(kappa * b) / std::expm1(kappa * (a + b));
}

double sample_inverse_gaussian(double mean, double shape, rng::CounterStream& rng) {
  const double z = rng.normal();
  const double y = z * z;
  if (!std::isfinite(mean)) return shape / y;  // Levy limit
  // x = m (1 + r/2 - sqrt(r + r^2/4)) with r = m y / shape, written without
  // cancellation.
  const double r = mean * y / shape;
  const double x = mean / (1.0 + 0.5 * r + std::sqrt(r + 0.25 * r * r));
  return rng.uniform() * (mean + x) <= mean ? x : mean * mean / x;
}

PassageSample first_passage_sample(double mu, double sigma2, double a, double b,
                                   rng::CounterStream& rng) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "passage boundaries must be positive");
  }
  if (!(sigma2 >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "variance must be nonnegative");
  if (sigma2 == 0.0) {
    if (mu > 0.0) return {a / mu, +1};
    if (mu < 0.0) return {b / -mu, -1};
    return {};
  }
  const int polarity = rng.uniform() < hit_probability(mu, sigma2, a, b) ? +1 : -1;
  const double distance = polarity > 0 ? a : b;
  const double mean = mu == 0.0 ? std::numeric_limits<double>::infinity() : distance / std::abs(mu);
  return {sample_inverse_gaussian(mean, distance * distance / sigma2, rng), polarity};
}

void voltmeter_pixel_events(const LogSegment& segment, PixelState& state,
                            const VoltmeterParams& params, std::uint64_t master_seed,
                            std::vector<PixelEvent>& out) {
  check_interval(segment);
  const double seconds = duration_seconds(segment);
  const double dlog_dt = (segment.log_l1 - segment.log_l0) / seconds;
  const double l_mid = std::exp(0.5 * (segment.log_l0 + segment.log_l1));
  const DriftDiffusion dd = drift_diffusion(l_mid, dlog_dt, params);
  const double on = params.theta_on;
  const double off = params.theta_off;
  // An overflowing intensity would make every sampled exit time zero.
  if (!std::isfinite(dd.mu) || !std::isfinite(dd.sigma2)) {
    throw Error(ErrorCode::kInvalidArgument, "drift or diffusion is not finite");
  }

  if (dd.sigma2 == 0.0) {
    // k1 * delta log directly rather than mu * seconds, which would round
    // the signal through a rate and back.
    const double leak = params.k4 + params.k6 * l_mid;
    const double delta = params.k1 * (segment.log_l1 - segment.log_l0) + leak * seconds;
    sweep_linear(segment, state, delta, on, off, 0, out);
  } else {
    rng::CounterStream stream(master_seed, state.rng_substream, state.interval);
    double elapsed = 0.0;
    double v = state.v_residual;
    for (;;) {
      const PassageSample s = first_passage_sample(dd.mu, dd.sigma2, on - v, off + v, stream);
      if (!s.has_event() || !(elapsed + s.dt <= seconds)) {
        v += dd.mu * (seconds - elapsed);
        break;
      }
      elapsed += s.dt;
      emit(state, crossing_time(segment, elapsed / seconds), s.polarity, 0, out);
      v = 0.0;
    }
    state.v_residual = clamp_residual(v, on, off);
  }
  state.last_log_l = segment.log_l1;
  ++state.interval;
}

}  // namespace evsynth::events
