#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "evsynth/rng.hpp"

namespace evsynth::events {

struct EventRecord {
  std::uint64_t t_us = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::int8_t polarity = 1;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Canonical stream order: (t_us, y, x, polarity).
inline bool event_order(const EventRecord& a, const EventRecord& b) {
  if (a.t_us != b.t_us) return a.t_us < b.t_us;
  if (a.y != b.y) return a.y < b.y;
  if (a.x != b.x) return a.x < b.x;
  return a.polarity < b.polarity;
}

/// Event at a single pixel, before coordinates are attached.
struct PixelEvent {
  std::uint64_t t_us = 0;
  std::int8_t polarity = 1;

  friend bool operator==(const PixelEvent&, const PixelEvent&) = default;
};

struct IdealParams {
  double c_on = 1.0;
  double c_off = 1.0;
  double log_floor = 1e-3;
  std::uint64_t refractory_us = 0;

  void validate() const;
};

/// Drift-diffusion sensor constants. k1 scales the log-intensity rate into
/// drift, k4 and k6 are leak drift terms (constant and brightness
/// proportional), k3 and k5 source the diffusion (shot noise falling with
/// brightness, and a motion-proportional term), k2 regularizes darkness.
struct VoltmeterParams {
  double k1 = 0.5;
  double k2 = 1e-3;
  double k3 = 0.1;
  double k4 = 0.01;
  double k5 = 0.1;
  double k6 = 1e-5;
  double theta_on = 1.0;
  double theta_off = 1.0;
  double log_floor = 1e-3;

  void validate() const;
};

/// Per-pixel simulation state carried across frame intervals.
struct PixelState {
  /// Signed level accumulated since the last event, in threshold units.
  double v_residual = 0.0;
  double last_log_l = 0.0;
  /// Time of the last emitted event, or the sequence start.
  std::uint64_t t_ref_us = 0;
  bool fired = false;
  /// Random substream id (the pixel index) and the interval counter; together
  /// with the master seed they key the counter-based generator.
  std::uint32_t rng_substream = 0;
  std::uint32_t interval = 0;
};

PixelState initial_pixel_state(double log_l, std::uint64_t t_us, std::uint32_t substream);

/// Log intensity varying linearly in time from log_l0 at t0 to log_l1 at t1.
struct LogSegment {
  double log_l0 = 0.0;
  double log_l1 = 0.0;
  std::uint64_t t0_us = 0;
  std::uint64_t t1_us = 0;
};

/// ln(max(l, eps)).
double to_log_intensity(double l, double eps);

/// Ideal threshold backend. Appends the crossings of the running reference to
/// `out`; timestamps are rounded down to whole microseconds and lie in
/// (t0, t1]. Throws kInvalidInterval if t1 <= t0.
void ideal_pixel_events(const LogSegment& segment, PixelState& state, const IdealParams& params,
                        std::vector<PixelEvent>& out);

struct DriftDiffusion {
  double mu = 0.0;      // per second
  double sigma2 = 0.0;  // per second
};

/// mu = k1 * dlog_dt + k4 + k6 * L, sigma2 = k3 / (L + k2) + k5 * |dlog_dt|.
DriftDiffusion drift_diffusion(double l_linear, double dlog_dt, const VoltmeterParams& params);

/// Probability that Brownian motion with drift mu and variance rate sigma2,
/// started at 0, reaches +a before -b (scale-function formula).
double hit_probability(double mu, double sigma2, double a, double b);

struct PassageSample {
  double dt = std::numeric_limits<double>::infinity();  // seconds
  int polarity = 0;                                      // 0: no event

  bool has_event() const { return polarity != 0; }
};

/// Draws the exit boundary from hit_probability and the exit time from the
/// inverse-Gaussian law IG(d / |mu|, d^2 / sigma2), d the distance to the
/// chosen boundary (Levy law when mu = 0). sigma2 = 0 gives the
/// deterministic drift crossing; mu = sigma2 = 0 returns no event.
PassageSample first_passage_sample(double mu, double sigma2, double a, double b,
                                   rng::CounterStream& rng);

/// Inverse-Gaussian variate (Michael-Schucany-Haas). mean may be infinite,
/// which yields the Levy limit.
double sample_inverse_gaussian(double mean, double shape, rng::CounterStream& rng);

/// Drift-diffusion backend. Randomness comes from the substream keyed by
/// (master_seed, state.rng_substream, state.interval); the interval counter
/// advances on every call.
void voltmeter_pixel_events(const LogSegment& segment, PixelState& state,
                            const VoltmeterParams& params, std::uint64_t master_seed,
                            std::vector<PixelEvent>& out);

}  // namespace evsynth::events
