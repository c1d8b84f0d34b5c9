#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evsynth/profile.hpp"
#include "evsynth/simulator.hpp"
#include "evsynth/trajectory.hpp"

namespace evsynth::cli {

/// Every setting of a run. Each field has a flag of the same name (with
/// dashes) and a `key = value` config entry; flag beats config beats default.
struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output;

  // interp
  double gamma = 5.0;
  std::size_t window = 2;
  double alpha = 1.0;
  double beta = 1.0;
  std::string profile = "gs2e";
  double base_fps = kDefaultFps;
  double blend_tau = 0.1;
  std::uint64_t duration_us = 0;
  bool augment = false;
  std::size_t groups = 3;
  std::size_t keyframes = 5;
  std::size_t frames = 150;
  std::string curve = "random";
  bool mini_profile = false;

  // simulate
  std::string backend = "voltmeter";
  double c_on = 1.0;
  double c_off = 1.0;
  std::uint64_t refractory_us = 0;
  events::VoltmeterParams voltmeter;
  std::string timestamps;
  bool text = false;

  // accumulate / stats
  std::uint64_t t0_us = 0;
  std::uint64_t t1_us = 0;
  std::uint64_t stride_us = 0;
  double scale = 32.0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  // shared
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// `gs2e`, `const:<v>` or `list:<r1>,<r2>,...` (multipliers of base_fps).
trajectory::VelocityProfile parse_profile(const std::string& text, double base_fps,
                                          double blend_tau);

/// `bspline` or `bezier:<d>`; `random` yields nullopt (drawn per group).
std::optional<trajectory::CurveKind> parse_curve(const std::string& text);
std::string curve_name(const trajectory::CurveKind& kind);

sim::Backend make_backend(const RunConfig& config);

/// Effective configuration as `key = value` lines, readable by --config.
std::string format_config(const RunConfig& config);

/// Runs one invocation. args excludes the program name. Returns the exit
/// code: 0 on success, 2 on usage errors, 1 on runtime failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evsynth::cli
