#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "evsynth/error.hpp"
#include "evsynth/io/colmap.hpp"
#include "evsynth/io/events.hpp"
#include "evsynth/io/frames.hpp"
#include "evsynth/io/representations.hpp"
#include "evsynth/io/trajectory_io.hpp"

namespace evsynth::cli {
namespace {

namespace fs = std::filesystem;

/// Bad flag values caught after parsing; reported like CLI11 parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate_config(const RunConfig& c) {
  if (!(c.gamma > 1.0) || !std::isfinite(c.gamma)) {
    throw UsageError("--gamma must be greater than 1");
  }
  if (!(c.alpha >= 0.0) || !(c.beta >= 0.0) || c.alpha + c.beta <= 0.0) {
    throw UsageError("--alpha and --beta must be nonnegative and not both zero");
  }
  if (!(c.base_fps > 0.0)) throw UsageError("--base-fps must be positive");
  if (c.groups < 1) throw UsageError("--groups must be at least 1");
  if (c.keyframes < 2) throw UsageError("--keyframes must be at least 2");
  if (c.frames < 2) throw UsageError("--frames must be at least 2");
  if (c.backend != "ideal" && c.backend != "voltmeter") {
    throw UsageError("--backend must be `ideal` or `voltmeter`");
  }
  if (c.t1_us != 0 && c.t1_us <= c.t0_us) throw UsageError("--t1-us must exceed --t0-us");
  try {
    (void)parse_profile(c.profile, c.base_fps, c.blend_tau);
    (void)parse_curve(c.curve);
    std::visit([](const auto& p) { p.validate(); }, make_backend(c));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

trajectory::DisplacementWeights weights_of(const RunConfig& c) { return {c.alpha, c.beta}; }

void run_interp(const RunConfig& c, std::ostream& out) {
  const auto poses = io::read_colmap_poses(io::read_file(c.input));
  const auto profile = parse_profile(c.profile, c.base_fps, c.blend_tau);
  trajectory::DensifyOptions options{c.base_fps, std::nullopt};
  if (c.duration_us > 0) options.duration_us = c.duration_us;
  const auto dense =
      trajectory::densify(poses, c.gamma, profile, weights_of(c), c.window, options);

  const fs::path dir(c.output);
  fs::create_directories(dir);
  io::write_file(dir / "trajectory.txt", io::write_trajectory(dense.poses));
  out << "input_poses " << poses.size() << "\n";
  out << "dense_poses " << dense.size() << "\n";
  out << "path_length " << fmt(dense.length()) << "\n";
  if (!c.augment) return;

  const auto fixed_curve = parse_curve(c.curve);
  trajectory::AugmentOptions aug;
  aug.fps = c.base_fps;
  if (c.mini_profile) aug.profile = profile;
  const auto groups = trajectory::sample_keyframe_groups(dense, c.groups, c.keyframes, c.seed);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto curve = fixed_curve ? *fixed_curve : trajectory::draw_curve_kind(c.seed, g);
    const auto mini =
        trajectory::augment_mini_trajectory(dense, groups[g], c.frames, curve, weights_of(c), aug);
    io::write_file(dir / ("mini_" + std::to_string(g) + ".txt"), io::write_trajectory(mini.poses));
    out << "group " << g << " curve " << curve_name(curve) << " keyframes";
    for (std::size_t idx : groups[g]) out << ' ' << idx;
    out << "\n";
  }
}

void run_simulate(const RunConfig& c, std::ostream& out) {
  io::FrameReadOptions read;
  read.fps = c.base_fps;
  if (!c.timestamps.empty()) read.timestamps = fs::path(c.timestamps);
  const auto files = io::list_frames(c.input, read);
  if (files.size() < 2) {
    throw Error(ErrorCode::kMalformedSequence,
                "need at least two frames, found " + std::to_string(files.size()));
  }

  const fs::path path(c.output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const auto format = c.text ? io::EventFormat::kText : io::EventFormat::kBinary;
  std::optional<io::EventFileWriter> writer;
  std::optional<io::StatsAccumulator> stats;
  auto frames = io::frame_source(files);
  sim::FrameSource source = [&]() -> std::optional<sim::LuminanceFrame> {
    auto f = frames();
    if (f && !writer) {
      writer.emplace(path, format, f->width, f->height);
      stats.emplace(f->width, f->height);
    }
    return f;
  };
  sim::EventSink sink = [&](std::span<const sim::EventRecord> batch) {
    writer->append(batch);
    stats->add(batch);
  };

  sim::StreamSummary summary;
  try {
    summary = sim::simulate_streaming(source, make_backend(c), c.seed, sink, {c.threads});
    writer->close();
  } catch (...) {
    writer.reset();
    std::error_code ec;
    fs::remove(path, ec);
    throw;
  }
  out << "frames " << summary.frames << "\n";
  out << io::format_stats(stats->stats(), summary.width, summary.height);
}

std::optional<io::SensorSize> sensor_of(const RunConfig& c) {
  if (c.width == 0 && c.height == 0) return std::nullopt;
  return io::SensorSize{c.width, c.height};
}

void run_accumulate(const RunConfig& c, std::ostream& out) {
  const auto stream = io::read_events_any(io::read_file(c.input), sensor_of(c));
  const bool empty = stream.records.empty();
  const std::uint64_t first = empty ? 0 : stream.records.front().t_us;
  const std::uint64_t last = empty ? 0 : stream.records.back().t_us;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> windows;
  if (c.t1_us != 0) {
    windows.emplace_back(c.t0_us, c.t1_us);
  } else if (c.stride_us != 0) {
    // ceil(duration / stride) windows from the first event; the last one is
    // stretched to include the final timestamp.
    const std::uint64_t duration = last - first;
    const std::uint64_t n = std::max<std::uint64_t>(1, (duration + c.stride_us - 1) / c.stride_us);
    for (std::uint64_t i = 0; i < n; ++i) {
      windows.emplace_back(first + i * c.stride_us, first + (i + 1) * c.stride_us);
    }
    windows.back().second = std::max(windows.back().second, last + 1);
  } else {
    windows.emplace_back(first, last + 1);
  }

  const fs::path dir(c.output);
  fs::create_directories(dir);
  out << "windows " << windows.size() << "\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto frame = io::accumulate(stream, windows[i].first, windows[i].second);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06zu.pgm", i);
    io::write_file(dir / name, io::write_event_frame_image(frame, c.scale));
    out << "window " << i << ' ' << windows[i].first << ' ' << windows[i].second << ' ' << name
        << "\n";
  }
}

void run_stats(const RunConfig& c, std::ostream& out) {
  const auto stream = io::read_events_any(io::read_file(c.input), sensor_of(c));
  out << io::format_stats(io::compute_stats(stream), stream.width, stream.height);
}

void add_options(CLI::App& app, RunConfig& c, bool& print_config) {
  app.set_config("--config", "", "Read flat `key = value` settings (flags still win)");
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");
  app.add_option("--seed", c.seed, "Master random seed");
  app.add_option("--threads", c.threads, "Worker threads, 0 for all cores");
  app.add_option("-o,--output", c.output, "Output directory (interp, accumulate) or file");

  app.add_option("--gamma", c.gamma, "Densification multiplier, M = ceil(gamma N)");
  app.add_option("--window", c.window, "Smoothing half-width w");
  app.add_option("--alpha", c.alpha, "Displacement weight per radian");
  app.add_option("--beta", c.beta, "Displacement weight per scene unit");
  app.add_option("--profile", c.profile, "gs2e | const:<v> | list:<r1>,<r2>,...");
  app.add_option("--base-fps", c.base_fps, "Frame rate of output timestamps and input frames");
  app.add_option("--blend-tau", c.blend_tau, "Speed-list blend half-width, fraction of a segment");
  app.add_option("--duration-us", c.duration_us, "Spread dense timestamps over this span");
  app.add_flag("--augment", c.augment, "Also write mini-trajectories");
  app.add_option("--groups", c.groups, "Mini-trajectory groups G");
  app.add_option("--keyframes", c.keyframes, "Keyframes per group K");
  app.add_option("--frames", c.frames, "Poses per mini-trajectory F");
  app.add_option("--curve", c.curve, "random | bspline | bezier:<2..5>");
  app.add_flag("--mini-profile", c.mini_profile, "Apply the speed profile to mini-trajectories");

  app.add_option("--backend", c.backend, "voltmeter | ideal");
  app.add_option("--c-on", c.c_on, "Ideal ON threshold");
  app.add_option("--c-off", c.c_off, "Ideal OFF threshold");
  app.add_option("--refractory-us", c.refractory_us, "Ideal refractory period");
  auto& v = c.voltmeter;
  app.add_option("--k1", v.k1, "Drift gain on the log-intensity rate");
  app.add_option("--k2", v.k2, "Darkness regularizer of the shot noise");
  app.add_option("--k3", v.k3, "Shot-noise variance");
  app.add_option("--k4", v.k4, "Constant leak drift");
  app.add_option("--k5", v.k5, "Motion-proportional variance");
  app.add_option("--k6", v.k6, "Brightness-proportional leak drift");
  app.add_option("--theta-on", v.theta_on, "Voltmeter ON threshold");
  app.add_option("--theta-off", v.theta_off, "Voltmeter OFF threshold");
  app.add_option("--log-floor", v.log_floor, "Intensity floor before taking logs");
  app.add_option("--timestamps", c.timestamps, "Frame timestamp sidecar (`frame_id t_us`)");
  app.add_flag("--text", c.text, "Write text events instead of EVS1");

  app.add_option("--t0-us", c.t0_us, "Accumulation window start");
  app.add_option("--t1-us", c.t1_us, "Accumulation window end (exclusive)");
  app.add_option("--stride-us", c.stride_us, "Tile the stream into windows of this length");
  app.add_option("--scale", c.scale, "Gray levels per event in accumulation images");
  app.add_option("--width", c.width, "Sensor width for text event input");
  app.add_option("--height", c.height, "Sensor height for text event input");
}

}  // namespace

trajectory::VelocityProfile parse_profile(const std::string& text, double base_fps,
                                          double blend_tau) {
  if (text == "gs2e") return trajectory::sinusoidal_profile();
  if (text.rfind("const:", 0) == 0) {
    const auto v = to_double(std::string_view(text).substr(6));
    if (!v || !(*v > 0.0)) {
      throw Error(ErrorCode::kInvalidProfile, "constant profile needs a positive speed: " + text);
    }
    return trajectory::constant_profile(*v);
  }
  if (text.rfind("list:", 0) == 0) {
    trajectory::SpeedList list;
    list.base_fps = base_fps;
    list.blend_tau_fraction = blend_tau;
    std::string_view rest = std::string_view(text).substr(5);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto v = to_double(rest.substr(0, comma));
      if (!v) throw Error(ErrorCode::kInvalidProfile, "bad speed list entry in " + text);
      list.multipliers.push_back(*v);
      rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
    }
    trajectory::validate(list);
    return list;
  }
  throw Error(ErrorCode::kInvalidProfile, "unknown profile `" + text + "`");
}

std::optional<trajectory::CurveKind> parse_curve(const std::string& text) {
  if (text == "random") return std::nullopt;
  if (text == "bspline") return trajectory::CurveKind::bspline();
  if (text.size() == 8 && text.rfind("bezier:", 0) == 0 && text[7] >= '2' && text[7] <= '5') {
    return trajectory::CurveKind::bezier(text[7] - '0');
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown curve `" + text + "`");
}

std::string curve_name(const trajectory::CurveKind& kind) {
  if (kind.type == trajectory::CurveKind::Type::kBSpline) return "bspline";
  return "bezier:" + std::to_string(kind.degree);
}

sim::Backend make_backend(const RunConfig& c) {
  if (c.backend == "ideal") {
    return events::IdealParams{c.c_on, c.c_off, c.voltmeter.log_floor, c.refractory_us};
  }
  return c.voltmeter;
}

std::string format_config(const RunConfig& c) {
  std::ostringstream s;
  auto kv = [&s](const char* key, const auto& value) { s << key << " = " << value << "\n"; };
  auto kd = [&s](const char* key, double value) { s << key << " = " << fmt(value) << "\n"; };
  auto kb = [&s](const char* key, bool value) { s << key << " = " << (value ? "true" : "false") << "\n"; };
  auto ks = [&s](const char* key, const std::string& value) { s << key << " = \"" << value << "\"\n"; };
  ks("output", c.output);
  kv("seed", c.seed);
  kv("threads", c.threads);
  kd("gamma", c.gamma);
  kv("window", c.window);
  kd("alpha", c.alpha);
  kd("beta", c.beta);
  ks("profile", c.profile);
  kd("base-fps", c.base_fps);
  kd("blend-tau", c.blend_tau);
  kv("duration-us", c.duration_us);
  kb("augment", c.augment);
  kv("groups", c.groups);
  kv("keyframes", c.keyframes);
  kv("frames", c.frames);
  ks("curve", c.curve);
  kb("mini-profile", c.mini_profile);
  ks("backend", c.backend);
  kd("c-on", c.c_on);
  kd("c-off", c.c_off);
  kv("refractory-us", c.refractory_us);
  kd("k1", c.voltmeter.k1);
  kd("k2", c.voltmeter.k2);
  kd("k3", c.voltmeter.k3);
  kd("k4", c.voltmeter.k4);
  kd("k5", c.voltmeter.k5);
  kd("k6", c.voltmeter.k6);
  kd("theta-on", c.voltmeter.theta_on);
  kd("theta-off", c.voltmeter.theta_off);
  kd("log-floor", c.voltmeter.log_floor);
  ks("timestamps", c.timestamps);
  kb("text", c.text);
  kv("t0-us", c.t0_us);
  kv("t1-us", c.t1_us);
  kv("stride-us", c.stride_us);
  kd("scale", c.scale);
  kv("width", c.width);
  kv("height", c.height);
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  bool print_config = false;
  CLI::App app("Event camera stream synthesis from poses and rendered frames", "evsynth");
  app.fallthrough();
  app.require_subcommand(0, 1);
  add_options(app, config, print_config);

  auto* interp = app.add_subcommand("interp", "Densify COLMAP poses into a trajectory");
  interp->add_option("images", config.input, "COLMAP images.txt")->required();
  auto* simulate = app.add_subcommand("simulate", "Turn a frame directory into events");
  simulate->add_option("frames", config.input, "Directory of PGM/PPM frames")->required();
  auto* accumulate = app.add_subcommand("accumulate", "Render event windows as PGM images");
  accumulate->add_option("events", config.input, "EVS1 or text event file")->required();
  auto* stats = app.add_subcommand("stats", "Print stream statistics");
  stats->add_option("events", config.input, "EVS1 or text event file")->required();

  std::vector<const char*> argv{"evsynth"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (!app.get_subcommands().empty()) config.subcommand = app.get_subcommands().front()->get_name();
    validate_config(config);
    if (print_config) {
      out << format_config(config);
      return 0;
    }
    if (config.subcommand.empty()) throw UsageError("a subcommand is required (see --help)");
    if (config.subcommand != "stats" && config.output.empty()) {
      throw UsageError(config.subcommand + " needs --output");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "evsynth: usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (config.subcommand == "interp") run_interp(config, out);
    if (config.subcommand == "simulate") run_simulate(config, out);
    if (config.subcommand == "accumulate") run_accumulate(config, out);
    if (config.subcommand == "stats") run_stats(config, out);
  } catch (const std::exception& e) {
    err << "evsynth " << config.subcommand << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace evsynth::cli
