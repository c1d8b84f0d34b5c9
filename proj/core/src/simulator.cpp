#include "evsynth/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "evsynth/error.hpp"

namespace evsynth::sim {
namespace {

using events::IdealParams;
using events::LogSegment;
using events::PixelEvent;
using events::PixelState;
using events::VoltmeterParams;

double log_floor(const Backend& backend) {
  return std::visit([](const auto& p) { return p.log_floor; }, backend);
}

void validate_backend(const Backend& backend) {
  std::visit([](const auto& p) { p.validate(); }, backend);
}

unsigned worker_count(unsigned requested, std::size_t pixels) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(pixels, 1)));
}

std::vector<double> log_frame(const LuminanceFrame& f, double eps) {
  std::vector<double> out(f.pixels.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = events::to_log_intensity(std::clamp<double>(f.pixels[i], 0.0, 1.0), eps);
  }
  return out;
}

void check_dimensions(const LuminanceFrame& f, std::uint32_t width, std::uint32_t height) {
  if (f.width != width || f.height != height) {
    throw Error(ErrorCode::kMalformedSequence,
                "frame at t=" + std::to_string(f.t_us) + " has size " + std::to_string(f.width) +
                    "x" + std::to_string(f.height) + ", expected " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

void run_backend(const Backend& backend, const LogSegment& seg, PixelState& state,
                 std::uint64_t seed, std::vector<PixelEvent>& out) {
  if (const auto* ideal = std::get_if<IdealParams>(&backend)) {
    events::ideal_pixel_events(seg, state, *ideal, out);
  } else {
    events::voltmeter_pixel_events(seg, state, std::get<VoltmeterParams>(backend), seed, out);
  }
}

template <class Fn>
void parallel_ranges(unsigned workers, std::size_t count, Fn&& fn) {
  if (workers <= 1) {
    fn(0u, std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = count * w / workers;
    const std::size_t hi = count * (w + 1) / workers;
    pool.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
  }
}

void append_records(std::vector<EventRecord>& dst, std::span<const PixelEvent> src,
                    std::size_t pixel, std::uint32_t width) {
  const auto x = static_cast<std::uint16_t>(pixel % width);
  const auto y = static_cast<std::uint16_t>(pixel / width);
  for (const PixelEvent& e : src) dst.push_back({e.t_us, x, y, e.polarity});
}

std::vector<EventRecord> merge(std::vector<std::vector<EventRecord>>& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<EventRecord> all;
  all.reserve(total);
  for (auto& p : parts) {
    all.insert(all.end(), p.begin(), p.end());
    std::vector<EventRecord>().swap(p);
  }
  std::stable_sort(all.begin(), all.end(), events::event_order);
  return all;
}

}  // namespace

void LuminanceFrame::validate() const {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kMalformedSequence, "frame dimensions must be positive");
  }
  if (width > std::numeric_limits<std::uint16_t>::max() ||
      height > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kMalformedSequence, "frame dimensions exceed 65535");
  }
  if (pixels.size() != std::size_t{width} * height) {
    throw Error(ErrorCode::kMalformedSequence, "pixel count does not match frame size");
  }
  for (float v : pixels) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kMalformedSequence, "non-finite pixel value");
  }
}

void FrameSequence::validate() const {
  if (frames.size() < 2) {
    throw Error(ErrorCode::kMalformedSequence, "simulation needs at least two frames");
  }
  frames.front().validate();
  for (std::size_t i = 1; i < frames.size(); ++i) {
    frames[i].validate();
    check_dimensions(frames[i], frames.front().width, frames.front().height);
    if (frames[i].t_us <= frames[i - 1].t_us) {
      throw Error(ErrorCode::kMalformedSequence, "frame timestamps must strictly increase");
    }
  }
}

double rgb_to_luminance(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

EventStream simulate(const FrameSequence& sequence, const Backend& backend,
                     std::uint64_t master_seed, const SimulateOptions& options) {
  validate_backend(backend);
  sequence.validate();
  const auto& frames = sequence.frames;
  const std::uint32_t width = frames.front().width;
  const std::uint32_t height = frames.front().height;
  const std::size_t pixels = std::size_t{width} * height;
  const double eps = log_floor(backend);

  std::vector<std::vector<double>> logs;
  logs.reserve(frames.size());
  for (const auto& f : frames) logs.push_back(log_frame(f, eps));

  const unsigned workers = worker_count(options.threads, pixels);
  std::vector<std::vector<EventRecord>> parts(workers);
  parallel_ranges(workers, pixels, [&](unsigned w, std::size_t lo, std::size_t hi) {
    std::vector<PixelEvent> scratch;
    for (std::size_t p = lo; p < hi; ++p) {
      PixelState state = events::initial_pixel_state(logs[0][p], frames[0].t_us,
                                                     static_cast<std::uint32_t>(p));
      scratch.clear();
      for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
        const LogSegment seg{logs[i][p], logs[i + 1][p], frames[i].t_us, frames[i + 1].t_us};
        run_backend(backend, seg, state, master_seed, scratch);
      }
      append_records(parts[w], scratch, p, width);
    }
  });

  EventStream stream;
  stream.width = width;
  stream.height = height;
  stream.records = merge(parts);
  return stream;
}

StreamSummary simulate_streaming(const FrameSource& source, const Backend& backend,
                                 std::uint64_t master_seed, const EventSink& sink,
                                 const SimulateOptions& options) {
  validate_backend(backend);
  const double eps = log_floor(backend);

  std::optional<LuminanceFrame> prev = source();
  if (!prev) throw Error(ErrorCode::kMalformedSequence, "frame source is empty");
  prev->validate();

  StreamSummary summary;
  summary.frames = 1;
  summary.width = prev->width;
  summary.height = prev->height;
  const std::size_t pixels = std::size_t{prev->width} * prev->height;
  const unsigned workers = worker_count(options.threads, pixels);

  std::vector<double> prev_log = log_frame(*prev, eps);
  std::vector<PixelState> states(pixels);
  for (std::size_t p = 0; p < pixels; ++p) {
    states[p] = events::initial_pixel_state(prev_log[p], prev->t_us, static_cast<std::uint32_t>(p));
  }

  std::vector<std::vector<EventRecord>> parts(workers);
  while (std::optional<LuminanceFrame> next = source()) {
    next->validate();
    check_dimensions(*next, summary.width, summary.height);
    if (next->t_us <= prev->t_us) {
      throw Error(ErrorCode::kMalformedSequence, "frame timestamps must strictly increase");
    }
    std::vector<double> next_log = log_frame(*next, eps);
    const std::uint64_t t0 = prev->t_us;
    const std::uint64_t t1 = next->t_us;

    parallel_ranges(workers, pixels, [&](unsigned w, std::size_t lo, std::size_t hi) {
      std::vector<PixelEvent> scratch;
      parts[w].clear();
      for (std::size_t p = lo; p < hi; ++p) {
        scratch.clear();
        run_backend(backend, {prev_log[p], next_log[p], t0, t1}, states[p], master_seed, scratch);
        append_records(parts[w], scratch, p, summary.width);
      }
    });
    const std::vector<EventRecord> interval_events = merge(parts);
    summary.events += interval_events.size();
    summary.pixel_intervals += pixels;
    ++summary.frames;
    sink(interval_events);

    prev = std::move(next);
    prev_log = std::move(next_log);
  }
  if (summary.frames < 2) {
    throw Error(ErrorCode::kMalformedSequence, "simulation needs at least two frames");
  }
  return summary;
}

}  // namespace evsynth::sim
