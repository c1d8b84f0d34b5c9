#include "evsynth/io/representations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "evsynth/error.hpp"
#include "evsynth/io/frames.hpp"

namespace evsynth::io {
namespace {

void check_window(std::uint64_t t0, std::uint64_t t1) {
  if (t1 <= t0) throw Error(ErrorCode::kInvalidInterval, "window end must follow its start");
}

}  // namespace

EventFrame accumulate(const sim::EventStream& stream, std::uint64_t t0_us, std::uint64_t t1_us) {
  check_window(t0_us, t1_us);
  EventFrame f;
  f.width = stream.width;
  f.height = stream.height;
  f.t0_us = t0_us;
  f.t1_us = t1_us;
  f.counts.assign(std::size_t{f.width} * f.height, 0);
  for (const auto& e : stream.records) {
    if (e.t_us < t0_us || e.t_us >= t1_us) continue;
    f.counts[std::size_t{e.y} * f.width + e.x] += e.polarity;
  }
  return f;
}

VoxelGrid voxelize(const sim::EventStream& stream, std::uint32_t bins, std::uint64_t t0_us,
                   std::uint64_t t1_us) {
  check_window(t0_us, t1_us);
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "voxel grid needs at least one bin");
  VoxelGrid g;
  g.bins = bins;
  g.width = stream.width;
  g.height = stream.height;
  g.t0_us = t0_us;
  g.t1_us = t1_us;
  const std::size_t plane = std::size_t{g.width} * g.height;
  g.values.assign(plane * bins, 0.0);
  const double span = static_cast<double>(t1_us - t0_us);
  for (const auto& e : stream.records) {
    if (e.t_us < t0_us || e.t_us >= t1_us) continue;
    const double tau = static_cast<double>(bins - 1) * static_cast<double>(e.t_us - t0_us) / span;
    const auto lower = std::min<std::uint32_t>(static_cast<std::uint32_t>(tau), bins - 1);
    const double frac = tau - lower;
    const std::uint32_t upper = std::min(lower + 1, bins - 1);
    const std::size_t pixel = std::size_t{e.y} * g.width + e.x;
    g.values[lower * plane + pixel] += e.polarity * (1.0 - frac);
    g.values[upper * plane + pixel] += e.polarity * frac;
  }
  return g;
}

StatsAccumulator::StatsAccumulator(std::uint32_t width, std::uint32_t height)
    : width_(width), per_pixel_(std::size_t{width} * height, 0) {}

void StatsAccumulator::add(std::span<const events::EventRecord> records) {
  for (const auto& e : records) {
    if (stats_.total == 0) {
      stats_.t_first_us = e.t_us;
      stats_.t_last_us = e.t_us;
    }
    ++stats_.total;
    if (e.polarity > 0) ++stats_.on; else ++stats_.off;
    stats_.t_first_us = std::min(stats_.t_first_us, e.t_us);
    stats_.t_last_us = std::max(stats_.t_last_us, e.t_us);
    const std::size_t idx = std::size_t{e.y} * width_ + e.x;
    if (idx < per_pixel_.size()) {
      stats_.max_pixel_count = std::max(stats_.max_pixel_count, ++per_pixel_[idx]);
    }
  }
}

StreamStats StatsAccumulator::stats() const {
  StreamStats s = stats_;
  if (s.total == 0) return s;
  s.duration_us = s.t_last_us - s.t_first_us;
  s.rate_hz = s.duration_us > 0 ? static_cast<double>(s.total) / (s.duration_us * 1e-6) : 0.0;
  s.on_fraction = static_cast<double>(s.on) / static_cast<double>(s.total);
  return s;
}

StreamStats compute_stats(const sim::EventStream& stream) {
  StatsAccumulator acc(stream.width, stream.height);
  acc.add(stream.records);
  return acc.stats();
}

std::string format_stats(const StreamStats& stats, std::uint32_t width, std::uint32_t height) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "total %llu\non %llu\noff %llu\nwidth %u\nheight %u\nt_first_us %llu\n"
                "t_last_us %llu\nduration_us %llu\nrate_hz %.9g\non_fraction %.9g\n"
                "max_pixel_count %llu\n",
                static_cast<unsigned long long>(stats.total),
                static_cast<unsigned long long>(stats.on),
                static_cast<unsigned long long>(stats.off), width, height,
                static_cast<unsigned long long>(stats.t_first_us),
                static_cast<unsigned long long>(stats.t_last_us),
                static_cast<unsigned long long>(stats.duration_us), stats.rate_hz,
                stats.on_fraction, static_cast<unsigned long long>(stats.max_pixel_count));
  return buf;
}

std::string write_event_frame_image(const EventFrame& frame, double scale) {
  std::vector<std::uint8_t> pixels(frame.counts.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double v = std::clamp(frame.counts[i] * scale, -128.0, 127.0);
    pixels[i] = static_cast<std::uint8_t>(128 + static_cast<int>(std::floor(v)));
  }
  return encode_pgm(frame.width, frame.height, pixels);
}

}  // namespace evsynth::io
