#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evsynth/simulator.hpp"

namespace evsynth::io {

/// Signed (ON - OFF) counts per pixel over [t0, t1).
struct EventFrame {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint64_t t0_us = 0;
  std::uint64_t t1_us = 0;
  std::vector<std::int32_t> counts;

  std::int32_t at(std::uint32_t x, std::uint32_t y) const {
    return counts[std::size_t{y} * width + x];
  }
};

/// bins x height x width, bin-major.
struct VoxelGrid {
  std::uint32_t bins = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint64_t t0_us = 0;
  std::uint64_t t1_us = 0;
  std::vector<double> values;

  double at(std::uint32_t bin, std::uint32_t x, std::uint32_t y) const {
    return values[(std::size_t{bin} * height + y) * width + x];
  }
};

struct StreamStats {
  std::uint64_t total = 0;
  std::uint64_t on = 0;
  std::uint64_t off = 0;
  std::uint64_t t_first_us = 0;
  std::uint64_t t_last_us = 0;
  std::uint64_t duration_us = 0;
  double rate_hz = 0.0;
  double on_fraction = 0.0;
  std::uint64_t max_pixel_count = 0;
};

/// Throws kInvalidInterval if t1 <= t0.
EventFrame accumulate(const sim::EventStream& stream, std::uint64_t t0_us, std::uint64_t t1_us);

/// Each event at tau = (B - 1)(t - t0)/(t1 - t0) adds p * (1 - frac) to bin
/// floor(tau) and p * frac to the next bin (the last bin keeps overflow).
VoxelGrid voxelize(const sim::EventStream& stream, std::uint32_t bins, std::uint64_t t0_us,
                   std::uint64_t t1_us);

/// Running statistics over batches of records, for streams that are never
/// held in memory at once.
class StatsAccumulator {
 public:
  StatsAccumulator(std::uint32_t width, std::uint32_t height);
  void add(std::span<const events::EventRecord> records);
  StreamStats stats() const;

 private:
  std::uint32_t width_;
  std::vector<std::uint64_t> per_pixel_;
  StreamStats stats_;
};

/// Rate is total / (t_last - t_first) in events per second, 0 when the span
/// is empty.
StreamStats compute_stats(const sim::EventStream& stream);

/// `key value` lines in a fixed order.
std::string format_stats(const StreamStats& stats, std::uint32_t width, std::uint32_t height);

/// 8-bit P5 image with 128 + clamp(count * scale, -128, 127).
std::string write_event_frame_image(const EventFrame& frame, double scale = 32.0);

}  // namespace evsynth::io
