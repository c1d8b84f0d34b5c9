#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "evsynth/event_model.hpp"

namespace evsynth::sim {

using events::EventRecord;

struct LuminanceFrame {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  /// Row-major linear intensity in [0, 1].
  std::vector<float> pixels;
  std::uint64_t t_us = 0;

  float at(std::uint32_t x, std::uint32_t y) const { return pixels[std::size_t{y} * width + x]; }
  void validate() const;
};

struct FrameSequence {
  std::vector<LuminanceFrame> frames;

  /// At least two frames, identical dimensions, strictly increasing times.
  void validate() const;
};

struct EventStream {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  /// Ordered by (t_us, y, x, polarity).
  std::vector<EventRecord> records;

  friend bool operator==(const EventStream&, const EventStream&) = default;
};

/// Standard luma weights 0.299 / 0.587 / 0.114.
double rgb_to_luminance(double r, double g, double b);

using Backend = std::variant<events::IdealParams, events::VoltmeterParams>;

struct SimulateOptions {
  /// Worker count; 0 picks the hardware concurrency.
  unsigned threads = 1;
};

/// Batch simulation: every pixel is run over every frame interval, then the
/// events are merged into canonical order. Throws kMalformedSequence.
EventStream simulate(const FrameSequence& sequence, const Backend& backend,
                     std::uint64_t master_seed, const SimulateOptions& options = {});

using FrameSource = std::function<std::optional<LuminanceFrame>()>;
using EventSink = std::function<void(std::span<const EventRecord>)>;

struct StreamSummary {
  std::size_t frames = 0;
  std::uint64_t pixel_intervals = 0;
  std::uint64_t events = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

/// Same output as simulate(), but frames are pulled one at a time and each
/// interval's events are handed to the sink already sorted. Only the current
/// frame pair and the per-pixel states are resident.
StreamSummary simulate_streaming(const FrameSource& source, const Backend& backend,
                                 std::uint64_t master_seed, const EventSink& sink,
                                 const SimulateOptions& options = {});

}  // namespace evsynth::sim
