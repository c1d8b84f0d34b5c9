#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "evsynth/simulator.hpp"

namespace evsynth::io {

/// EVS1 layout, all little-endian:
///   header  "EVS1" | width u16 | height u16 | record_count u64 | 8 zero bytes
///   record  t_us u64 | x u16 | y u16 | polarity i8
inline constexpr std::size_t kEventHeaderBytes = 24;
inline constexpr std::size_t kEventRecordBytes = 13;

std::string write_events_binary(const sim::EventStream& stream);

/// Throws kParse on bad magic, truncated or oversized payload, a polarity
/// byte other than +1/-1 or decreasing timestamps; kBounds on coordinates
/// outside the sensor.
sim::EventStream read_events_binary(std::string_view bytes);

/// One `t_us x y p` line per record, p in {1, -1}.
std::string write_events_text(const sim::EventStream& stream);

struct SensorSize {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

/// Without a sensor size the stream is sized to the largest coordinates.
sim::EventStream read_events_text(std::string_view text,
                                  std::optional<SensorSize> sensor = std::nullopt);

bool is_binary_event_file(std::string_view bytes);

/// Dispatches on the EVS1 magic.
sim::EventStream read_events_any(std::string_view bytes,
                                 std::optional<SensorSize> sensor = std::nullopt);

enum class EventFormat { kBinary, kText };

/// Writes a stream batch by batch without holding it in memory. For EVS1 the
/// header record count is patched in on close(). Batches must keep the time
/// order; records are bounds-checked like write_events_binary.
class EventFileWriter {
 public:
  EventFileWriter(const std::filesystem::path& path, EventFormat format, std::uint32_t width,
                  std::uint32_t height);
  ~EventFileWriter();
  EventFileWriter(const EventFileWriter&) = delete;
  EventFileWriter& operator=(const EventFileWriter&) = delete;

  void append(std::span<const events::EventRecord> records);
  /// Flushes and finalizes the file. Throws kIo on a failed write.
  void close();
  std::uint64_t count() const { return count_; }

 private:
  std::ofstream out_;
  EventFormat format_;
  sim::EventStream sensor_;
  std::string buffer_;
  std::uint64_t count_ = 0;
  std::uint64_t last_t_ = 0;
};

}  // namespace evsynth::io
