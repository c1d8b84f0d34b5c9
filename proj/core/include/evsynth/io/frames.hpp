#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evsynth/simulator.hpp"
#include "evsynth/timing.hpp"

namespace evsynth::io {

/// Decoded binary Netpbm image (P5 grayscale or P6 color).
struct PnmImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int channels = 1;
  std::uint32_t maxval = 255;
  /// width * height * channels samples, row-major, channel-interleaved.
  std::vector<std::uint16_t> samples;
};

/// Accepts P5 with maxval up to 65535 (16-bit samples are big-endian) and
/// 8-bit P6. Throws kParse on anything else.
PnmImage decode_pnm(std::string_view bytes);

std::string encode_pgm(std::uint32_t width, std::uint32_t height,
                       std::span<const std::uint8_t> pixels);
std::string encode_pgm16(std::uint32_t width, std::uint32_t height,
                         std::span<const std::uint16_t> pixels);
std::string encode_ppm(std::uint32_t width, std::uint32_t height,
                       std::span<const std::uint8_t> rgb);

/// Normalized luminance; color inputs go through rgb_to_luminance.
sim::LuminanceFrame to_luminance(const PnmImage& image, std::uint64_t t_us);

/// Sidecar lines `frame_id t_us`; blank and `#` lines skipped.
std::map<std::uint64_t, std::uint64_t> read_timestamps(std::string_view text);

struct FrameReadOptions {
  /// Used when no sidecar applies. Unset means timestamps are mandatory.
  std::optional<double> fps = kDefaultFps;
  /// Explicit sidecar; otherwise `timestamps.txt` in the directory is used
  /// when present.
  std::optional<std::filesystem::path> timestamps;
};

struct FrameFile {
  std::filesystem::path path;
  std::uint64_t index = 0;
  std::uint64_t t_us = 0;
};

/// .pgm/.ppm files in `dir`, ordered by the last digit run in their name,
/// with timestamps resolved. Throws kIo / kParse / kMalformedSequence.
std::vector<FrameFile> list_frames(const std::filesystem::path& dir,
                                   const FrameReadOptions& options = {});

sim::FrameSequence read_frames(const std::filesystem::path& dir,
                               const FrameReadOptions& options = {});

/// Lazily decodes the listed frames one at a time.
sim::FrameSource frame_source(std::vector<FrameFile> files);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace evsynth::io
