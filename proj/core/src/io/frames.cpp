#include "evsynth/io/frames.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "evsynth/error.hpp"
#include "text_util.hpp"

namespace evsynth::io {
namespace fs = std::filesystem;

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t next_number(const char* what) {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    const auto v = detail::parse_number<std::uint32_t>(bytes_.substr(start, pos_ - start));
    if (!v) throw Error(ErrorCode::kParse, std::string("bad PNM header field: ") + what);
    return *v;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorCode::kParse, "PNM header not terminated by whitespace");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 2;
};

std::string pnm_header(const char* magic, std::uint32_t w, std::uint32_t h, std::uint32_t maxval) {
  return std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n" +
         std::to_string(maxval) + "\n";
}

std::optional<std::uint64_t> trailing_index(const fs::path& path) {
  const std::string stem = path.stem().string();
  std::size_t end = stem.size();
  while (end > 0 && !std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
  std::size_t start = end;
  while (start > 0 && std::isdigit(static_cast<unsigned char>(stem[start - 1]))) --start;
  if (start == end) return std::nullopt;
  return detail::parse_number<std::uint64_t>(std::string_view(stem).substr(start, end - start));
}

}  // namespace

PnmImage decode_pnm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error(ErrorCode::kParse, "unsupported image magic (expected P5 or P6)");
  }
  PnmImage img;
  img.channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader header(bytes);
  img.width = header.next_number("width");
  img.height = header.next_number("height");
  img.maxval = header.next_number("maxval");
  if (img.width == 0 || img.height == 0) throw Error(ErrorCode::kParse, "empty image");
  if (img.maxval == 0 || img.maxval > 65535) throw Error(ErrorCode::kParse, "maxval out of range");
  if (img.channels == 3 && img.maxval > 255) {
    throw Error(ErrorCode::kParse, "only 8-bit P6 images are supported");
  }

  const std::size_t offset = header.raster_offset();
  const std::size_t bytes_per_sample = img.maxval > 255 ? 2 : 1;
  const std::size_t count = std::size_t{img.width} * img.height * img.channels;
  if (bytes.size() - offset < count * bytes_per_sample) {
    throw Error(ErrorCode::kParse, "image raster is truncated");
  }
  img.samples.resize(count);
  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint16_t v = bytes_per_sample == 2
                          ? static_cast<std::uint16_t>((raster[2 * i] << 8) | raster[2 * i + 1])
                          : raster[i];
    if (v > img.maxval) throw Error(ErrorCode::kParse, "sample exceeds maxval");
    img.samples[i] = v;
  }
  return img;
}

std::string encode_pgm(std::uint32_t width, std::uint32_t height,
                       std::span<const std::uint8_t> pixels) {
  if (pixels.size() != std::size_t{width} * height) {
    throw Error(ErrorCode::kInvalidArgument, "pixel count does not match image size");
  }
  std::string out = pnm_header("P5", width, height, 255);
  out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return out;
}

std::string encode_pgm16(std::uint32_t width, std::uint32_t height,
                         std::span<const std::uint16_t> pixels) {
  if (pixels.size() != std::size_t{width} * height) {
    throw Error(ErrorCode::kInvalidArgument, "pixel count does not match image size");
  }
  std::string out = pnm_header("P5", width, height, 65535);
  for (std::uint16_t v : pixels) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

std::string encode_ppm(std::uint32_t width, std::uint32_t height,
                       std::span<const std::uint8_t> rgb) {
  if (rgb.size() != std::size_t{width} * height * 3) {
    throw Error(ErrorCode::kInvalidArgument, "sample count does not match image size");
  }
  std::string out = pnm_header("P6", width, height, 255);
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

sim::LuminanceFrame to_luminance(const PnmImage& image, std::uint64_t t_us) {
  sim::LuminanceFrame frame;
  frame.width = image.width;
  frame.height = image.height;
  frame.t_us = t_us;
  const std::size_t n = std::size_t{image.width} * image.height;
  frame.pixels.resize(n);
  const double scale = 1.0 / image.maxval;
  for (std::size_t i = 0; i < n; ++i) {
    double v;
    if (image.channels == 1) {
      v = image.samples[i] * scale;
    } else {
      v = sim::rgb_to_luminance(image.samples[3 * i] * scale, image.samples[3 * i + 1] * scale,
                                image.samples[3 * i + 2] * scale);
    }
    frame.pixels[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return frame;
}

std::map<std::uint64_t, std::uint64_t> read_timestamps(std::string_view text) {
  std::map<std::uint64_t, std::uint64_t> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!lines[i].empty() && lines[i].front() == '#') continue;
    const auto f = detail::split_fields(lines[i]);
    if (f.empty()) continue;
    const auto id = f.size() == 2 ? detail::parse_number<std::uint64_t>(f[0]) : std::nullopt;
    const auto t = f.size() == 2 ? detail::parse_number<std::uint64_t>(f[1]) : std::nullopt;
    if (!id || !t) {
      throw Error(ErrorCode::kParse,
                  "timestamps line " + std::to_string(i + 1) + ": expected `frame_id t_us`");
    }
    if (!out.emplace(*id, *t).second) {
      throw Error(ErrorCode::kParse, "timestamps line " + std::to_string(i + 1) +
                                         ": duplicate frame id " + std::to_string(*id));
    }
  }
  return out;
}

std::vector<FrameFile> list_frames(const fs::path& dir, const FrameReadOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<FrameFile> files;
  std::set<std::uint64_t> indices;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext != ".pgm" && ext != ".ppm") continue;
    const auto index = trailing_index(entry.path());
    if (!index) {
      throw Error(ErrorCode::kMalformedSequence,
                  "frame file has no index in its name: " + entry.path().filename().string());
    }
    if (!indices.insert(*index).second) {
      throw Error(ErrorCode::kMalformedSequence,
                  "duplicate frame index " + std::to_string(*index));
    }
    files.push_back({entry.path(), *index, 0});
  }
  std::sort(files.begin(), files.end(),
            [](const FrameFile& a, const FrameFile& b) { return a.index < b.index; });

  std::optional<fs::path> sidecar = options.timestamps;
  if (!sidecar && fs::exists(dir / "timestamps.txt")) sidecar = dir / "timestamps.txt";

  if (sidecar) {
    const auto table = read_timestamps(read_file(*sidecar));
    for (auto& f : files) {
      const auto it = table.find(f.index);
      if (it == table.end()) {
        throw Error(ErrorCode::kMalformedSequence,
                    "no timestamp for frame " + std::to_string(f.index));
      }
      f.t_us = it->second;
    }
  } else if (options.fps) {
    const std::uint64_t period = frame_period_us(*options.fps);
    for (std::size_t i = 0; i < files.size(); ++i) files[i].t_us = i * period;
  } else {
    throw Error(ErrorCode::kMalformedSequence, "no timestamp sidecar and no frame rate given");
  }
  for (std::size_t i = 1; i < files.size(); ++i) {
    if (files[i].t_us <= files[i - 1].t_us) {
      throw Error(ErrorCode::kMalformedSequence, "frame timestamps must strictly increase");
    }
  }
  return files;
}

sim::FrameSequence read_frames(const fs::path& dir, const FrameReadOptions& options) {
  sim::FrameSequence seq;
  for (const auto& f : list_frames(dir, options)) {
    seq.frames.push_back(to_luminance(decode_pnm(read_file(f.path)), f.t_us));
    const auto& first = seq.frames.front();
    const auto& last = seq.frames.back();
    if (last.width != first.width || last.height != first.height) {
      throw Error(ErrorCode::kMalformedSequence,
                  "mixed frame dimensions at " + f.path.filename().string());
    }
  }
  return seq;
}

sim::FrameSource frame_source(std::vector<FrameFile> files) {
  auto state = std::make_shared<std::pair<std::vector<FrameFile>, std::size_t>>(std::move(files), 0);
  return [state]() -> std::optional<sim::LuminanceFrame> {
    auto& [list, next] = *state;
    if (next >= list.size()) return std::nullopt;
    const FrameFile& f = list[next++];
    return to_luminance(decode_pnm(read_file(f.path)), f.t_us);
  };
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace evsynth::io
