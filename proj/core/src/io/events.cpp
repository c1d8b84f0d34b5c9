#include "evsynth/io/events.hpp"

#include <limits>
#include <string>

#include "evsynth/error.hpp"
#include "text_util.hpp"

namespace evsynth::io {
namespace {

constexpr std::string_view kMagic = "EVS1";

template <class T>
void put_le(std::string& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(u & 0xff));
    u = static_cast<U>(u >> 8);
  }
}

template <class T>
T get_le(std::string_view bytes, std::size_t offset) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) {
    u = static_cast<U>((u << 8) | static_cast<unsigned char>(bytes[offset + i]));
  }
  return static_cast<T>(u);
}

void check_dims(const sim::EventStream& s) {
  if (s.width > std::numeric_limits<std::uint16_t>::max() ||
      s.height > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "sensor size exceeds 16-bit range");
  }
}

void check_record(const events::EventRecord& r, const sim::EventStream& s, std::size_t index) {
  if (r.x >= s.width || r.y >= s.height) {
    throw Error(ErrorCode::kBounds, "record " + std::to_string(index) + " at (" +
                                        std::to_string(r.x) + ", " + std::to_string(r.y) +
                                        ") lies outside the sensor");
  }
}

void append_header(std::string& out, const sim::EventStream& s, std::uint64_t count) {
  out.append(kMagic);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.width));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.height));
  put_le<std::uint64_t>(out, count);
  out.append(8, '\0');
}

void append_record(std::string& out, const events::EventRecord& r, const sim::EventStream& s,
                   std::size_t index) {
  check_record(r, s, index);
  if (r.polarity != 1 && r.polarity != -1) {
    throw Error(ErrorCode::kInvalidArgument, "polarity must be +1 or -1");
  }
  put_le<std::uint64_t>(out, r.t_us);
  put_le<std::uint16_t>(out, r.x);
  put_le<std::uint16_t>(out, r.y);
  put_le<std::int8_t>(out, r.polarity);
}

void append_text(std::string& out, const events::EventRecord& r) {
  out += std::to_string(r.t_us);
  out += ' ';
  out += std::to_string(r.x);
  out += ' ';
  out += std::to_string(r.y);
  out += r.polarity > 0 ? " 1\n" : " -1\n";
}

}  // namespace

std::string write_events_binary(const sim::EventStream& stream) {
  check_dims(stream);
  std::string out;
  out.reserve(kEventHeaderBytes + stream.records.size() * kEventRecordBytes);
  append_header(out, stream, stream.records.size());
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    append_record(out, stream.records[i], stream, i);
  }
  return out;
}

sim::EventStream read_events_binary(std::string_view bytes) {
  if (bytes.size() < kEventHeaderBytes) throw Error(ErrorCode::kParse, "event header truncated");
  if (bytes.substr(0, 4) != kMagic) throw Error(ErrorCode::kParse, "bad event file magic");
  sim::EventStream s;
  s.width = get_le<std::uint16_t>(bytes, 4);
  s.height = get_le<std::uint16_t>(bytes, 6);
  const auto count = get_le<std::uint64_t>(bytes, 8);
  const std::size_t payload = bytes.size() - kEventHeaderBytes;
  if (count > payload / kEventRecordBytes || payload != count * kEventRecordBytes) {
    throw Error(ErrorCode::kParse, "payload size does not match record count " +
                                       std::to_string(count));
  }
  s.records.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t off = kEventHeaderBytes + i * kEventRecordBytes;
    events::EventRecord r;
    r.t_us = get_le<std::uint64_t>(bytes, off);
    r.x = get_le<std::uint16_t>(bytes, off + 8);
    r.y = get_le<std::uint16_t>(bytes, off + 10);
    r.polarity = get_le<std::int8_t>(bytes, off + 12);
    if (r.polarity != 1 && r.polarity != -1) {
      throw Error(ErrorCode::kParse, "record " + std::to_string(i) + " has polarity byte " +
                                         std::to_string(r.polarity));
    }
    check_record(r, s, i);
    if (i > 0 && r.t_us < s.records[i - 1].t_us) {
      throw Error(ErrorCode::kParse, "record " + std::to_string(i) + " has a descending timestamp");
    }
    s.records[i] = r;
  }
  return s;
}

std::string write_events_text(const sim::EventStream& stream) {
  std::string out;
  out.reserve(stream.records.size() * 16);
  for (const auto& r : stream.records) append_text(out, r);
  return out;
}

sim::EventStream read_events_text(std::string_view text, std::optional<SensorSize> sensor) {
  sim::EventStream s;
  const auto lines = detail::split_lines(text);
  std::uint32_t max_x = 0;
  std::uint32_t max_y = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = detail::split_fields(lines[i]);
    if (f.empty()) continue;
    const std::string where = "event text line " + std::to_string(i + 1);
    if (f.size() != 4) throw Error(ErrorCode::kParse, where + ": expected `t_us x y p`");
    const auto t = detail::parse_number<std::uint64_t>(f[0]);
    const auto x = detail::parse_number<std::uint16_t>(f[1]);
    const auto y = detail::parse_number<std::uint16_t>(f[2]);
    const auto p = detail::parse_number<int>(f[3]);
    if (!t || !x || !y || !p) throw Error(ErrorCode::kParse, where + ": non-integer field");
    if (*p != 1 && *p != -1) throw Error(ErrorCode::kParse, where + ": polarity must be 1 or -1");
    if (!s.records.empty() && *t < s.records.back().t_us) {
      throw Error(ErrorCode::kParse, where + ": descending timestamp");
    }
    s.records.push_back({*t, *x, *y, static_cast<std::int8_t>(*p)});
    max_x = std::max<std::uint32_t>(max_x, *x);
    max_y = std::max<std::uint32_t>(max_y, *y);
  }
  if (sensor) {
    s.width = sensor->width;
    s.height = sensor->height;
    for (std::size_t i = 0; i < s.records.size(); ++i) check_record(s.records[i], s, i);
  } else if (!s.records.empty()) {
    s.width = max_x + 1;
    s.height = max_y + 1;
  }
  return s;
}

bool is_binary_event_file(std::string_view bytes) { return bytes.substr(0, 4) == kMagic; }

sim::EventStream read_events_any(std::string_view bytes, std::optional<SensorSize> sensor) {
  if (is_binary_event_file(bytes)) return read_events_binary(bytes);
  return read_events_text(bytes, sensor);
}

EventFileWriter::EventFileWriter(const std::filesystem::path& path, EventFormat format,
                                 std::uint32_t width, std::uint32_t height)
    : out_(path, std::ios::binary | std::ios::trunc), format_(format), sensor_{width, height, {}} {
  check_dims(sensor_);
  if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  if (format_ == EventFormat::kBinary) {
    std::string header;
    append_header(header, sensor_, 0);
    out_.write(header.data(), static_cast<std::streamsize>(header.size()));
  }
}

EventFileWriter::~EventFileWriter() {
  try {
    close();
  } catch (...) {
  }
}

void EventFileWriter::append(std::span<const events::EventRecord> records) {
  if (!out_.is_open()) throw Error(ErrorCode::kIo, "event writer is closed");
  // Encode the whole batch first so a rejected record leaves the file intact.
  buffer_.clear();
  std::uint64_t count = count_;
  std::uint64_t last_t = last_t_;
  for (const auto& r : records) {
    if (r.t_us < last_t) {
      throw Error(ErrorCode::kInvalidArgument, "events must be appended in time order");
    }
    last_t = r.t_us;
    if (format_ == EventFormat::kBinary) {
      append_record(buffer_, r, sensor_, count);
    } else {
      check_record(r, sensor_, count);
      append_text(buffer_, r);
    }
    ++count;
  }
  count_ = count;
  last_t_ = last_t;
  out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  if (!out_) throw Error(ErrorCode::kIo, "event file write failed");
}

void EventFileWriter::close() {
  if (!out_.is_open()) return;
  if (format_ == EventFormat::kBinary) {
    std::string count;
    put_le<std::uint64_t>(count, count_);
    out_.seekp(8);
    out_.write(count.data(), static_cast<std::streamsize>(count.size()));
  }
  out_.close();
  if (!out_) throw Error(ErrorCode::kIo, "event file write failed");
}

}  // namespace evsynth::io
