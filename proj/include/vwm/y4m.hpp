#pragma once

// YUV4MPEG2 reader/writer for progressive 8-bit 4:2:0 content.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vwm/color.hpp"
#include "vwm/error.hpp"
#include "vwm/image.hpp"

namespace vwm {

struct Y4mHeader {
  int width = 0;
  int height = 0;
  Rational fps;
};

namespace detail {

inline int parse_int(std::string_view s, std::size_t offset) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("invalid integer '" + std::string(s) + "'", offset);
  return v;
}

inline Rational parse_ratio(std::string_view s, std::size_t offset) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ParseError("ratio without ':'", offset);
  return {parse_int(s.substr(0, colon), offset), parse_int(s.substr(colon + 1), offset + colon + 1)};
}

// Parses the stream header line; returns the offset of the first frame.
inline std::size_t parse_y4m_header(std::string_view data, Y4mHeader& header) {
  constexpr std::string_view kMagic = "YUV4MPEG2";
  if (data.substr(0, kMagic.size()) != kMagic) throw ParseError("missing YUV4MPEG2 magic", 0);
  const auto eol = data.find('\n');
  if (eol == std::string_view::npos) throw ParseError("unterminated stream header", data.size());

  std::size_t pos = kMagic.size();
  bool have_w = false, have_h = false;
  while (pos < eol) {
    if (data[pos] != ' ') throw ParseError("expected space between header fields", pos);
    ++pos;
    const auto end = std::min(data.find(' ', pos), eol);
    const std::string_view field = data.substr(pos, end - pos);
    if (field.empty()) throw ParseError("empty header field", pos);
    const std::string_view value = field.substr(1);
    switch (field[0]) {
      case 'W': header.width = parse_int(value, pos + 1); have_w = true; break;
      case 'H': header.height = parse_int(value, pos + 1); have_h = true; break;
      case 'F': header.fps = parse_ratio(value, pos + 1); break;
      case 'I':
        if (value != "p" && value != "?") throw ParseError("interlaced content is not supported", pos);
        break;
      case 'C':
        if (!value.starts_with("420")) throw ParseError("unsupported colorspace C" + std::string(value), pos);
        break;
      case 'A':
      case 'X': break;
      default: throw ParseError("unknown header field '" + std::string(field) + "'", pos);
    }
    pos = end;
  }
  if (!have_w || !have_h) throw ParseError("header lacks W or H", eol);
  if (header.width <= 0 || header.height <= 0 || header.width % 2 || header.height % 2)
    throw ParseError("frame dimensions must be positive and even", eol);
  if (header.fps.num <= 0 || header.fps.den <= 0) throw ParseError("frame rate must be positive", eol);
  return eol + 1;
}

}  // namespace detail

inline VideoClip parse_y4m(std::string_view data) {
  Y4mHeader header;
  std::size_t pos = detail::parse_y4m_header(data, header);

  VideoClip clip{{}, header.width, header.height, header.fps};
  const std::size_t luma = static_cast<std::size_t>(header.width) * header.height;
  const std::size_t chroma = luma / 4;
  std::size_t index = 0;
  while (pos < data.size()) {
    if (data.substr(pos, 5) != "FRAME")
      throw ParseError("expected FRAME marker for frame " + std::to_string(index), pos);
    const auto eol = data.find('\n', pos);
    if (eol == std::string_view::npos)
      throw ParseError("truncated frame " + std::to_string(index) + ": unterminated FRAME line", pos);
    pos = eol + 1;
    if (data.size() - pos < luma + 2 * chroma)
      throw ParseError("truncated frame " + std::to_string(index), pos);

    FrameYCbCr420 f(header.width, header.height);
    auto copy_plane = [&](std::vector<std::uint8_t>& dst) {
      std::copy_n(reinterpret_cast<const std::uint8_t*>(data.data() + pos), dst.size(), dst.begin());
      pos += dst.size();
    };
    copy_plane(f.y);
    copy_plane(f.cb);
    copy_plane(f.cr);
    clip.frames.push_back(yuv420_to_rgb(f));
    ++index;
  }
  return clip;
}

inline VideoClip read_y4m(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_y4m(data);
}

inline std::string serialize_y4m(const VideoClip& clip) {
  validate_clip(clip);
  std::ostringstream out;
  out << "YUV4MPEG2 W" << clip.width << " H" << clip.height << " F" << clip.fps.num << ':'
      << clip.fps.den << " Ip A1:1 C420\n";
  for (const auto& frame : clip.frames) {
    const FrameYCbCr420 f = rgb_to_yuv420(frame);
    out << "FRAME\n";
    for (const auto* plane : {&f.y, &f.cb, &f.cr})
      out.write(reinterpret_cast<const char*>(plane->data()), static_cast<std::streamsize>(plane->size()));
  }
  return std::move(out).str();
}

inline void write_y4m(const VideoClip& clip, const std::string& path) {
  const std::string data = serialize_y4m(clip);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace vwm
