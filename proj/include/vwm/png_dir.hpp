#pragma once

// Directories of frame_%06d.png files (8-bit RGB). Requires libpng.

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <string>
#include <vector>

#include "vwm/color.hpp"
#include "vwm/error.hpp"
#include "vwm/image.hpp"

namespace vwm {

inline FrameRGB read_png_rgb8(const std::string& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError(path + ": " + image.message);
  if ((image.format & PNG_FORMAT_FLAG_LINEAR) || !(image.format & PNG_FORMAT_FLAG_COLOR) ||
      (image.format & PNG_FORMAT_FLAG_COLORMAP) || (image.format & PNG_FORMAT_FLAG_ALPHA)) {
    png_image_free(&image);
    throw IoError(path + ": unsupported format (need 8-bit RGB)");
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr))
    throw IoError(path + ": " + image.message);

  const int w = static_cast<int>(image.width), h = static_cast<int>(image.height);
  FrameRGB f(w, h);
  std::size_t i = 0;
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col) {
      f.r(row, col) = buf[i++];
      f.g(row, col) = buf[i++];
      f.b(row, col) = buf[i++];
    }
  return f;
}

inline void write_png_rgb8(const FrameRGB& f, const std::string& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(f.width());
  image.height = static_cast<png_uint_32>(f.height());
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  std::size_t i = 0;
  for (int row = 0; row < f.height(); ++row)
    for (int col = 0; col < f.width(); ++col) {
      buf[i++] = to_u8(f.r(row, col));
      buf[i++] = to_u8(f.g(row, col));
      buf[i++] = to_u8(f.b(row, col));
    }
  if (!png_image_write_to_file(&image, path.c_str(), 0, buf.data(), 0, nullptr))
    throw IoError(path + ": " + image.message);
}

inline VideoClip read_png_dir(const std::string& dir, Rational fps = {25, 1}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError(dir + " is not a directory");
  static const std::regex kName(R"(frame_\d{6}\.png)");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), kName))
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError(dir + ": no frame_%06d.png files");

  VideoClip clip{{}, 0, 0, fps};
  for (const auto& file : files) {
    FrameRGB f = read_png_rgb8(file.string());
    if (clip.frames.empty()) {
      clip.width = f.width();
      clip.height = f.height();
    } else if (f.width() != clip.width || f.height() != clip.height) {
      throw IoError(file.string() + ": dimensions differ from the first frame");
    }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

inline void write_png_dir(const VideoClip& clip, const std::string& dir) {
  namespace fs = std::filesystem;
  validate_clip(clip);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  char name[32];
  for (std::size_t i = 0; i < clip.size(); ++i) {
    std::snprintf(name, sizeof name, "frame_%06zu.png", i);
    write_png_rgb8(clip.frames[i], (fs::path(dir) / name).string());
  }
}

}  // namespace vwm
