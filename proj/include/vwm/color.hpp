#pragma once

// Full-range BT.601 conversion between 8-bit YCbCr 4:2:0 and real-valued RGB.
// Chroma is upsampled by replication and downsampled by 2x2 box average, so
// converting YCbCr -> RGB -> YCbCr reproduces every in-gamut sample exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "vwm/image.hpp"

namespace vwm {

struct Rgb {
  double r, g, b;
};

inline Rgb ycbcr_to_rgb_unclamped(double y, double cb, double cr) {
  const double u = cb - 128.0;
  const double v = cr - 128.0;
  return {y + 1.402 * v, y - 0.344136 * u - 0.714136 * v, y + 1.772 * u};
}

inline double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }
inline double chroma_b(double r, double g, double b) {
  return 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
}
inline double chroma_r(double r, double g, double b) {
  return 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
}

inline std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

inline FrameRGB yuv420_to_rgb(const FrameYCbCr420& f) {
  if (f.width % 2 != 0 || f.height % 2 != 0)
    throw std::invalid_argument("4:2:0 frame needs even dimensions");
  const std::size_t luma_size = static_cast<std::size_t>(f.width) * f.height;
  const std::size_t chroma_size = luma_size / 4;
  if (f.y.size() != luma_size || f.cb.size() != chroma_size || f.cr.size() != chroma_size)
    throw std::invalid_argument("chroma planes must be exactly half the luma dimensions");

  FrameRGB out(f.width, f.height);
  const int cw = f.chroma_width();
  for (int row = 0; row < f.height; ++row) {
    for (int col = 0; col < f.width; ++col) {
      const std::size_t ci = static_cast<std::size_t>(row / 2) * cw + col / 2;
      const Rgb c = ycbcr_to_rgb_unclamped(f.y[static_cast<std::size_t>(row) * f.width + col],
                                           f.cb[ci], f.cr[ci]);
      out.r(row, col) = std::clamp(c.r, 0.0, 255.0);
      out.g(row, col) = std::clamp(c.g, 0.0, 255.0);
      out.b(row, col) = std::clamp(c.b, 0.0, 255.0);
    }
  }
  return out;
}

inline FrameYCbCr420 rgb_to_yuv420(const FrameRGB& f) {
  const int w = f.width();
  const int h = f.height();
  if (w % 2 != 0 || h % 2 != 0) throw std::invalid_argument("4:2:0 frame needs even dimensions");

  FrameYCbCr420 out(w, h);
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col)
      out.y[static_cast<std::size_t>(row) * w + col] =
          to_u8(luma(f.r(row, col), f.g(row, col), f.b(row, col)));

  const int cw = w / 2;
  for (int row = 0; row < h / 2; ++row) {
    for (int col = 0; col < cw; ++col) {
      double cb = 0.0, cr = 0.0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const int y = 2 * row + dy, x = 2 * col + dx;
          cb += chroma_b(f.r(y, x), f.g(y, x), f.b(y, x));
          cr += chroma_r(f.r(y, x), f.g(y, x), f.b(y, x));
        }
      }
      out.cb[static_cast<std::size_t>(row) * cw + col] = to_u8(cb / 4.0);
      out.cr[static_cast<std::size_t>(row) * cw + col] = to_u8(cr / 4.0);
    }
  }
  return out;
}

// The 8-bit 4:2:0 round trip every frame goes through when written to disk.
inline FrameRGB quantize_420(const FrameRGB& f) { return yuv420_to_rgb(rgb_to_yuv420(f)); }

inline VideoClip quantize_420(const VideoClip& clip) {
  VideoClip out{{}, clip.width, clip.height, clip.fps};
  out.frames.reserve(clip.size());
  for (const auto& f : clip.frames) out.frames.push_back(quantize_420(f));
  return out;
}

// Rounding to 8-bit RGB, as a lossless RGB frame dump (PNG) would store it.
inline FrameRGB quantize_rgb8(const FrameRGB& f) {
  FrameRGB out = f;
  for (int c = 0; c < 3; ++c)
    for (double& v : out.channel(c).samples()) v = to_u8(v);
  return out;
}

inline VideoClip quantize_rgb8(const VideoClip& clip) {
  VideoClip out{{}, clip.width, clip.height, clip.fps};
  out.frames.reserve(clip.size());
  for (const auto& f : clip.frames) out.frames.push_back(quantize_rgb8(f));
  return out;
}

}  // namespace vwm
