#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vwm {

// Row-major plane of real samples.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked(width)) * checked(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int row, int col) { return data_[index(row, col)]; }
  double operator()(int row, int col) const { return data_[index(row, col)]; }

  std::span<double> samples() { return data_; }
  std::span<const double> samples() const { return data_; }

  bool same_shape(const Plane& o) const { return width_ == o.width_ && height_ == o.height_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  static int checked(int v) {
    if (v < 0) throw std::invalid_argument("plane dimension must be non-negative");
    return v;
  }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Full-resolution frame, three real-valued planes nominally in [0, 255].
struct FrameRGB {
  Plane r, g, b;

  FrameRGB() = default;
  FrameRGB(int width, int height, double fill = 0.0)
      : r(width, height, fill), g(width, height, fill), b(width, height, fill) {}

  int width() const { return g.width(); }
  int height() const { return g.height(); }

  Plane& channel(int c) { return c == 0 ? r : (c == 1 ? g : b); }
  const Plane& channel(int c) const { return c == 0 ? r : (c == 1 ? g : b); }

  friend bool operator==(const FrameRGB&, const FrameRGB&) = default;
};

// 8-bit planar YCbCr with 2x2 subsampled chroma.
struct FrameYCbCr420 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> y, cb, cr;

  FrameYCbCr420() = default;
  FrameYCbCr420(int w, int h)
      : width(w), height(h),
        y(static_cast<std::size_t>(w) * h),
        cb(static_cast<std::size_t>(w / 2) * (h / 2)),
        cr(static_cast<std::size_t>(w / 2) * (h / 2)) {}

  int chroma_width() const { return width / 2; }
  int chroma_height() const { return height / 2; }

  friend bool operator==(const FrameYCbCr420&, const FrameYCbCr420&) = default;
};

struct Rational {
  int num = 25;
  int den = 1;

  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct VideoClip {
  std::vector<FrameRGB> frames;
  int width = 0;
  int height = 0;
  Rational fps;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
};

inline constexpr int kMinClipDimension = 64;

// Throws std::invalid_argument describing the first violated clip invariant.
inline void validate_clip(const VideoClip& clip) {
  if (clip.frames.empty()) throw std::invalid_argument("no frames");
  if (clip.width % 2 != 0 || clip.height % 2 != 0)
    throw std::invalid_argument("clip dimensions must be even, got " + std::to_string(clip.width) +
                                "x" + std::to_string(clip.height));
  if (clip.width < kMinClipDimension || clip.height < kMinClipDimension)
    throw std::invalid_argument("clip dimensions must be at least 64x64");
  if (clip.fps.num <= 0 || clip.fps.den <= 0) throw std::invalid_argument("fps must be positive");
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    const auto& f = clip.frames[i];
    if (f.width() != clip.width || f.height() != clip.height || !f.r.same_shape(f.g) ||
        !f.b.same_shape(f.g))
      throw std::invalid_argument("frame " + std::to_string(i) + " has mismatched dimensions");
  }
}

inline void clamp_inplace(Plane& p, double lo = 0.0, double hi = 255.0) {
  for (double& v : p.samples()) v = v < lo ? lo : (v > hi ? hi : v);
}

inline void clamp_inplace(FrameRGB& f) {
  clamp_inplace(f.r);
  clamp_inplace(f.g);
  clamp_inplace(f.b);
}

}  // namespace vwm
