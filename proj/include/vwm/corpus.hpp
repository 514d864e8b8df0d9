#pragma once

// Seeded synthetic test clips: value-noise textured background with moving
// textured rectangles plus mild per-frame sensor noise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vwm/image.hpp"

namespace vwm {

struct CorpusSpec {
  int width = 352;
  int height = 288;
  int frames = 100;
  Rational fps{25, 1};
  std::uint64_t seed = 1;
  int rectangles = 6;
  double sensor_noise = 1.0;
};

namespace detail {

// Bilinearly interpolated lattice of uniform random values in [-1, 1].
class ValueNoise {
 public:
  ValueNoise(int width, int height, double cell, std::mt19937_64& rng)
      : cell_(cell), gw_(static_cast<int>(width / cell) + 2), gh_(static_cast<int>(height / cell) + 2),
        lattice_(static_cast<std::size_t>(gw_) * gh_) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : lattice_) v = u(rng);
  }

  double operator()(double x, double y) const {
    const double gx = std::clamp(x / cell_, 0.0, gw_ - 1.001), gy = std::clamp(y / cell_, 0.0, gh_ - 1.001);
    const int x0 = static_cast<int>(gx), y0 = static_cast<int>(gy);
    const double fx = gx - x0, fy = gy - y0;
    auto at = [&](int xx, int yy) { return lattice_[static_cast<std::size_t>(yy) * gw_ + xx]; };
    const double top = at(x0, y0) * (1 - fx) + at(x0 + 1, y0) * fx;
    const double bottom = at(x0, y0 + 1) * (1 - fx) + at(x0 + 1, y0 + 1) * fx;
    return top * (1 - fy) + bottom * fy;
  }

 private:
  double cell_;
  int gw_, gh_;
  std::vector<double> lattice_;
};

struct MovingRect {
  double x, y, vx, vy;
  int w, h;
  double base[3];
  double amp;
  std::vector<ValueNoise> texture;  // one per channel
};

}  // namespace detail

inline VideoClip generate_clip(const CorpusSpec& spec) {
  std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + 17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  const int w = spec.width, h = spec.height;
  std::vector<detail::ValueNoise> coarse, fine;
  double bg_base[3], bg_amp_coarse = uni(25, 45), bg_amp_fine = uni(10, 25);
  const double fine_cell = uni(3.0, 6.0);
  for (int c = 0; c < 3; ++c) {
    coarse.emplace_back(w, h, uni(40, 80), rng);
    fine.emplace_back(w, h, fine_cell, rng);
    bg_base[c] = uni(90, 160);
  }

  std::vector<detail::MovingRect> rects;
  for (int i = 0; i < spec.rectangles; ++i) {
    detail::MovingRect r;
    r.w = static_cast<int>(uni(0.12, 0.3) * w);
    r.h = static_cast<int>(uni(0.12, 0.3) * h);
    r.x = uni(0, w - r.w);
    r.y = uni(0, h - r.h);
    r.vx = uni(-1.5, 1.5);
    r.vy = uni(-1.0, 1.0);
    for (double& b : r.base) b = uni(60, 190);
    r.amp = uni(20, 40);
    const double cell = uni(2.5, 7.0);
    for (int c = 0; c < 3; ++c) r.texture.emplace_back(r.w, r.h, cell, rng);
    rects.push_back(std::move(r));
  }

  VideoClip clip{{}, w, h, spec.fps};
  std::normal_distribution<double> sensor(0.0, spec.sensor_noise);
  for (int t = 0; t < spec.frames; ++t) {
    FrameRGB f(w, h);
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < w; ++col)
        for (int c = 0; c < 3; ++c)
          f.channel(c)(row, col) = bg_base[c] + bg_amp_coarse * coarse[c](col, row) + bg_amp_fine * fine[c](col, row);

    for (const auto& r : rects) {
      const int x0 = static_cast<int>(std::lround(r.x)), y0 = static_cast<int>(std::lround(r.y));
      for (int row = std::max(0, y0); row < std::min(h, y0 + r.h); ++row)
        for (int col = std::max(0, x0); col < std::min(w, x0 + r.w); ++col)
          for (int c = 0; c < 3; ++c)
            f.channel(c)(row, col) = r.base[c] + r.amp * r.texture[c](col - x0, row - y0);
    }
    for (int c = 0; c < 3; ++c)
      for (double& v : f.channel(c).samples()) v = std::clamp(v + sensor(rng), 0.0, 255.0);
    clip.frames.push_back(std::move(f));

    for (auto& r : rects) {
      r.x += r.vx;
      r.y += r.vy;
      if (r.x < 0 || r.x > w - r.w) r.vx = -r.vx;
      if (r.y < 0 || r.y > h - r.h) r.vy = -r.vy;
    }
  }
  return clip;
}

}  // namespace vwm
