#pragma once

// ORB-style keypoint detection: FAST-9 segment test over a scale pyramid,
// ranked by Harris corner response. Descriptors are not computed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "vwm/image.hpp"

namespace vwm {

struct KeyPoint {
  double x = 0.0;  // level-0 pixel coordinates
  double y = 0.0;
  double response = 0.0;
  int octave = 0;

  friend bool operator==(const KeyPoint&, const KeyPoint&) = default;
};

struct DetectorConfig {
  double fast_threshold = 20.0;
  int pyramid_levels = 4;
  double scale_factor = 1.2;
  double harris_k = 0.04;
  double min_response = 0.0;  // keep corners whose Harris response exceeds this
};

inline constexpr int kMinDetectDimension = 32;

// Bresenham circle of radius 3, clockwise from 12 o'clock: (dx, dy).
inline constexpr std::array<std::array<int, 2>, 16> kFastCircle{{
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
    {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
}};

// FAST segment test: at least `arc` contiguous circle pixels all brighter than
// center + threshold, or all darker than center - threshold.
inline bool fast_corner(const Plane& p, int row, int col, double threshold, int arc = 9) {
  const double center = p(row, col);
  std::array<int, 16> cls{};
  int compass_bright = 0, compass_dark = 0;
  for (int i = 0; i < 16; i += 4) {
    const double v = p(row + kFastCircle[i][1], col + kFastCircle[i][0]);
    compass_bright += v > center + threshold;
    compass_dark += v < center - threshold;
  }
  // any arc of 9 contains at least two of the four compass points
  if (compass_bright < 2 && compass_dark < 2) return false;

  for (int i = 0; i < 16; ++i) {
    const double v = p(row + kFastCircle[i][1], col + kFastCircle[i][0]);
    cls[i] = v > center + threshold ? 1 : (v < center - threshold ? -1 : 0);
  }
  for (int sign : {1, -1}) {
    int run = 0;
    for (int i = 0; i < 32; ++i) {
      run = cls[i % 16] == sign ? run + 1 : 0;
      if (run >= arc) return true;
    }
  }
  return false;
}

// Harris measure det(M) - k tr(M)^2 over a 7x7 window of Sobel gradients.
inline double harris_response(const Plane& p, int row, int col, double k = 0.04) {
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx) {
      const int r = row + dy, c = col + dx;
      const double gx = (p(r - 1, c + 1) + 2 * p(r, c + 1) + p(r + 1, c + 1)) -
                        (p(r - 1, c - 1) + 2 * p(r, c - 1) + p(r + 1, c - 1));
      const double gy = (p(r + 1, c - 1) + 2 * p(r + 1, c) + p(r + 1, c + 1)) -
                        (p(r - 1, c - 1) + 2 * p(r - 1, c) + p(r - 1, c + 1));
      sxx += gx * gx;
      syy += gy * gy;
      sxy += gx * gy;
    }
  const double det = sxx * syy - sxy * sxy;
  const double tr = sxx + syy;
  return det - k * tr * tr;
}

// Bilinear sample with edge clamping, pixel centers at integer coordinates.
inline double sample_clamped(const Plane& p, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(p.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(p.height() - 1));
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, p.width() - 1), y1 = std::min(y0 + 1, p.height() - 1);
  const double fx = x - x0, fy = y - y0;
  const double top = p(y0, x0) + (p(y0, x1) - p(y0, x0)) * fx;
  const double bottom = p(y1, x0) + (p(y1, x1) - p(y1, x0)) * fx;
  return top + (bottom - top) * fy;
}

inline Plane resize_bilinear(const Plane& src, int width, int height) {
  Plane out(width, height);
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      out(r, c) = sample_clamped(src, (c + 0.5) * sx - 0.5, (r + 0.5) * sy - 0.5);
  return out;
}

inline bool keypoint_order(const KeyPoint& a, const KeyPoint& b) {
  if (a.response != b.response) return a.response > b.response;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

inline std::vector<KeyPoint> detect_keypoints(const Plane& plane, const DetectorConfig& cfg = {}) {
  if (plane.width() < kMinDetectDimension || plane.height() < kMinDetectDimension)
    throw std::invalid_argument("keypoint detection needs a plane of at least 32x32");
  constexpr int kBorder = 4;  // FAST radius 3 plus the Sobel tap of the Harris window

  std::vector<KeyPoint> out;
  for (int level = 0; level < cfg.pyramid_levels; ++level) {
    const double scale = std::pow(cfg.scale_factor, level);
    const int w = static_cast<int>(std::lround(plane.width() / scale));
    const int h = static_cast<int>(std::lround(plane.height() / scale));
    if (w < 2 * kBorder + 1 || h < 2 * kBorder + 1) break;
    const Plane img = level == 0 ? plane : resize_bilinear(plane, w, h);
    const double sx = static_cast<double>(plane.width()) / w;
    const double sy = static_cast<double>(plane.height()) / h;

    for (int r = kBorder; r < h - kBorder; ++r)
      for (int c = kBorder; c < w - kBorder; ++c) {
        if (!fast_corner(img, r, c, cfg.fast_threshold)) continue;
        const double resp = harris_response(img, r, c, cfg.harris_k);
        if (resp <= cfg.min_response) continue;
        out.push_back({(c + 0.5) * sx - 0.5, (r + 0.5) * sy - 0.5, resp, level});
      }
  }
  std::sort(out.begin(), out.end(), keypoint_order);
  return out;
}

// Greedy suppression in descending response: a point survives iff no stronger
// survivor lies within `radius`.
inline std::vector<KeyPoint> cluster_keypoints(std::vector<KeyPoint> kps, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cluster radius must be positive");
  std::sort(kps.begin(), kps.end(), keypoint_order);

  auto cell_of = [radius](double v) { return static_cast<std::int64_t>(std::floor(v / radius)); };
  auto cell_key = [](std::int64_t cx, std::int64_t cy) { return (cy << 32) ^ (cx & 0xffffffff); };
  std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
  std::vector<KeyPoint> kept;
  const double r2 = radius * radius;
  for (const auto& kp : kps) {
    bool suppressed = false;
    const std::int64_t cx = cell_of(kp.x), cy = cell_of(kp.y);
    for (int dy = -1; dy <= 1 && !suppressed; ++dy)
      for (int dx = -1; dx <= 1 && !suppressed; ++dx) {
        auto it = grid.find(cell_key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (std::size_t idx : it->second) {
          const double ex = kept[idx].x - kp.x, ey = kept[idx].y - kp.y;
          if (ex * ex + ey * ey <= r2) {
            suppressed = true;
            break;
          }
        }
      }
    if (suppressed) continue;
    grid[cell_key(cx, cy)].push_back(kept.size());
    kept.push_back(kp);
  }
  return kept;
}

}  // namespace vwm
