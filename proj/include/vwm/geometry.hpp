#pragma once

// Planar homographies in pixel-center coordinates and bilinear warping.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

#include "vwm/image.hpp"

namespace vwm {

using Homography = Eigen::Matrix3d;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 apply(const Homography& h, Point2 p) {
  const Eigen::Vector3d v = h * Eigen::Vector3d(p.x, p.y, 1.0);
  return {v.x() / v.z(), v.y() / v.z()};
}

// Homography taking each src[i] to dst[i].
inline Homography homography_from_points(const std::array<Point2, 4>& src,
                                         const std::array<Point2, 4>& dst) {
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = src[i].x, y = src[i].y, u = dst[i].x, v = dst[i].y;
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  if (!lu.isInvertible()) throw std::invalid_argument("degenerate point correspondence");
  const Eigen::Matrix<double, 8, 1> h = lu.solve(b);
  Homography out;
  out << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  return out;
}

// Maps pixel centers of a w x h grid onto pixel centers of a w2 x h2 grid.
inline Homography scale_homography(int w, int h, int w2, int h2) {
  const double sx = static_cast<double>(w2) / w, sy = static_cast<double>(h2) / h;
  Homography m;
  m << sx, 0, 0.5 * sx - 0.5, 0, sy, 0.5 * sy - 0.5, 0, 0, 1;
  return m;
}

// Rotation by `deg` degrees combined with uniform scale about (cx, cy).
inline Homography similarity_about(double cx, double cy, double deg, double scale) {
  const double t = deg * 3.14159265358979323846 / 180.0;
  const double c = std::cos(t) * scale, s = std::sin(t) * scale;
  Homography m;
  m << c, -s, cx - c * cx + s * cy, s, c, cy - s * cx - c * cy, 0, 0, 1;
  return m;
}

// Bilinear sample; points outside the half-pixel-extended image return `fill`.
inline double sample_bilinear(const Plane& p, double x, double y, double fill = 0.0) {
  if (!(x >= -0.5 && y >= -0.5 && x <= p.width() - 0.5 && y <= p.height() - 0.5)) return fill;
  x = std::clamp(x, 0.0, static_cast<double>(p.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(p.height() - 1));
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, p.width() - 1), y1 = std::min(y0 + 1, p.height() - 1);
  const double fx = x - x0, fy = y - y0;
  const double top = p(y0, x0) + (p(y0, x1) - p(y0, x0)) * fx;
  const double bottom = p(y1, x0) + (p(y1, x1) - p(y1, x0)) * fx;
  return top + (bottom - top) * fy;
}

// out(x, y) = src(map(x, y)), where `map` takes output pixel coordinates to
// source pixel coordinates.
inline FrameRGB warp(const FrameRGB& src, const Homography& map, int width, int height) {
  FrameRGB out(width, height);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const Point2 s = apply(map, {static_cast<double>(c), static_cast<double>(r)});
      for (int ch = 0; ch < 3; ++ch) out.channel(ch)(r, c) = sample_bilinear(src.channel(ch), s.x, s.y);
    }
  return out;
}

}  // namespace vwm
