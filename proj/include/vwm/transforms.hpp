#pragma once

// Orthonormal 2-D DCT-II, one-level orthonormal Haar DWT and anti-diagonal
// frequency bands of an N x N coefficient block.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vwm/image.hpp"

namespace vwm {

// Row-major N x N block; entry (u, v) is at u * N + v.
template <int N>
using Block = std::array<double, N * N>;

using Block8 = Block<8>;
using Block4 = Block<4>;

template <int N>
const Block<N>& dct_basis() {
  static const Block<N> basis = [] {
    Block<N> c{};
    for (int k = 0; k < N; ++k) {
      const double alpha = k == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
      for (int n = 0; n < N; ++n)
        c[k * N + n] = alpha * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * N));
    }
    return c;
  }();
  return basis;
}

// X = C x C^T, separable row/column pass.
template <int N>
Block<N> dct2(const Block<N>& x) {
  const auto& c = dct_basis<N>();
  Block<N> tmp{}, out{};
  for (int u = 0; u < N; ++u)
    for (int col = 0; col < N; ++col) {
      double s = 0.0;
      for (int row = 0; row < N; ++row) s += c[u * N + row] * x[row * N + col];
      tmp[u * N + col] = s;
    }
  for (int u = 0; u < N; ++u)
    for (int v = 0; v < N; ++v) {
      double s = 0.0;
      for (int col = 0; col < N; ++col) s += tmp[u * N + col] * c[v * N + col];
      out[u * N + v] = s;
    }
  return out;
}

// x = C^T X C.
template <int N>
Block<N> idct2(const Block<N>& coeffs) {
  const auto& c = dct_basis<N>();
  Block<N> tmp{}, out{};
  for (int row = 0; row < N; ++row)
    for (int v = 0; v < N; ++v) {
      double s = 0.0;
      for (int u = 0; u < N; ++u) s += c[u * N + row] * coeffs[u * N + v];
      tmp[row * N + v] = s;
    }
  for (int row = 0; row < N; ++row)
    for (int col = 0; col < N; ++col) {
      double s = 0.0;
      for (int v = 0; v < N; ++v) s += tmp[row * N + v] * c[v * N + col];
      out[row * N + col] = s;
    }
  return out;
}

template <int N>
Block<N> load_block(const Plane& p, int top, int left) {
  Block<N> b{};
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) b[r * N + c] = p(top + r, left + c);
  return b;
}

template <int N>
void store_block(Plane& p, int top, int left, const Block<N>& b) {
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) p(top + r, left + c) = b[r * N + c];
}

struct Subbands {
  Plane ll;  // (a + b + c + d) / 2
  Plane lh;  // horizontal differences: (a - b + c - d) / 2
  Plane hl;  // vertical differences:   (a + b - c - d) / 2
  Plane hh;  // diagonal:               (a - b - c + d) / 2
};

// One-level orthonormal Haar over 2x2 cells [a b; c d].
inline Subbands haar_dwt(const Plane& p) {
  if (p.width() % 2 != 0 || p.height() % 2 != 0)
    throw std::invalid_argument("haar_dwt requires even plane dimensions");
  const int w = p.width() / 2, h = p.height() / 2;
  Subbands s{Plane(w, h), Plane(w, h), Plane(w, h), Plane(w, h)};
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double a = p(2 * r, 2 * c), b = p(2 * r, 2 * c + 1);
      const double cc = p(2 * r + 1, 2 * c), d = p(2 * r + 1, 2 * c + 1);
      s.ll(r, c) = (a + b + cc + d) * 0.5;
      s.lh(r, c) = (a - b + cc - d) * 0.5;
      s.hl(r, c) = (a + b - cc - d) * 0.5;
      s.hh(r, c) = (a - b - cc + d) * 0.5;
    }
  return s;
}

inline Plane haar_idwt(const Subbands& s) {
  if (!s.ll.same_shape(s.lh) || !s.ll.same_shape(s.hl) || !s.ll.same_shape(s.hh))
    throw std::invalid_argument("haar_idwt subbands differ in shape");
  Plane p(s.ll.width() * 2, s.ll.height() * 2);
  for (int r = 0; r < s.ll.height(); ++r)
    for (int c = 0; c < s.ll.width(); ++c) {
      const double ll = s.ll(r, c), lh = s.lh(r, c), hl = s.hl(r, c), hh = s.hh(r, c);
      p(2 * r, 2 * c) = (ll + lh + hl + hh) * 0.5;
      p(2 * r, 2 * c + 1) = (ll - lh + hl - hh) * 0.5;
      p(2 * r + 1, 2 * c) = (ll + lh - hl - hh) * 0.5;
      p(2 * r + 1, 2 * c + 1) = (ll - lh - hl + hh) * 0.5;
    }
  return p;
}

// LL subband only; same values as haar_dwt(p).ll.
inline Plane haar_ll(const Plane& p) {
  if (p.width() % 2 != 0 || p.height() % 2 != 0)
    throw std::invalid_argument("haar_dwt requires even plane dimensions");
  Plane ll(p.width() / 2, p.height() / 2);
  for (int r = 0; r < ll.height(); ++r)
    for (int c = 0; c < ll.width(); ++c)
      ll(r, c) = (p(2 * r, 2 * c) + p(2 * r, 2 * c + 1) + p(2 * r + 1, 2 * c) +
                  p(2 * r + 1, 2 * c + 1)) * 0.5;
  return ll;
}

// Coefficients (u, v) with u + v == k, in row-major order.
inline std::vector<std::pair<int, int>> band_indices(int n, int k) {
  if (n <= 0 || k < 0 || k > 2 * (n - 1)) throw std::invalid_argument("band index out of range");
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n; ++u) {
    const int v = k - u;
    if (v >= 0 && v < n) out.emplace_back(u, v);
  }
  return out;
}

inline int band_size(int n, int k) { return static_cast<int>(band_indices(n, k).size()); }

template <int N>
double band_sum(const Block<N>& coeffs, int k) {
  double s = 0.0;
  for (auto [u, v] : band_indices(N, k)) s += coeffs[u * N + v];
  return s;
}

template <int N>
void set_band(Block<N>& coeffs, int k, double value) {
  for (auto [u, v] : band_indices(N, k)) coeffs[u * N + v] = value;
}

}  // namespace vwm
