#pragma once

// Arnold cat map (x, y) -> (x + y, x + 2y) mod n over the n x n row-major
// arrangement of a payload; the iteration count is the key.

#include <cstdint>
#include <vector>

#include "vwm/payload.hpp"

namespace vwm {

struct ArnoldKey {
  std::uint64_t iterations = 0;
};

namespace detail {

// Index permutation of one forward map step: perm[i] = destination of i.
inline std::vector<std::size_t> arnold_step(int n) {
  std::vector<std::size_t> perm(static_cast<std::size_t>(n) * n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const int nx = (x + y) % n;
      const int ny = (x + 2 * y) % n;
      perm[static_cast<std::size_t>(y) * n + x] = static_cast<std::size_t>(ny) * n + nx;
    }
  return perm;
}

}  // namespace detail

// Smallest t > 0 for which t map steps are the identity on an n x n grid.
inline std::uint64_t arnold_period(int n) {
  const auto step = detail::arnold_step(n);
  std::vector<std::size_t> cur = step;
  std::uint64_t t = 1;
  auto is_identity = [](const std::vector<std::size_t>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != i) return false;
    return true;
  };
  while (!is_identity(cur)) {
    for (auto& v : cur) v = step[v];
    ++t;
  }
  return t;
}

// Position of original index i after `key` map steps: scrambled[perm[i]] = original[i].
inline std::vector<std::size_t> arnold_permutation(int n, ArnoldKey key) {
  const auto step = detail::arnold_step(n);
  const std::uint64_t t = key.iterations % arnold_period(n);
  std::vector<std::size_t> perm(step.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::uint64_t it = 0; it < t; ++it)
    for (auto& v : perm) v = step[v];
  return perm;
}

template <typename T>
std::vector<T> arnold_scramble(const std::vector<T>& values, int n, ArnoldKey key) {
  const auto perm = arnold_permutation(n, key);
  std::vector<T> out(values.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = values[i];
  return out;
}

template <typename T>
std::vector<T> arnold_descramble(const std::vector<T>& values, int n, ArnoldKey key) {
  const auto perm = arnold_permutation(n, key);
  std::vector<T> out(values.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = values[perm[i]];
  return out;
}

inline WatermarkPayload arnold_scramble(const WatermarkPayload& payload, ArnoldKey key) {
  return WatermarkPayload(arnold_scramble(payload.symbols(), payload.side(), key));
}

inline WatermarkPayload arnold_descramble(const WatermarkPayload& payload, ArnoldKey key) {
  return WatermarkPayload(arnold_descramble(payload.symbols(), payload.side(), key));
}

}  // namespace vwm
