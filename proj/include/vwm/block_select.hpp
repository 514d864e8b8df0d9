#pragma once

// Embedding-block selection on the LL subband grid of 8x8 blocks: texture
// score (coefficient count and magnitude of the four 4x4 sub-block DCTs)
// intersected with blocks hit by clustered keypoints, limited to the
// central part of the frame.

#include <algorithm>
#include <cmath>
#include <compare>
#include <iterator>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include "vwm/image.hpp"
#include "vwm/keypoints.hpp"
#include "vwm/transforms.hpp"

namespace vwm {

inline constexpr int kBlockSize = 8;
// |c| above this counts as a nonzero DCT coefficient.
inline constexpr double kZeroEps = 1e-6;

enum class SelectionMode { Combined, TextureOnly, KeypointOnly };

struct SelectionConfig {
  double theta = 0.6;
  double cluster_radius = 4.0 * std::numbers::sqrt2;
  double central_ratio = 0.6;
  DetectorConfig detector;
  SelectionMode mode = SelectionMode::Combined;

  void validate() const {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must be in (0, 1)");
    if (!(cluster_radius > 0.0)) throw std::invalid_argument("cluster radius must be positive");
    if (!(central_ratio > 0.0 && central_ratio <= 1.0))
      throw std::invalid_argument("central ratio must be in (0, 1]");
  }
};

struct BlockCoord {
  int bx = 0;
  int by = 0;

  // raster order: row first
  friend auto operator<=>(const BlockCoord& a, const BlockCoord& b) {
    if (auto c = a.by <=> b.by; c != 0) return c;
    return a.bx <=> b.bx;
  }
  friend bool operator==(const BlockCoord&, const BlockCoord&) = default;
};

struct BlockScore {
  BlockCoord pos;
  int rf = 0;
  double ef = 0.0;
  double raw = 0.0;
  double s = 0.0;
};

struct TextureGrid {
  int grid_w = 0;
  int grid_h = 0;
  std::vector<BlockScore> scores;  // raster order

  const BlockScore& at(int bx, int by) const {
    return scores[static_cast<std::size_t>(by) * grid_w + bx];
  }
};

struct SelectionMask {
  std::vector<BlockCoord> blocks;  // raster order, distinct
  int group = 0;
  int grid_w = 0;
  int grid_h = 0;

  std::size_t size() const { return blocks.size(); }
  bool empty() const { return blocks.empty(); }
  friend bool operator==(const SelectionMask&, const SelectionMask&) = default;
};

namespace detail {

template <typename F>
void for_each_subblock_coeff(const Block8& block, F&& f) {
  for (int sr = 0; sr < 8; sr += 4)
    for (int sc = 0; sc < 8; sc += 4) {
      Block4 sub{};
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) sub[r * 4 + c] = block[(sr + r) * 8 + sc + c];
      for (double coeff : dct2<4>(sub)) f(coeff);
    }
}

}  // namespace detail

// Number of nonzero coefficients across the four 4x4 sub-block DCTs (<= 64).
inline int texture_rf(const Block8& block) {
  int n = 0;
  detail::for_each_subblock_coeff(block, [&](double c) { n += std::abs(c) > kZeroEps; });
  return n;
}

// Sum of coefficient magnitudes across the four 4x4 sub-block DCTs.
inline double texture_ef(const Block8& block) {
  double s = 0.0;
  detail::for_each_subblock_coeff(block, [&](double c) { s += std::abs(c); });
  return s;
}

inline double texture_raw(int rf, double ef) { return ef + rf + ef * rf; }

// Whether LL-grid block (bx, by) lies entirely inside the centered window
// covering `ratio` of the LL width and height.
inline bool block_in_center(BlockCoord b, int ll_width, int ll_height, double ratio) {
  const double x0 = (1.0 - ratio) / 2.0 * ll_width, x1 = x0 + ratio * ll_width;
  const double y0 = (1.0 - ratio) / 2.0 * ll_height, y1 = y0 + ratio * ll_height;
  return b.bx * kBlockSize >= x0 && (b.bx + 1) * kBlockSize <= x1 &&
         b.by * kBlockSize >= y0 && (b.by + 1) * kBlockSize <= y1;
}

// Min-max normalized texture scores over every complete 8x8 block of `ll`.
// Normalization ranges over the blocks inside the centered window of
// `central_ratio` (1.0 = whole frame); blocks outside it score 0. A domain
// whose blocks all share one raw value gets s = 0 everywhere.
inline TextureGrid texture_scores(const Plane& ll, double central_ratio = 1.0) {
  TextureGrid grid{ll.width() / kBlockSize, ll.height() / kBlockSize, {}};
  grid.scores.reserve(static_cast<std::size_t>(grid.grid_w) * grid.grid_h);
  double min = 0.0, max = 0.0;
  bool any = false;
  for (int by = 0; by < grid.grid_h; ++by)
    for (int bx = 0; bx < grid.grid_w; ++bx) {
      const Block8 block = load_block<8>(ll, by * kBlockSize, bx * kBlockSize);
      BlockScore bs{{bx, by}, 0, 0.0, 0.0, 0.0};
      detail::for_each_subblock_coeff(block, [&](double c) {
        bs.rf += std::abs(c) > kZeroEps;
        bs.ef += std::abs(c);
      });
      bs.raw = texture_raw(bs.rf, bs.ef);
      if (block_in_center(bs.pos, ll.width(), ll.height(), central_ratio)) {
        min = any ? std::min(min, bs.raw) : bs.raw;
        max = any ? std::max(max, bs.raw) : bs.raw;
        any = true;
      }
      grid.scores.push_back(bs);
    }
  const double range = max - min;
  for (auto& bs : grid.scores)
    if (range > 0.0 && block_in_center(bs.pos, ll.width(), ll.height(), central_ratio))
      bs.s = (bs.raw - min) / range;
  return grid;
}

// LL-grid block containing a full-resolution point (the DWT halves coordinates).
inline BlockCoord keypoint_block(double x, double y) {
  return {static_cast<int>(std::floor(x / 2.0)) / kBlockSize,
          static_cast<int>(std::floor(y / 2.0)) / kBlockSize};
}

inline SelectionMask select_blocks(const Plane& green, const SelectionConfig& cfg, int group = 0) {
  cfg.validate();
  const Plane ll = haar_ll(green);
  SelectionMask mask{{}, group, ll.width() / kBlockSize, ll.height() / kBlockSize};

  std::set<BlockCoord> texture;
  if (cfg.mode != SelectionMode::KeypointOnly) {
    for (const auto& bs : texture_scores(ll, cfg.central_ratio).scores)
      if (bs.s >= cfg.theta) texture.insert(bs.pos);
  }

  std::set<BlockCoord> keyed;
  if (cfg.mode != SelectionMode::TextureOnly) {
    for (const auto& kp : cluster_keypoints(detect_keypoints(green, cfg.detector), cfg.cluster_radius)) {
      const BlockCoord b = keypoint_block(kp.x, kp.y);
      if (b.bx >= 0 && b.by >= 0 && b.bx < mask.grid_w && b.by < mask.grid_h) keyed.insert(b);
    }
  }

  const std::set<BlockCoord>* candidates = &texture;
  std::set<BlockCoord> both;
  switch (cfg.mode) {
    case SelectionMode::Combined:
      std::set_intersection(texture.begin(), texture.end(), keyed.begin(), keyed.end(),
                            std::inserter(both, both.end()));
      candidates = &both;
      break;
    case SelectionMode::TextureOnly: candidates = &texture; break;
    case SelectionMode::KeypointOnly: candidates = &keyed; break;
  }
  for (const auto& b : *candidates)
    if (block_in_center(b, ll.width(), ll.height(), cfg.central_ratio)) mask.blocks.push_back(b);
  return mask;
}

}  // namespace vwm
