#pragma once

// Channel-referenced band-sum watermarking. Each selected LL-subband block of
// the blue plane carries one symbol through the sign of
// band_sum(blue) - band_sum(green); green is never modified, so the block
// selection (computed on green) is reproducible at extraction time.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vwm/arnold.hpp"
#include "vwm/block_select.hpp"
#include "vwm/image.hpp"
#include "vwm/payload.hpp"
#include "vwm/transforms.hpp"

namespace vwm {

// How the r-th selected block of a group is assigned a payload index.
enum class BitMapping {
  Position,  // (by * grid_w + bx) mod L
  Rank,      // r mod L, r = raster rank inside the mask
};

struct EmbedParams {
  double p = 40.0;
  int band_k = 5;
  int k_frames = 5;
  SelectionConfig selection;
  BitMapping mapping = BitMapping::Position;

  void validate() const {
    if (!(p > 0.0)) throw std::invalid_argument("embedding strength p must be positive");
    if (band_k < 1 || band_k > 13) throw std::invalid_argument("band_k must be in [1, 13]");
    if (k_frames < 1) throw std::invalid_argument("frames per group must be >= 1");
    selection.validate();
  }
};

inline std::size_t bit_index(const SelectionMask& mask, std::size_t rank, std::size_t length,
                             BitMapping mapping) {
  if (mapping == BitMapping::Rank) return rank % length;
  const BlockCoord b = mask.blocks[rank];
  return (static_cast<std::size_t>(b.by) * mask.grid_w + b.bx) % length;
}

inline FrameRGB compute_group_average(std::span<const FrameRGB> frames) {
  if (frames.empty()) throw std::invalid_argument("cannot average an empty frame group");
  FrameRGB avg(frames[0].width(), frames[0].height());
  for (const auto& f : frames) {
    if (f.width() != avg.width() || f.height() != avg.height())
      throw std::invalid_argument("frames in a group must share dimensions");
    for (int c = 0; c < 3; ++c) {
      auto dst = avg.channel(c).samples();
      auto src = f.channel(c).samples();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(frames.size());
  for (int c = 0; c < 3; ++c)
    for (double& v : avg.channel(c).samples()) v *= inv;
  return avg;
}

// New blue band sum for symbol w, or the unchanged sum when the sign relation
// already holds (+1 needs cB > cG, -1 needs cB < cG).
inline double target_band_sum(double cb, double cg, int symbol, double p, bool* modified = nullptr) {
  const double d = cb - cg;
  bool change = symbol > 0 ? d <= 0.0 : d >= 0.0;
  if (modified) *modified = change;
  if (!change) return cb;
  return symbol > 0 ? cb + (-d + p) : cb + (-d - p);
}

struct GroupEmbedStats {
  SelectionMask mask;
  std::size_t modified_blocks = 0;  // summed over the group's frames
};

// Embeds `scrambled` into every frame of one group, in place.
inline GroupEmbedStats embed_group(std::span<FrameRGB> frames, const WatermarkPayload& scrambled,
                                   const EmbedParams& params, int group = 0) {
  params.validate();
  GroupEmbedStats stats;
  const FrameRGB avg = compute_group_average(frames);
  stats.mask = select_blocks(avg.g, params.selection, group);
  if (stats.mask.empty()) return stats;

  const double members = band_size(8, params.band_k);
  for (FrameRGB& frame : frames) {
    Subbands blue = haar_dwt(frame.b);
    const Plane green_ll = haar_ll(frame.g);
    bool touched = false;
    for (std::size_t rank = 0; rank < stats.mask.size(); ++rank) {
      const BlockCoord b = stats.mask.blocks[rank];
      const int symbol = scrambled[bit_index(stats.mask, rank, scrambled.size(), params.mapping)];
      const int top = b.by * kBlockSize, left = b.bx * kBlockSize;
      Block8 cb_block = dct2<8>(load_block<8>(blue.ll, top, left));
      const Block8 cg_block = dct2<8>(load_block<8>(green_ll, top, left));
      bool modified = false;
      const double target = target_band_sum(band_sum<8>(cb_block, params.band_k),
                                            band_sum<8>(cg_block, params.band_k), symbol, params.p,
                                            &modified);
      if (!modified) continue;
      set_band<8>(cb_block, params.band_k, target / members);
      store_block<8>(blue.ll, top, left, idct2<8>(cb_block));
      ++stats.modified_blocks;
      touched = true;
    }
    if (touched) {
      frame.b = haar_idwt(blue);
      clamp_inplace(frame.b);
    }
  }
  return stats;
}

struct EmbedReport {
  std::vector<SelectionMask> masks;  // one per group
  std::size_t modified_blocks = 0;

  std::size_t empty_groups() const {
    return static_cast<std::size_t>(
        std::count_if(masks.begin(), masks.end(), [](const auto& m) { return m.empty(); }));
  }
};

inline EmbedReport embed_clip(VideoClip& clip, const WatermarkPayload& payload, ArnoldKey key,
                              const EmbedParams& params) {
  params.validate();
  const WatermarkPayload scrambled = arnold_scramble(payload, key);
  EmbedReport report;
  const std::size_t k = static_cast<std::size_t>(params.k_frames);
  int group = 0;
  for (std::size_t start = 0; start < clip.size(); start += k, ++group) {
    const std::size_t len = std::min(k, clip.size() - start);
    auto stats = embed_group(std::span<FrameRGB>(clip.frames).subspan(start, len), scrambled,
                             params, group);
    report.modified_blocks += stats.modified_blocks;
    report.masks.push_back(std::move(stats.mask));
  }
  return report;
}

// +1 iff band_sum(blue) > band_sum(green); ties read as -1.
inline int detect_block(const Plane& blue_ll, const Plane& green_ll, BlockCoord b, int band_k) {
  const int top = b.by * kBlockSize, left = b.bx * kBlockSize;
  if (b.bx < 0 || b.by < 0 || left + kBlockSize > blue_ll.width() || top + kBlockSize > blue_ll.height())
    throw std::out_of_range("block outside the LL grid");
  const double cb = band_sum<8>(dct2<8>(load_block<8>(blue_ll, top, left)), band_k);
  const double cg = band_sum<8>(dct2<8>(load_block<8>(green_ll, top, left)), band_k);
  return cb > cg ? 1 : -1;
}

inline int detect_block(const FrameRGB& avg, BlockCoord b, int band_k) {
  return detect_block(haar_ll(avg.b), haar_ll(avg.g), b, band_k);
}

// Per-index vote sums; merging is order independent.
struct VoteTally {
  std::vector<std::int64_t> sum;
  std::vector<std::int64_t> count;

  explicit VoteTally(std::size_t length = 0) : sum(length, 0), count(length, 0) {}

  void add(std::size_t index, int vote) {
    sum[index] += vote;
    ++count[index];
  }

  VoteTally& merge(const VoteTally& other) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += other.sum[i];
      count[i] += other.count[i];
    }
    return *this;
  }

  int symbol(std::size_t i) const { return sum[i] > 0 ? 1 : -1; }
  double confidence(std::size_t i) const {
    return count[i] == 0 ? 0.0 : static_cast<double>(std::llabs(sum[i])) / static_cast<double>(count[i]);
  }
  bool covered(std::size_t i) const { return count[i] > 0; }
};

struct ExtractResult {
  WatermarkPayload payload;         // descrambled
  std::vector<double> confidence;   // original index order
  std::vector<bool> uncovered;      // original index order
  VoteTally tally;                  // scrambled index order
  std::vector<SelectionMask> masks;

  std::size_t uncovered_count() const {
    return static_cast<std::size_t>(std::count(uncovered.begin(), uncovered.end(), true));
  }
};

inline VoteTally vote_group(std::span<const FrameRGB> frames, std::size_t length,
                            const EmbedParams& params, int group, SelectionMask* mask_out = nullptr) {
  VoteTally tally(length);
  const FrameRGB avg = compute_group_average(frames);
  SelectionMask mask = select_blocks(avg.g, params.selection, group);
  const Plane blue_ll = haar_ll(avg.b), green_ll = haar_ll(avg.g);
  for (std::size_t rank = 0; rank < mask.size(); ++rank)
    tally.add(bit_index(mask, rank, length, params.mapping),
              detect_block(blue_ll, green_ll, mask.blocks[rank], params.band_k));
  if (mask_out) *mask_out = std::move(mask);
  return tally;
}

inline ExtractResult extract(const VideoClip& clip, std::size_t length, ArnoldKey key,
                             const EmbedParams& params) {
  params.validate();
  const int n = square_side(length);
  if (n < 2) throw std::invalid_argument("payload length must be a perfect square >= 4");
  if (clip.empty()) throw std::invalid_argument("no frames");
  if (clip.width % 2 != 0 || clip.height % 2 != 0)
    throw std::invalid_argument("clip dimensions must be even");

  ExtractResult result{{}, {}, {}, VoteTally(length), {}};
  const std::size_t k = static_cast<std::size_t>(params.k_frames);
  int group = 0;
  for (std::size_t start = 0; start < clip.size(); start += k, ++group) {
    const std::size_t len = std::min(k, clip.size() - start);
    SelectionMask mask;
    result.tally.merge(vote_group(std::span<const FrameRGB>(clip.frames).subspan(start, len), length,
                                  params, group, &mask));
    result.masks.push_back(std::move(mask));
  }

  std::vector<int> symbols(length);
  std::vector<double> confidence(length);
  std::vector<bool> uncovered(length);
  for (std::size_t i = 0; i < length; ++i) {
    symbols[i] = result.tally.symbol(i);
    confidence[i] = result.tally.confidence(i);
    uncovered[i] = !result.tally.covered(i);
  }
  result.payload = WatermarkPayload(arnold_descramble(symbols, n, key));
  result.confidence = arnold_descramble(confidence, n, key);
  result.uncovered = arnold_descramble(uncovered, n, key);
  return result;
}

}  // namespace vwm
