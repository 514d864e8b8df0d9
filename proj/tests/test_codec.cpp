#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "vwm/codec.hpp"
#include "vwm/metrics.hpp"

using namespace vwm;

namespace {

WatermarkPayload random_payload(std::size_t n, std::mt19937_64& rng) {
  std::vector<int> s(n * n);
  for (int& v : s) v = (rng() & 1) ? 1 : -1;
  return WatermarkPayload(std::move(s));
}

const VideoClip& textured_clip() {
  static const VideoClip clip = test::corpus_clip(5, 10);
  return clip;
}

// Blue/green band sums of LL block b in one frame.
std::pair<double, double> band_sums(const FrameRGB& f, BlockCoord b, int k) {
  const Plane bl = haar_ll(f.b), gl = haar_ll(f.g);
  return {band_sum<8>(dct2<8>(load_block<8>(bl, b.by * 8, b.bx * 8)), k),
          band_sum<8>(dct2<8>(load_block<8>(gl, b.by * 8, b.bx * 8)), k)};
}

// Mismatches over covered bits only, plus how many were compared.
std::pair<std::size_t, std::size_t> covered_errors(const ExtractResult& r, const WatermarkPayload& p) {
  std::size_t errors = 0, covered = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (r.uncovered[i]) continue;
    ++covered;
    if (r.payload[i] != p[i]) ++errors;
  }
  return {errors, covered};
}

bool region_clamped(const Plane& p, BlockCoord b) {
  for (int r = b.by * 16; r < b.by * 16 + 16; ++r)
    for (int c = b.bx * 16; c < b.bx * 16 + 16; ++c)
      if (p(r, c) <= 0.0 || p(r, c) >= 255.0) return true;
  return false;
}

}  // namespace

TEST(Payload, ParsingAndValidation) {
  const auto p = WatermarkPayload::from_bits("1010\n0101 1111 0000\n");
  EXPECT_EQ(p.size(), 16u);
  EXPECT_EQ(p.side(), 4);
  EXPECT_EQ(p[0], 1);
  EXPECT_EQ(p[1], -1);
  EXPECT_EQ(p.to_bits(), "1010010111110000");
  EXPECT_THROW(WatermarkPayload::from_bits("101010101010101"), std::invalid_argument);
  EXPECT_THROW(WatermarkPayload::from_bits("1"), std::invalid_argument);
  EXPECT_THROW(WatermarkPayload::from_bits("1012"), std::invalid_argument);
  EXPECT_THROW(WatermarkPayload({1, 0, 1, 1}), std::invalid_argument);
  EXPECT_EQ(square_side(15), -1);
  EXPECT_EQ(square_side(16), 4);
}

TEST(Arnold, ZeroIterationsIsIdentity) {
  std::mt19937_64 rng(31);
  const auto p = random_payload(5, rng);
  EXPECT_EQ(arnold_scramble(p, {0}), p);
}

TEST(Arnold, TwoByTwoHasPeriodThree) {
  // (x, y) -> (x + y, x + 2y) mod 2 on index y * 2 + x:
  // (0,0) fixed; (1,0) -> (1,1) -> (0,1) -> (1,0).
  const std::vector<std::size_t> one_step{0, 3, 1, 2};
  EXPECT_EQ(detail::arnold_step(2), one_step);
  EXPECT_EQ(arnold_period(2), 3u);
  const WatermarkPayload p({1, 1, -1, -1});
  EXPECT_EQ(arnold_scramble(p, {3}), p);
  EXPECT_NE(arnold_scramble(p, {1}), p);
  EXPECT_EQ(arnold_scramble(p, {1}), arnold_scramble(p, {4}));
}

TEST(Arnold, DescrambleInvertsScramble) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng() % 15;
    const ArnoldKey key{rng() % 5000};
    const auto p = random_payload(n, rng);
    const auto s = arnold_scramble(p, key);
    ASSERT_EQ(arnold_descramble(s, key), p);
    auto sorted = s.symbols(), orig = p.symbols();
    std::sort(sorted.begin(), sorted.end());
    std::sort(orig.begin(), orig.end());
    ASSERT_EQ(sorted, orig);
  }
}

TEST(Embed, TargetArithmetic) {
  bool mod = false;
  EXPECT_DOUBLE_EQ(target_band_sum(3, 10, +1, 12, &mod), 22.0);
  EXPECT_TRUE(mod);
  EXPECT_DOUBLE_EQ(22.0 / band_size(8, 5), 22.0 / 6);
  EXPECT_DOUBLE_EQ(target_band_sum(15, 10, +1, 12, &mod), 15.0);
  EXPECT_FALSE(mod);
  EXPECT_DOUBLE_EQ(target_band_sum(15, 10, -1, 12, &mod), -2.0);
  EXPECT_TRUE(mod);
  EXPECT_DOUBLE_EQ(target_band_sum(3, 10, -1, 12, &mod), 3.0);
  EXPECT_FALSE(mod);
  EXPECT_DOUBLE_EQ(target_band_sum(10, 10, +1, 12, &mod), 22.0);
  EXPECT_DOUBLE_EQ(target_band_sum(10, 10, -1, 12, &mod), -2.0);
  EXPECT_TRUE(mod);
}

TEST(Embed, BandEqualizedAndDifferenceIsP) {
  const VideoClip& src = textured_clip();
  EmbedParams params;
  params.p = 12.0;
  std::mt19937_64 rng(33);
  const auto payload = random_payload(4, rng);
  const auto scrambled = arnold_scramble(payload, {7});
  std::vector<FrameRGB> frames(src.frames.begin(), src.frames.begin() + 5);
  const std::vector<FrameRGB> before = frames;
  const auto stats = embed_group(frames, scrambled, params);
  ASSERT_FALSE(stats.mask.empty());
  ASSERT_GT(stats.modified_blocks, 0u);

  std::size_t checked = 0, untouched = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    EXPECT_EQ(frames[f].g, before[f].g);
    EXPECT_EQ(frames[f].r, before[f].r);
    const Plane ll = haar_ll(frames[f].b);
    for (std::size_t rank = 0; rank < stats.mask.size(); ++rank) {
      const BlockCoord b = stats.mask.blocks[rank];
      const int bit = scrambled[bit_index(stats.mask, rank, scrambled.size(), params.mapping)];
      const auto [cb0, cg0] = band_sums(before[f], b, 5);
      const bool needs_change = bit > 0 ? cb0 - cg0 <= 0 : cb0 - cg0 >= 0;
      if (region_clamped(frames[f].b, b)) continue;
      const auto [cb, cg] = band_sums(frames[f], b, 5);
      if (needs_change) {
        ASSERT_NEAR(cb - cg, bit * params.p, 1e-9);
        const Block8 c = dct2<8>(load_block<8>(ll, b.by * 8, b.bx * 8));
        for (auto [u, v] : band_indices(8, 5)) ASSERT_NEAR(c[u * 8 + v], cb / 6.0, 1e-9);
        ++checked;
      } else {
        ASSERT_NEAR(cb, cb0, 1e-9);
        ASSERT_EQ(bit > 0, cb > cg);
        ++untouched;
      }
    }
  }
  EXPECT_GT(checked, 0u);
  EXPECT_GT(untouched, 0u);
}

TEST(Embed, GreenImmutableAndMaskStable) {
  const VideoClip& src = textured_clip();
  std::mt19937_64 rng(34);
  VideoClip wm = src;
  const EmbedParams params;
  const auto report = embed_clip(wm, random_payload(4, rng), {3}, params);
  for (std::size_t i = 0; i < src.size(); ++i) ASSERT_EQ(wm.frames[i].g, src.frames[i].g);
  const ExtractResult r = extract(wm, 16, {3}, params);
  ASSERT_EQ(r.masks.size(), report.masks.size());
  for (std::size_t g = 0; g < r.masks.size(); ++g) EXPECT_EQ(r.masks[g], report.masks[g]) << "group " << g;
}

TEST(Extract, RoundTripAtFloatPrecision) {
  const VideoClip& src = textured_clip();
  std::mt19937_64 rng(35);
  for (BitMapping mapping : {BitMapping::Position, BitMapping::Rank}) {
    EmbedParams params;
    params.mapping = mapping;
    const auto payload = random_payload(4, rng);
    VideoClip wm = src;
    embed_clip(wm, payload, {11}, params);
    const ExtractResult r = extract(wm, 16, {11}, params);
    // Two groups select fewer blocks than there are bits, so some stay uncovered.
    const auto [errors, covered] = covered_errors(r, payload);
    EXPECT_GT(covered, 4u);
    EXPECT_EQ(errors, 0u);
    for (std::size_t i = 0; i < payload.size(); ++i)
      if (!r.uncovered[i]) EXPECT_DOUBLE_EQ(r.confidence[i], 1.0);

    const auto small = random_payload(2, rng);
    VideoClip wm2 = src;
    embed_clip(wm2, small, {11}, params);
    const ExtractResult r2 = extract(wm2, 4, {11}, params);
    EXPECT_EQ(r2.uncovered_count(), 0u);
    EXPECT_EQ(r2.payload, small);

    // Embedding twice reads back the same.
    VideoClip twice = wm;
    embed_clip(twice, payload, {11}, params);
    EXPECT_EQ(extract(twice, 16, {11}, params).payload, r.payload);
  }
}

TEST(Extract, WrongKeyGivesChanceBer) {
  const VideoClip& src = textured_clip();
  std::mt19937_64 rng(36);
  const EmbedParams params;
  const ArnoldKey key{1};
  const std::uint64_t period = arnold_period(4);
  double total = 0.0;
  int trials = 0;
  for (int i = 0; i < 4; ++i) {
    const auto payload = random_payload(4, rng);
    VideoClip wm = src;
    embed_clip(wm, payload, key, params);
    ASSERT_EQ(covered_errors(extract(wm, 16, key, params), payload).first, 0u);
    for (std::uint64_t t = 0; t < period; ++t) {
      if (t % period == key.iterations % period) continue;
      const auto [errors, covered] = covered_errors(extract(wm, 16, {t + 10 * period}, params), payload);
      total += static_cast<double>(errors) / static_cast<double>(covered);
      ++trials;
    }
  }
  const double mean = total / trials;
  EXPECT_GT(mean, 0.3);
  EXPECT_LT(mean, 0.7);
}

TEST(Extract, UniformClipIsUncovered) {
  const VideoClip gray = test::constant_clip(128, 128, 6, 128.0);
  VideoClip wm = gray;
  const auto report = embed_clip(wm, WatermarkPayload::from_bits("1111"), {0}, EmbedParams{});
  EXPECT_EQ(report.empty_groups(), report.masks.size());
  EXPECT_EQ(report.masks.size(), 2u);
  EXPECT_EQ(wm.frames, gray.frames);
  const ExtractResult r = extract(gray, 4, {0}, EmbedParams{});
  EXPECT_EQ(r.uncovered_count(), 4u);
  for (int s : r.payload.symbols()) EXPECT_EQ(s, -1);
  EXPECT_THROW(extract(gray, 5, {0}, EmbedParams{}), std::invalid_argument);
}

TEST(Extract, ShortClipUsesPartialGroup) {
  const VideoClip& src = textured_clip();
  VideoClip three{{src.frames.begin(), src.frames.begin() + 3}, src.width, src.height, src.fps};
  std::mt19937_64 rng(37);
  const auto payload = random_payload(2, rng);
  const auto report = embed_clip(three, payload, {2}, EmbedParams{});
  ASSERT_EQ(report.masks.size(), 1u);
  const auto r = extract(three, 4, {2}, EmbedParams{});
  EXPECT_EQ(r.masks.size(), 1u);
  EXPECT_EQ(r.payload, payload);
}

TEST(Detect, SignRuleAndTie) {
  const FrameRGB zero(64, 64, 0.0);
  EXPECT_EQ(detect_block(zero, {1, 1}, 5), -1);

  const FrameRGB base(64, 64, 100.0);
  for (int bit : {+1, -1}) {
    std::vector<FrameRGB> frames{base};
    Subbands s = haar_dwt(frames[0].b);
    Block8 c = dct2<8>(load_block<8>(s.ll, 8, 8));
    const double cg = band_sum<8>(dct2<8>(load_block<8>(haar_ll(base.g), 8, 8)), 5);
    set_band<8>(c, 5, target_band_sum(band_sum<8>(c, 5), cg, bit, 12.0) / 6.0);
    store_block<8>(s.ll, 8, 8, idct2<8>(c));
    frames[0].b = haar_idwt(s);
    EXPECT_EQ(detect_block(frames[0], {1, 1}, 5), bit);
    EXPECT_EQ(detect_block(base, {2, 2}, 5), -1);
  }
}

TEST(Votes, MajorityAndConfidence) {
  VoteTally t(4);
  t.add(2, +1);
  t.add(2, +1);
  t.add(2, -1);
  EXPECT_EQ(t.symbol(2), 1);
  EXPECT_DOUBLE_EQ(t.confidence(2), 1.0 / 3.0);
  t.add(1, +1);
  t.add(1, -1);
  EXPECT_EQ(t.symbol(1), -1);
  EXPECT_FALSE(t.covered(0));
  EXPECT_EQ(t.symbol(0), -1);
}

TEST(Votes, MergeOrderIndependent) {
  std::mt19937_64 rng(39);
  std::vector<VoteTally> parts;
  for (int g = 0; g < 12; ++g) {
    VoteTally t(16);
    for (int v = 0; v < 40; ++v) t.add(rng() % 16, (rng() & 1) ? 1 : -1);
    parts.push_back(t);
  }
  VoteTally ref(16);
  for (const auto& p : parts) ref.merge(p);
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(parts.begin(), parts.end(), rng);
    VoteTally t(16);
    for (const auto& p : parts) t.merge(p);
    ASSERT_EQ(t.sum, ref.sum);
    ASSERT_EQ(t.count, ref.count);
  }
}

TEST(GroupAverage, Examples) {
  std::mt19937_64 rng(40);
  const FrameRGB a = test::random_frame(16, 16, rng);
  const std::vector<FrameRGB> same(5, a);
  const FrameRGB avg = compute_group_average(same);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.g.size(); ++i)
      ASSERT_NEAR(avg.channel(c).samples()[i], a.channel(c).samples()[i], 1e-12);

  const std::vector<FrameRGB> bw{FrameRGB(4, 4, 0.0), FrameRGB(4, 4, 255.0)};
  const FrameRGB mid = compute_group_average(bw);
  for (double v : mid.b.samples()) EXPECT_DOUBLE_EQ(v, 127.5);

  const FrameRGB b = test::random_frame(16, 16, rng, 0, 200);
  FrameRGB a2 = test::random_frame(16, 16, rng, 0, 200), b2 = b;
  const FrameRGB plain = compute_group_average(std::vector<FrameRGB>{a2, b});
  for (auto* f : {&a2, &b2})
    for (int c = 0; c < 3; ++c)
      for (double& v : f->channel(c).samples()) v += 40.0;
  const FrameRGB shifted = compute_group_average(std::vector<FrameRGB>{a2, b2});
  for (std::size_t i = 0; i < plain.r.size(); ++i)
    ASSERT_NEAR(shifted.r.samples()[i], plain.r.samples()[i] + 40.0, 1e-12);
}

TEST(Params, Validation) {
  EmbedParams p;
  p.p = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.band_k = 14;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.k_frames = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}
