#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vwm/attacks.hpp"
#include "vwm/metrics.hpp"

using namespace vwm;

namespace {

const VideoClip& textured() {
  static const VideoClip clip = test::corpus_clip(6, 3);
  return clip;
}

VideoClip smooth_clip(int w, int h, int frames) {
  VideoClip c{{}, w, h, {25, 1}};
  for (int t = 0; t < frames; ++t) {
    FrameRGB f(w, h);
    for (int r = 0; r < h; ++r)
      for (int col = 0; col < w; ++col) {
        f.r(r, col) = 128 + 60 * std::sin(col / 23.0 + t * 0.1) * std::cos(r / 31.0);
        f.g(r, col) = 120 + 50 * std::cos(col / 37.0 - r / 29.0);
        f.b(r, col) = 100 + 40 * std::sin((col + r) / 41.0);
      }
    c.frames.push_back(f);
  }
  return c;
}

VideoClip impulse_clip(int frames, int at) {
  VideoClip c = test::constant_clip(64, 64, frames, 0.0);
  c.frames[at] = FrameRGB(64, 64, 200.0);
  return c;
}

}  // namespace

TEST(Rotate, ZeroDegreesIsIdentity) {
  const auto r = rotate_attack(textured(), 0.0);
  EXPECT_EQ(r.clip.frames, textured().frames);
  EXPECT_TRUE(r.alignment.is_identity());
}

TEST(Rotate, FourDegreesKeepsAllContent) {
  const VideoClip& src = textured();
  const auto r = rotate_attack(src, 4.0);
  ASSERT_TRUE(r.alignment.geometric);
  const Homography fwd = r.alignment.geometric->to_original.inverse();
  const double W = src.width, H = src.height;
  for (Point2 corner : {Point2{-0.5, -0.5}, Point2{W - 0.5, -0.5}, Point2{W - 0.5, H - 0.5}, Point2{-0.5, H - 0.5}}) {
    const Point2 q = apply(fwd, corner);
    EXPECT_GE(q.x, -0.5 - 1e-9);
    EXPECT_LE(q.x, W - 0.5 + 1e-9);
    EXPECT_GE(q.y, -0.5 - 1e-9);
    EXPECT_LE(q.y, H - 0.5 + 1e-9);
  }
  const VideoClip aligned = apply_alignment(r.clip, r.alignment);
  EXPECT_EQ(aligned.width, src.width);
  EXPECT_EQ(aligned.height, src.height);
  const double p = psnr(src, aligned).psnr_mean;
  EXPECT_GT(p, 30.0) << p;
}

TEST(Crop, RetainsCentralRegion) {
  const VideoClip src = test::small_corpus_clip(7, 2, 100, 100);
  const auto r = crop_attack(src, 0.2);
  ASSERT_TRUE(r.alignment.geometric);
  const PixelRect v = *r.alignment.geometric->valid;
  EXPECT_EQ(v.x0, 20);
  EXPECT_EQ(v.y0, 20);
  EXPECT_EQ(v.x1 - v.x0, 60);
  EXPECT_EQ(v.y1 - v.y0, 60);
  EXPECT_EQ(r.clip.width, 100);
  for (std::size_t t = 0; t < src.size(); ++t)
    for (int ch = 0; ch < 3; ++ch)
      for (int row = 0; row < 100; ++row)
        for (int col = 0; col < 100; ++col) {
          const bool inside = row >= 20 && row < 80 && col >= 20 && col < 80;
          ASSERT_EQ(r.clip.frames[t].channel(ch)(row, col), inside ? src.frames[t].channel(ch)(row, col) : 0.0);
        }
  EXPECT_EQ(apply_alignment(r.clip, r.alignment).frames, r.clip.frames);
  EXPECT_EQ(crop_attack(src, 0.0).clip.frames, src.frames);
  EXPECT_THROW(crop_attack(src, 0.5), std::invalid_argument);
}

TEST(Resize, UnitFactorIsIdentity) {
  const auto r = resize_attack(textured(), 1.0);
  EXPECT_EQ(r.clip.frames, textured().frames);
  EXPECT_TRUE(r.alignment.is_identity());
  EXPECT_THROW(resize_attack(textured(), 0.0), std::invalid_argument);
}

TEST(Resize, HalfAndBackOnSmoothContent) {
  const VideoClip src = smooth_clip(352, 288, 2);
  const auto r = resize_attack(src, 0.5);
  EXPECT_EQ(r.clip.width, 176);
  EXPECT_EQ(r.clip.height, 144);
  const VideoClip back = apply_alignment(r.clip, r.alignment);
  EXPECT_EQ(back.width, 352);
  EXPECT_EQ(back.height, 288);
  EXPECT_GT(psnr(src, back).psnr_mean, 28.0);

  const auto up = resize_attack(src, 1.5);
  EXPECT_EQ(up.clip.width, 528);
  EXPECT_GT(psnr(src, apply_alignment(up.clip, up.alignment)).psnr_mean, 40.0);

  const auto aa = resize_attack(src, 0.5, true);
  EXPECT_GT(psnr(src, apply_alignment(aa.clip, aa.alignment)).psnr_mean, 28.0);
}

TEST(Projective, ZeroOffsetsIsIdentity) {
  const auto r = projective_attack(textured(), {});
  EXPECT_EQ(r.clip.frames, textured().frames);
  EXPECT_TRUE(r.alignment.is_identity());
}

TEST(Projective, CornersLandOnTargets) {
  const VideoClip src = smooth_clip(352, 288, 1);
  const ProjectiveAttack spec;
  const auto r = projective_attack(src, spec.offsets);
  const Homography fwd = r.alignment.geometric->to_original.inverse();
  const double w = 351, h = 287;
  const Point2 corners[4] = {{0, 0}, {w, 0}, {w, h}, {0, h}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_LE(std::abs(spec.offsets[i].x), 0.03);
    EXPECT_LE(std::abs(spec.offsets[i].y), 0.03);
    const Point2 q = apply(fwd, corners[i]);
    EXPECT_NEAR(q.x, corners[i].x + spec.offsets[i].x * 352, 1e-6);
    EXPECT_NEAR(q.y, corners[i].y + spec.offsets[i].y * 288, 1e-6);
  }
  // Compare away from the border, which maps partly outside the attacked frame.
  const VideoClip back = apply_alignment(r.clip, r.alignment);
  const PixelRect inner = crop_rect(352, 288, 0.05);
  double se = 0.0;
  int n = 0;
  for (int ch = 0; ch < 3; ++ch)
    for (int row = inner.y0; row < inner.y1; ++row)
      for (int col = inner.x0; col < inner.x1; ++col, ++n) {
        const double d = back.frames[0].channel(ch)(row, col) - src.frames[0].channel(ch)(row, col);
        se += d * d;
      }
  EXPECT_GT(psnr_from_mse(se / n), 35.0);
}

TEST(Tlpf, StaticClipUnchanged) {
  const VideoClip c = test::constant_clip(64, 64, 6, 77.0);
  const VideoClip out = tlpf_attack(c);
  for (const auto& f : out.frames)
    for (double v : f.g.samples()) ASSERT_NEAR(v, 77.0, 1e-12);
}

TEST(Tlpf, ImpulseSpreadsOverFourFrames) {
  const VideoClip out = tlpf_attack(impulse_clip(10, 3));
  ASSERT_EQ(out.size(), 10u);
  for (std::size_t t = 0; t < 10; ++t) {
    const double expected = (t >= 3 && t <= 6) ? 50.0 : 0.0;
    EXPECT_NEAR(out.frames[t].r(5, 5), expected, 1e-12) << t;
  }
  // Window truncated at the start: frame 1 averages frames 0..1.
  const VideoClip early = tlpf_attack(impulse_clip(6, 0));
  EXPECT_NEAR(early.frames[0].r(0, 0), 200.0, 1e-12);
  EXPECT_NEAR(early.frames[1].r(0, 0), 100.0, 1e-12);
  EXPECT_NEAR(early.frames[2].r(0, 0), 200.0 / 3, 1e-12);
}

TEST(Tlpf, LinearInScale) {
  std::mt19937_64 rng(41);
  VideoClip a{{}, 64, 64, {25, 1}};
  for (int i = 0; i < 6; ++i) a.frames.push_back(test::random_frame(64, 64, rng, 0, 100));
  VideoClip b = a;
  for (auto& f : b.frames)
    for (int ch = 0; ch < 3; ++ch)
      for (double& v : f.channel(ch).samples()) v *= 2.5;
  const VideoClip fa = tlpf_attack(a), fb = tlpf_attack(b);
  for (std::size_t t = 0; t < fa.size(); ++t)
    for (std::size_t i = 0; i < fa.frames[t].b.size(); ++i)
      ASSERT_NEAR(fb.frames[t].b.samples()[i], 2.5 * fa.frames[t].b.samples()[i], 1e-9);
}

TEST(Frc, SameRateIsIdentity) {
  const auto r = frc_attack(textured(), {25, 1});
  EXPECT_EQ(r.clip.frames, textured().frames);
  EXPECT_TRUE(r.alignment.is_identity());
}

TEST(Frc, LengthsFollowFloor) {
  EXPECT_EQ(resampled_length(100, {25, 1}, {30, 1}), 120u);
  EXPECT_EQ(resampled_length(100, {25, 1}, {20, 1}), 80u);
  EXPECT_EQ(resampled_length(7, {25, 1}, {30, 1}), 8u);
  EXPECT_EQ(resampled_length(8, {30, 1}, {25, 1}), 6u);
}

TEST(Frc, StaticRoundTrip) {
  VideoClip c = test::constant_clip(64, 64, 25, 90.0);
  const auto r = frc_attack(c, {30, 1});
  EXPECT_EQ(r.clip.size(), 30u);
  EXPECT_EQ(r.clip.fps.num, 30);
  const VideoClip back = apply_alignment(r.clip, r.alignment);
  ASSERT_EQ(back.size(), 25u);
  EXPECT_EQ(back.frames, c.frames);
}

TEST(Frc, RoundTripIndexMapMostlyIdentity) {
  for (Rational mid : {Rational{30, 1}, Rational{20, 1}}) {
    const std::size_t n = 25;
    const std::size_t m = resampled_length(n, {25, 1}, mid);
    const std::size_t back = resampled_length(m, mid, {25, 1});
    ASSERT_EQ(back, n);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < back; ++i) {
      const std::size_t j = nearest_source_index(i, mid, {25, 1}, m);
      const std::size_t k = nearest_source_index(j, {25, 1}, mid, n);
      changed += k != i;
    }
    EXPECT_LE(changed, n / 5);
  }
}

TEST(Frc, RangePreserved) {
  const auto r = frc_attack(textured(), {20, 1});
  for (const auto& f : tlpf_attack(r.clip).frames)
    for (double v : f.b.samples()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 255.0);
    }
}

TEST(Noise, DeterministicAndClamped) {
  const VideoClip a = noise_attack(textured(), 2.0, 5), b = noise_attack(textured(), 2.0, 5);
  EXPECT_EQ(a.frames, b.frames);
  EXPECT_NE(noise_attack(textured(), 2.0, 6).frames, a.frames);
  for (double v : a.frames[0].r.samples()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 255.0);
  }
}

TEST(Chain, AlignmentComposes) {
  const VideoClip src = smooth_clip(352, 288, 5);
  ChainAttack chain;
  chain.steps = {ResizeAttack{0.8}, RotateAttack{3.0}, FrcAttack{{30, 1}}};
  const AttackResult r = apply_attack(src, chain);
  EXPECT_EQ(r.clip.size(), 6u);
  ASSERT_TRUE(r.alignment.geometric);
  ASSERT_TRUE(r.alignment.temporal);
  EXPECT_EQ(r.alignment.geometric->width, 352);
  const VideoClip back = apply_alignment(r.clip, r.alignment);
  ASSERT_EQ(back.size(), 5u);
  EXPECT_EQ(back.width, 352);
  EXPECT_GT(psnr(src, back).psnr_mean, 30.0);
}

TEST(Attacks, Deterministic) {
  const ProjectiveAttack p;
  EXPECT_EQ(apply_attack(textured(), p).clip.frames, apply_attack(textured(), p).clip.frames);
  EXPECT_EQ(apply_attack(textured(), RotateAttack{4}).clip.frames,
            apply_attack(textured(), RotateAttack{4}).clip.frames);
}
