#pragma once

// Signal-processing attacks on clips. Each geometric or temporal attack also
// returns the exact inverse needed to realign the content before extraction.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vwm/codec.hpp"
#include "vwm/geometry.hpp"
#include "vwm/image.hpp"
#include "vwm/keypoints.hpp"

namespace vwm {

struct IdentityAttack {};
struct RotateAttack {
  double deg = 4.0;
};
struct CropAttack {
  double ratio = 0.2;  // per side
};
struct ResizeAttack {
  double factor = 1.5;
  bool antialias = false;
};
// Corner displacements (TL, TR, BR, BL) as fractions of width and height.
struct ProjectiveAttack {
  std::array<Point2, 4> offsets{{{0.03, 0.02}, {-0.02, 0.03}, {-0.01, -0.01}, {0.02, -0.02}}};
};
struct TlpfAttack {
  int window = 4;
};
struct FrcAttack {
  Rational target{30, 1};
};
struct NoiseAttack {
  double sigma = 2.0;
  std::uint64_t seed = 1;
};
struct ChainAttack;

using AttackVariant = std::variant<IdentityAttack, RotateAttack, CropAttack, ResizeAttack,
                                   ProjectiveAttack, TlpfAttack, FrcAttack, NoiseAttack, ChainAttack>;

struct ChainAttack {
  std::vector<AttackVariant> steps;
};

struct AttackSpec {
  std::string name;  // display label
  AttackVariant variant;
};

struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // [x0, x1) x [y0, y1)
};

struct GeometricAlignment {
  Homography to_original = Homography::Identity();  // attacked -> original pixel coords
  int width = 0;                                    // original dimensions
  int height = 0;
  std::optional<PixelRect> valid;                   // retained region, original coords
};

struct TemporalAlignment {
  Rational original_fps;
};

struct AlignmentInfo {
  std::optional<GeometricAlignment> geometric;
  std::optional<TemporalAlignment> temporal;

  bool is_identity() const { return !geometric && !temporal; }
};

struct AttackResult {
  VideoClip clip;
  AlignmentInfo alignment;
};

namespace detail {

inline VideoClip warp_clip(const VideoClip& clip, const Homography& forward, int w, int h) {
  const Homography sample_map = forward.inverse();
  VideoClip out{{}, w, h, clip.fps};
  out.frames.reserve(clip.size());
  for (const auto& f : clip.frames) out.frames.push_back(warp(f, sample_map, w, h));
  return out;
}

inline void add_geometric(AlignmentInfo& info, const VideoClip& before, const Homography& forward) {
  if (info.geometric) {
    info.geometric->to_original = info.geometric->to_original * forward.inverse();
  } else {
    info.geometric = GeometricAlignment{forward.inverse(), before.width, before.height, std::nullopt};
  }
}

inline Plane gaussian_blur(const Plane& p, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) total += k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : k) v /= total;
  Plane tmp(p.width(), p.height()), out(p.width(), p.height());
  for (int r = 0; r < p.height(); ++r)
    for (int c = 0; c < p.width(); ++c) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) s += k[i + radius] * p(r, std::clamp(c + i, 0, p.width() - 1));
      tmp(r, c) = s;
    }
  for (int r = 0; r < p.height(); ++r)
    for (int c = 0; c < p.width(); ++c) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) s += k[i + radius] * tmp(std::clamp(r + i, 0, p.height() - 1), c);
      out(r, c) = s;
    }
  return out;
}

inline int even_round(double v) { return 2 * static_cast<int>(std::lround(v / 2.0)); }

}  // namespace detail

// Source index for output frame i of a nearest-frame rate conversion.
inline std::size_t nearest_source_index(std::size_t i, Rational from, Rational to, std::size_t source_len) {
  // i * (from / to), rounded half up
  const double t = static_cast<double>(i) * from.value() / to.value();
  const auto idx = static_cast<std::size_t>(std::floor(t + 0.5 + 1e-9));
  return std::min(idx, source_len - 1);
}

inline std::size_t resampled_length(std::size_t len, Rational from, Rational to) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(len) * to.value() / from.value() + 1e-9));
}

inline VideoClip resample_frames(const VideoClip& clip, Rational target) {
  if (target.num <= 0 || target.den <= 0) throw std::invalid_argument("target fps must be positive");
  VideoClip out{{}, clip.width, clip.height, target};
  const std::size_t len = resampled_length(clip.size(), clip.fps, target);
  out.frames.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    out.frames.push_back(clip.frames[nearest_source_index(i, clip.fps, target, clip.size())]);
  return out;
}

inline AttackResult rotate_attack(const VideoClip& clip, double deg) {
  const double t = deg * 3.14159265358979323846 / 180.0;
  const double c = std::abs(std::cos(t)), s = std::abs(std::sin(t));
  const double w = clip.width, h = clip.height;
  const double scale = std::min(w / (c * w + s * h), h / (s * w + c * h));
  AttackResult out;
  if (deg == 0.0) {
    out.clip = clip;
    return out;
  }
  const Homography fwd = similarity_about((w - 1) / 2.0, (h - 1) / 2.0, deg, scale);
  out.clip = detail::warp_clip(clip, fwd, clip.width, clip.height);
  detail::add_geometric(out.alignment, clip, fwd);
  return out;
}

inline PixelRect crop_rect(int width, int height, double ratio) {
  const int mx = static_cast<int>(std::lround(ratio * width));
  const int my = static_cast<int>(std::lround(ratio * height));
  return {mx, my, width - mx, height - my};
}

inline AttackResult crop_attack(const VideoClip& clip, double ratio) {
  if (!(ratio >= 0.0 && ratio < 0.5)) throw std::invalid_argument("crop ratio must be in [0, 0.5)");
  const PixelRect keep = crop_rect(clip.width, clip.height, ratio);
  AttackResult out{clip, {}};
  for (auto& f : out.clip.frames)
    for (int ch = 0; ch < 3; ++ch) {
      Plane& p = f.channel(ch);
      for (int r = 0; r < p.height(); ++r)
        for (int c = 0; c < p.width(); ++c)
          if (r < keep.y0 || r >= keep.y1 || c < keep.x0 || c >= keep.x1) p(r, c) = 0.0;
    }
  if (ratio > 0.0) out.alignment.geometric = GeometricAlignment{Homography::Identity(), clip.width, clip.height, keep};
  return out;
}

inline AttackResult resize_attack(const VideoClip& clip, double factor, bool antialias = false) {
  if (!(factor > 0.0)) throw std::invalid_argument("resize factor must be positive");
  const int w2 = detail::even_round(clip.width * factor), h2 = detail::even_round(clip.height * factor);
  if (w2 < 2 || h2 < 2) throw std::invalid_argument("resize factor too small");
  AttackResult out;
  if (w2 == clip.width && h2 == clip.height) {
    out.clip = clip;
    return out;
  }
  const Homography fwd = scale_homography(clip.width, clip.height, w2, h2);
  if (antialias && factor < 1.0) {
    VideoClip blurred = clip;
    for (auto& f : blurred.frames)
      for (int ch = 0; ch < 3; ++ch) f.channel(ch) = detail::gaussian_blur(f.channel(ch), 0.5 / factor);
    out.clip = detail::warp_clip(blurred, fwd, w2, h2);
  } else {
    out.clip = detail::warp_clip(clip, fwd, w2, h2);
  }
  detail::add_geometric(out.alignment, clip, fwd);
  return out;
}

inline AttackResult projective_attack(const VideoClip& clip, const std::array<Point2, 4>& offsets) {
  const double w = clip.width - 1.0, h = clip.height - 1.0;
  const std::array<Point2, 4> src{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  std::array<Point2, 4> dst;
  bool identity = true;
  for (int i = 0; i < 4; ++i) {
    dst[i] = {src[i].x + offsets[i].x * clip.width, src[i].y + offsets[i].y * clip.height};
    identity = identity && offsets[i].x == 0.0 && offsets[i].y == 0.0;
  }
  AttackResult out;
  if (identity) {
    out.clip = clip;
    return out;
  }
  const Homography fwd = homography_from_points(src, dst);
  out.clip = detail::warp_clip(clip, fwd, clip.width, clip.height);
  detail::add_geometric(out.alignment, clip, fwd);
  return out;
}

// frame'_t = mean(frame_{t-window+1 .. t}), window truncated at the start.
inline VideoClip tlpf_attack(const VideoClip& clip, int window = 4) {
  if (window < 1) throw std::invalid_argument("TLPF window must be >= 1");
  VideoClip out{{}, clip.width, clip.height, clip.fps};
  out.frames.reserve(clip.size());
  for (std::size_t t = 0; t < clip.size(); ++t) {
    const std::size_t first = t + 1 >= static_cast<std::size_t>(window) ? t + 1 - window : 0;
    out.frames.push_back(compute_group_average(
        std::span<const FrameRGB>(clip.frames).subspan(first, t - first + 1)));
  }
  return out;
}

inline AttackResult frc_attack(const VideoClip& clip, Rational target) {
  AttackResult out;
  out.clip = resample_frames(clip, target);
  if (!(target == clip.fps)) out.alignment.temporal = TemporalAlignment{clip.fps};
  return out;
}

inline VideoClip noise_attack(const VideoClip& clip, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
  VideoClip out = clip;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& f : out.frames)
    for (int ch = 0; ch < 3; ++ch)
      for (double& v : f.channel(ch).samples()) v = std::clamp(v + noise(rng), 0.0, 255.0);
  return out;
}

namespace detail {

inline void merge_alignment(AlignmentInfo& total, const AlignmentInfo& step, const VideoClip& before) {
  if (step.geometric) {
    if (total.geometric) {
      total.geometric->to_original = total.geometric->to_original * step.geometric->to_original;
    } else {
      total.geometric = GeometricAlignment{step.geometric->to_original, before.width, before.height,
                                           step.geometric->valid};
    }
  }
  if (step.temporal && !total.temporal) total.temporal = TemporalAlignment{before.fps};
}

}  // namespace detail

inline AttackResult apply_attack(const VideoClip& clip, const AttackVariant& attack) {
  struct Visitor {
    const VideoClip& clip;
    AttackResult operator()(const IdentityAttack&) const { return {clip, {}}; }
    AttackResult operator()(const RotateAttack& a) const { return rotate_attack(clip, a.deg); }
    AttackResult operator()(const CropAttack& a) const { return crop_attack(clip, a.ratio); }
    AttackResult operator()(const ResizeAttack& a) const { return resize_attack(clip, a.factor, a.antialias); }
    AttackResult operator()(const ProjectiveAttack& a) const { return projective_attack(clip, a.offsets); }
    AttackResult operator()(const TlpfAttack& a) const { return {tlpf_attack(clip, a.window), {}}; }
    AttackResult operator()(const FrcAttack& a) const { return frc_attack(clip, a.target); }
    AttackResult operator()(const NoiseAttack& a) const { return {noise_attack(clip, a.sigma, a.seed), {}}; }
    AttackResult operator()(const ChainAttack& a) const {
      AttackResult total{clip, {}};
      for (const auto& step : a.steps) {
        AttackResult r = apply_attack(total.clip, step);
        detail::merge_alignment(total.alignment, r.alignment, total.clip);
        total.clip = std::move(r.clip);
      }
      return total;
    }
  };
  return std::visit(Visitor{clip}, attack);
}

// Undo recorded geometric and temporal changes: resample back to the original
// frame rate, then warp each frame back onto the original pixel grid.
inline VideoClip apply_alignment(const VideoClip& attacked, const AlignmentInfo& info) {
  VideoClip out = info.temporal ? resample_frames(attacked, info.temporal->original_fps) : attacked;
  if (info.geometric) {
    const auto& g = *info.geometric;
    const bool same_grid = (g.to_original - Homography::Identity()).cwiseAbs().maxCoeff() == 0.0 &&
                           g.width == out.width && g.height == out.height;
    if (!same_grid) out = detail::warp_clip(out, g.to_original, g.width, g.height);
  }
  return out;
}

}  // namespace vwm
