#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vwm/image.hpp"
#include "vwm/payload.hpp"

namespace vwm {

inline double mse(const Plane& a, const Plane& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mse: planes differ in shape");
  if (a.empty()) throw std::invalid_argument("mse: empty planes");
  auto sa = a.samples();
  auto sb = b.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    acc += d * d;
  }
  return acc / static_cast<double>(sa.size());
}

inline double psnr_from_mse(double m) {
  if (m <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

struct QualityReport {
  std::array<double, 3> psnr_rgb{};  // +inf for identical content
  double psnr_mean = 0.0;
  std::vector<double> per_frame;    // mean-over-channels PSNR per frame
  std::size_t identical_frames = 0; // frames excluded from clip averages

  bool infinite() const { return std::isinf(psnr_mean); }
};

inline QualityReport psnr(const FrameRGB& a, const FrameRGB& b) {
  QualityReport q;
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    q.psnr_rgb[c] = psnr_from_mse(mse(a.channel(c), b.channel(c)));
    sum += q.psnr_rgb[c];
  }
  q.psnr_mean = sum / 3.0;
  q.per_frame = {q.psnr_mean};
  q.identical_frames = q.infinite() ? 1 : 0;
  return q;
}

// Clip-level PSNR: mean over frames of per-frame channel PSNRs. Frames where
// a channel is identical (infinite PSNR) are excluded from that channel's
// mean; a channel identical in every frame reports +inf.
inline QualityReport psnr(const VideoClip& a, const VideoClip& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("psnr: clips must have the same non-zero length");
  QualityReport q;
  std::array<double, 3> sum{};
  std::array<std::size_t, 3> finite{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const QualityReport f = psnr(a.frames[i], b.frames[i]);
    q.per_frame.push_back(f.psnr_mean);
    q.identical_frames += f.infinite();
    for (int c = 0; c < 3; ++c)
      if (std::isfinite(f.psnr_rgb[c])) {
        sum[c] += f.psnr_rgb[c];
        ++finite[c];
      }
  }
  double mean = 0.0;
  for (int c = 0; c < 3; ++c) {
    q.psnr_rgb[c] = finite[c] ? sum[c] / static_cast<double>(finite[c])
                              : std::numeric_limits<double>::infinity();
    mean += q.psnr_rgb[c];
  }
  q.psnr_mean = mean / 3.0;
  return q;
}

// Fraction of mismatching symbols.
inline double ber(const std::vector<int>& w, const std::vector<int>& w_star) {
  if (w.size() != w_star.size()) throw std::invalid_argument("ber: payload lengths differ");
  if (w.empty()) throw std::invalid_argument("ber: empty payload");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < w.size(); ++i) errors += w[i] != w_star[i];
  return static_cast<double>(errors) / static_cast<double>(w.size());
}

inline double ber(const WatermarkPayload& w, const WatermarkPayload& w_star) {
  return ber(w.symbols(), w_star.symbols());
}

}  // namespace vwm
