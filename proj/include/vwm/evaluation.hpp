#pragma once

// End-to-end robustness runs: embed, quantize to 8-bit 4:2:0 as a file write
// would, attack, quantize again, realign, extract, score.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vwm/attacks.hpp"
#include "vwm/codec.hpp"
#include "vwm/color.hpp"
#include "vwm/metrics.hpp"

namespace vwm {

struct WatermarkedClip {
  VideoClip clip;  // after 8-bit quantization
  EmbedReport report;
  QualityReport quality;  // vs. the source clip
};

inline WatermarkedClip embed_and_quantize(const VideoClip& source, const WatermarkPayload& payload,
                                          ArnoldKey key, const EmbedParams& params) {
  VideoClip work = source;
  WatermarkedClip out;
  out.report = embed_clip(work, payload, key, params);
  out.clip = quantize_420(work);
  out.quality = psnr(source, out.clip);
  return out;
}

// How attacked frames are stored before realignment.
enum class AttackQuantization {
  None,    // keep real-valued samples
  Rgb8,    // 8-bit RGB, as a PNG frame dump
  Yuv420,  // 8-bit 4:2:0, as a Y4M file
};

inline VideoClip quantize(const VideoClip& clip, AttackQuantization q) {
  switch (q) {
    case AttackQuantization::Rgb8: return quantize_rgb8(clip);
    case AttackQuantization::Yuv420: return quantize_420(clip);
    case AttackQuantization::None: break;
  }
  return clip;
}

struct AttackOutcome {
  std::string name;
  double ber = 0.0;
  std::size_t uncovered = 0;
  double mean_confidence = 0.0;
};

inline AttackOutcome run_attack(const VideoClip& watermarked, const WatermarkPayload& payload,
                                ArnoldKey key, const EmbedParams& params, const AttackSpec& spec,
                                AttackQuantization storage = AttackQuantization::Rgb8) {
  AttackResult attacked = apply_attack(watermarked, spec.variant);
  const VideoClip aligned = apply_alignment(quantize(attacked.clip, storage), attacked.alignment);
  const ExtractResult r = extract(aligned, payload.size(), key, params);
  AttackOutcome o{spec.name, ber(payload, r.payload), r.uncovered_count(), 0.0};
  for (double c : r.confidence) o.mean_confidence += c / static_cast<double>(r.confidence.size());
  return o;
}

struct BatteryEntry {
  AttackSpec spec;
  std::optional<double> max_ber;  // pass/fail threshold on the corpus-mean BER
};

// Type-I attack battery with its BER limits.
inline std::vector<BatteryEntry> default_battery() {
  ChainAttack composite;
  composite.steps = {ProjectiveAttack{}, ResizeAttack{0.9}, NoiseAttack{2.0, 7}, TlpfAttack{4}};
  return {
      {{"identity", IdentityAttack{}}, 0.0},
      {{"crop_20", CropAttack{0.2}}, 0.01},
      {{"rotate_4", RotateAttack{4.0}}, 0.05},
      {{"resize_1.5", ResizeAttack{1.5}}, 0.05},
      {{"resize_0.5", ResizeAttack{0.5}}, 0.05},
      {{"projective", ProjectiveAttack{}}, 0.06},
      {{"tlpf_4", TlpfAttack{4}}, 0.10},
      {{"frc_30", FrcAttack{{30, 1}}}, 0.06},
      {{"frc_20", FrcAttack{{20, 1}}}, 0.08},
      {{"composite", composite}, 0.15},
  };
}

struct CalibrationPoint {
  double p = 0.0;
  double psnr_mean = 0.0;
  double ber = 0.0;
};

struct CalibrationResult {
  std::vector<CalibrationPoint> sweep;
  std::optional<double> recommended;  // smallest p with BER 0
};

// Sweeps p over [p_min, p_max] in `step` increments; BER is measured after
// `attack` (identity by default).
inline CalibrationResult calibrate(const VideoClip& source, const WatermarkPayload& payload, ArnoldKey key,
                                   EmbedParams params, double p_min, double p_max, double step,
                                   const AttackSpec& attack = {"identity", IdentityAttack{}},
                                   AttackQuantization storage = AttackQuantization::Rgb8) {
  if (!(p_min > 0.0) || p_max < p_min) throw std::invalid_argument("empty or non-positive p range");
  if (p_max > p_min && !(step > 0.0)) throw std::invalid_argument("p step must be positive");
  CalibrationResult result;
  const int count = p_max > p_min ? static_cast<int>(std::floor((p_max - p_min) / step + 1e-9)) + 1 : 1;
  for (int i = 0; i < count; ++i) {
    params.p = p_min + i * step;
    const WatermarkedClip wm = embed_and_quantize(source, payload, key, params);
    const AttackOutcome o = run_attack(wm.clip, payload, key, params, attack, storage);
    result.sweep.push_back({params.p, wm.quality.psnr_mean, o.ber});
    if (o.ber == 0.0 && !result.recommended) result.recommended = params.p;
  }
  return result;
}

}  // namespace vwm
