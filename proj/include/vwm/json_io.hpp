#pragma once

// JSON forms of parameters, attack specs, alignment records and reports.
// Requires nlohmann/json.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "vwm/attacks.hpp"
#include "vwm/codec.hpp"
#include "vwm/error.hpp"
#include "vwm/evaluation.hpp"
#include "vwm/metrics.hpp"

namespace vwm {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

// FNV-1a over the canonical (key-sorted, compact) serialization.
inline std::string config_hash(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Infinite PSNR is written as null.
inline json psnr_value(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline std::string to_string(SelectionMode m) {
  switch (m) {
    case SelectionMode::Combined: return "combined";
    case SelectionMode::TextureOnly: return "texture";
    case SelectionMode::KeypointOnly: return "keypoint";
  }
  return "combined";
}

inline SelectionMode selection_mode_from(const std::string& s) {
  if (s == "combined") return SelectionMode::Combined;
  if (s == "texture") return SelectionMode::TextureOnly;
  if (s == "keypoint") return SelectionMode::KeypointOnly;
  throw std::invalid_argument("unknown selection mode '" + s + "'");
}

inline std::string to_string(BitMapping m) { return m == BitMapping::Rank ? "rank" : "position"; }

inline BitMapping bit_mapping_from(const std::string& s) {
  if (s == "position") return BitMapping::Position;
  if (s == "rank") return BitMapping::Rank;
  throw std::invalid_argument("unknown bit mapping '" + s + "'");
}

inline json to_json(const EmbedParams& p) {
  const auto& s = p.selection;
  return {{"p", p.p},
          {"band_k", p.band_k},
          {"k_frames", p.k_frames},
          {"mapping", to_string(p.mapping)},
          {"theta", s.theta},
          {"cluster_radius", s.cluster_radius},
          {"central_ratio", s.central_ratio},
          {"fast_threshold", s.detector.fast_threshold},
          {"pyramid_levels", s.detector.pyramid_levels},
          {"scale_factor", s.detector.scale_factor},
          {"selection_mode", to_string(s.mode)}};
}

// Reads any subset of the keys written by to_json(EmbedParams) over `base`.
inline EmbedParams embed_params_from(const json& j, EmbedParams base = {}) {
  auto& s = base.selection;
  if (j.contains("p")) base.p = j.at("p").get<double>();
  if (j.contains("band_k")) base.band_k = j.at("band_k").get<int>();
  if (j.contains("k_frames")) base.k_frames = j.at("k_frames").get<int>();
  if (j.contains("mapping")) base.mapping = bit_mapping_from(j.at("mapping").get<std::string>());
  if (j.contains("theta")) s.theta = j.at("theta").get<double>();
  if (j.contains("cluster_radius")) s.cluster_radius = j.at("cluster_radius").get<double>();
  if (j.contains("central_ratio")) s.central_ratio = j.at("central_ratio").get<double>();
  if (j.contains("fast_threshold")) s.detector.fast_threshold = j.at("fast_threshold").get<double>();
  if (j.contains("pyramid_levels")) s.detector.pyramid_levels = j.at("pyramid_levels").get<int>();
  if (j.contains("scale_factor")) s.detector.scale_factor = j.at("scale_factor").get<double>();
  if (j.contains("selection_mode")) s.mode = selection_mode_from(j.at("selection_mode").get<std::string>());
  base.validate();
  return base;
}

inline json to_json(const AttackVariant& v);

inline json rational_json(Rational r) { return json::array({r.num, r.den}); }

inline Rational rational_from(const json& j) {
  if (j.is_array()) return {j.at(0).get<int>(), j.at(1).get<int>()};
  const double v = j.get<double>();
  if (v == std::floor(v)) return {static_cast<int>(v), 1};
  return {static_cast<int>(std::lround(v * 1000)), 1000};
}

inline json to_json(const AttackVariant& v) {
  struct Visitor {
    json operator()(const IdentityAttack&) const { return {{"variant", "identity"}}; }
    json operator()(const RotateAttack& a) const { return {{"variant", "rotate"}, {"deg", a.deg}}; }
    json operator()(const CropAttack& a) const { return {{"variant", "crop"}, {"ratio", a.ratio}}; }
    json operator()(const ResizeAttack& a) const {
      return {{"variant", "resize"}, {"factor", a.factor}, {"antialias", a.antialias}};
    }
    json operator()(const ProjectiveAttack& a) const {
      json corners = json::array();
      for (const auto& o : a.offsets) corners.push_back({o.x, o.y});
      return {{"variant", "projective"}, {"corners", corners}};
    }
    json operator()(const TlpfAttack& a) const { return {{"variant", "tlpf"}, {"window", a.window}}; }
    json operator()(const FrcAttack& a) const { return {{"variant", "frc"}, {"target_fps", rational_json(a.target)}}; }
    json operator()(const NoiseAttack& a) const {
      return {{"variant", "noise"}, {"sigma", a.sigma}, {"seed", a.seed}};
    }
    json operator()(const ChainAttack& a) const {
      json steps = json::array();
      for (const auto& s : a.steps) steps.push_back(to_json(s));
      return {{"variant", "chain"}, {"steps", steps}};
    }
  };
  return std::visit(Visitor{}, v);
}

inline AttackVariant attack_variant_from(const json& j) {
  const std::string tag = j.at("variant").get<std::string>();
  if (tag == "identity") return IdentityAttack{};
  if (tag == "rotate") return RotateAttack{j.value("deg", 4.0)};
  if (tag == "crop") {
    const double r = j.value("ratio", 0.2);
    if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("crop ratio must be in (0, 0.5)");
    return CropAttack{r};
  }
  if (tag == "resize") {
    const double f = j.value("factor", 1.5);
    if (!(f > 0.0)) throw std::invalid_argument("resize factor must be positive");
    return ResizeAttack{f, j.value("antialias", false)};
  }
  if (tag == "projective") {
    ProjectiveAttack a;
    if (j.contains("corners")) {
      const auto& c = j.at("corners");
      if (c.size() != 4) throw std::invalid_argument("projective attack needs 4 corner offsets");
      for (int i = 0; i < 4; ++i) a.offsets[i] = {c.at(i).at(0).get<double>(), c.at(i).at(1).get<double>()};
    }
    return a;
  }
  if (tag == "tlpf") return TlpfAttack{j.value("window", 4)};
  if (tag == "frc") {
    const Rational r = j.contains("target_fps") ? rational_from(j.at("target_fps")) : Rational{30, 1};
    if (r.num <= 0 || r.den <= 0) throw std::invalid_argument("FRC target must be positive");
    return FrcAttack{r};
  }
  if (tag == "noise") return NoiseAttack{j.value("sigma", 2.0), j.value("seed", std::uint64_t{1})};
  if (tag == "chain") {
    ChainAttack c;
    for (const auto& s : j.at("steps")) c.steps.push_back(attack_variant_from(s));
    return c;
  }
  throw std::invalid_argument("unknown attack variant '" + tag + "'");
}

inline json to_json(const AttackSpec& s) {
  json j = to_json(s.variant);
  j["name"] = s.name;
  return j;
}

inline AttackSpec attack_spec_from(const json& j) {
  AttackSpec s{j.value("name", j.at("variant").get<std::string>()), attack_variant_from(j)};
  return s;
}

inline json to_json(const BatteryEntry& e) {
  json j = to_json(e.spec);
  if (e.max_ber) j["max_ber"] = *e.max_ber;
  return j;
}

inline BatteryEntry battery_entry_from(const json& j) {
  BatteryEntry e{attack_spec_from(j), std::nullopt};
  if (j.contains("max_ber")) e.max_ber = j.at("max_ber").get<double>();
  return e;
}

inline std::vector<BatteryEntry> battery_from(const json& j) {
  const json& list = j.is_object() ? j.at("battery") : j;
  std::vector<BatteryEntry> out;
  for (const auto& e : list) out.push_back(battery_entry_from(e));
  return out;
}

inline json to_json(const AlignmentInfo& a) {
  json j = json::object();
  if (a.geometric) {
    const auto& g = *a.geometric;
    json m = json::array();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m.push_back(g.to_original(r, c));
    j["geometric"] = {{"to_original", m}, {"width", g.width}, {"height", g.height}};
    if (g.valid) j["geometric"]["valid"] = {g.valid->x0, g.valid->y0, g.valid->x1, g.valid->y1};
  }
  if (a.temporal) j["temporal"] = {{"original_fps", rational_json(a.temporal->original_fps)}};
  return j;
}

inline AlignmentInfo alignment_from(const json& j) {
  AlignmentInfo a;
  if (j.contains("geometric")) {
    const auto& g = j.at("geometric");
    GeometricAlignment ga;
    const auto& m = g.at("to_original");
    if (m.size() != 9) throw std::invalid_argument("alignment matrix needs 9 entries");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) ga.to_original(r, c) = m.at(r * 3 + c).get<double>();
    ga.width = g.at("width").get<int>();
    ga.height = g.at("height").get<int>();
    if (g.contains("valid")) {
      const auto& v = g.at("valid");
      ga.valid = PixelRect{v.at(0).get<int>(), v.at(1).get<int>(), v.at(2).get<int>(), v.at(3).get<int>()};
    }
    a.geometric = ga;
  }
  if (j.contains("temporal")) a.temporal = TemporalAlignment{rational_from(j.at("temporal").at("original_fps"))};
  return a;
}

inline json to_json(const QualityReport& q) {
  return {{"psnr_mean", psnr_value(q.psnr_mean)},
          {"psnr_rgb", {psnr_value(q.psnr_rgb[0]), psnr_value(q.psnr_rgb[1]), psnr_value(q.psnr_rgb[2])}},
          {"infinite", q.infinite()}};
}

}  // namespace vwm
