// vwm: embed / extract / attack / evaluate / calibrate / gen-corpus.
//
// Exit codes: 0 ok, 1 bad configuration or unreadable input,
// 2 payload not embeddable in this content, 3 some payload bits uncovered,
// 4 evaluate --strict with a failed threshold.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vwm/corpus.hpp"
#include "vwm/json_io.hpp"
#include "vwm/png_dir.hpp"
#include "vwm/vwm.hpp"

namespace fs = std::filesystem;
using namespace vwm;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNotEmbeddable = 2, kUncovered = 3, kThresholdFailed = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_y4m(const std::string& path) { return fs::path(path).extension() == ".y4m"; }

VideoClip read_clip(const std::string& path, std::optional<Rational> fps) {
  if (is_y4m(path)) return read_y4m(path);
  return read_png_dir(path, fps.value_or(Rational{25, 1}));
}

// Y4M output is 4:2:0, PNG output is 8-bit RGB; returns what was written.
VideoClip write_clip(const VideoClip& clip, const std::string& path) {
  if (is_y4m(path)) {
    write_y4m(clip, path);
    return quantize_420(clip);
  }
  write_png_dir(clip, path);
  return quantize_rgb8(clip);
}

Rational parse_fps(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) return rational_from(json::parse(s));
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError("bad frame rate '" + s + "'");
  }
}

// "rotate=4", "crop=0.2", "resize=0.5", "tlpf=4", "frc=30", "noise=2",
// "projective", "identity"; steps joined by '+' form a chain.
AttackVariant parse_short_attack(const std::string& s) {
  if (s.find('+') != std::string::npos) {
    ChainAttack chain;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, '+');) chain.steps.push_back(parse_short_attack(part));
    return chain;
  }
  const auto eq = s.find('=');
  const std::string tag = s.substr(0, eq);
  const std::string arg = eq == std::string::npos ? "" : s.substr(eq + 1);
  json j{{"variant", tag}};
  if (!arg.empty()) {
    static const std::map<std::string, std::string> kKey{{"rotate", "deg"},   {"crop", "ratio"},
                                                         {"resize", "factor"}, {"tlpf", "window"},
                                                         {"frc", "target_fps"}, {"noise", "sigma"}};
    const auto it = kKey.find(tag);
    if (it == kKey.end()) throw ConfigError("attack '" + tag + "' takes no argument");
    try {
      j[it->second] = tag == "tlpf" ? json(std::stoi(arg)) : json(std::stod(arg));
    } catch (const std::exception&) {
      throw ConfigError("bad attack argument '" + arg + "'");
    }
  }
  return attack_variant_from(j);
}

json attack_json(const std::string& value) {
  if (fs::is_regular_file(value)) return read_json_file(value);
  if (!value.empty() && (value.front() == '{' || value.front() == '[')) return json::parse(value);
  return to_json(AttackSpec{value, parse_short_attack(value)});
}

struct Options {
  std::string config_path;
  std::string input, output, report;
  std::string payload_path, bits;
  std::optional<std::uint64_t> key;
  std::optional<std::uint64_t> seed;
  std::optional<double> p, theta;
  std::optional<int> band_k, k_frames;
  std::string mapping, selection_mode;
  std::string fps;
  json config = json::object();

  void add_to(CLI::App& app, bool payload) {
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--input,-i", input, "input clip (.y4m or directory of frame_NNNNNN.png)");
    app.add_option("--output,-o", output, "output path");
    app.add_option("--report", report, "write a JSON report here");
    app.add_option("--key", key, "Arnold iteration count");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--p", p, "embedding strength");
    app.add_option("--band-k", band_k, "DCT anti-diagonal band index");
    app.add_option("--k-frames", k_frames, "frames per group");
    app.add_option("--theta", theta, "texture threshold");
    app.add_option("--mapping", mapping, "bit mapping: position|rank");
    app.add_option("--selection", selection_mode, "block selection: combined|texture|keypoint");
    app.add_option("--fps", fps, "frame rate for PNG input, e.g. 25 or 30000:1001");
    if (payload) {
      app.add_option("--payload", payload_path, "payload file of 0/1 characters");
      app.add_option("--bits", bits, "payload given inline as 0/1 characters");
    }
  }

  void load() {
    if (!config_path.empty()) config = read_json_file(config_path);
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
  }

  EmbedParams params() const {
    json j = config;
    if (p) j["p"] = *p;
    if (band_k) j["band_k"] = *band_k;
    if (k_frames) j["k_frames"] = *k_frames;
    if (theta) j["theta"] = *theta;
    if (!mapping.empty()) j["mapping"] = mapping;
    if (!selection_mode.empty()) j["selection_mode"] = selection_mode;
    return embed_params_from(j);
  }

  ArnoldKey arnold_key() const {
    if (key) return {*key};
    return {config.value("key", std::uint64_t{7})};
  }

  std::uint64_t rng_seed() const { return seed.value_or(config.value("seed", std::uint64_t{1})); }

  std::optional<Rational> frame_rate() const {
    if (!fps.empty()) return parse_fps(fps);
    if (config.contains("fps")) return rational_from(config.at("fps"));
    return std::nullopt;
  }

  std::string input_path() const {
    const std::string in = !input.empty() ? input : config.value("input", std::string{});
    if (in.empty()) throw ConfigError("--input is required");
    return in;
  }

  std::string output_path(bool required) const {
    const std::string out = !output.empty() ? output : config.value("output", std::string{});
    if (out.empty() && required) throw ConfigError("--output is required");
    return out;
  }

  std::optional<WatermarkPayload> payload_opt() const {
    if (!bits.empty()) return WatermarkPayload::from_bits(bits);
    if (!payload_path.empty()) return read_payload(payload_path);
    if (config.contains("bits")) return WatermarkPayload::from_bits(config.at("bits").get<std::string>());
    if (config.contains("payload")) return read_payload(config.at("payload").get<std::string>());
    return std::nullopt;
  }

  WatermarkPayload payload() const {
    auto pl = payload_opt();
    if (!pl) throw ConfigError("a payload is required (--payload or --bits)");
    return *pl;
  }

  json run_config(const EmbedParams& ep) const {
    json j = to_json(ep);
    j["key"] = arnold_key().iterations;
    return j;
  }
};

json clip_json(const VideoClip& c, const std::string& path) {
  return {{"path", path},
          {"width", c.width},
          {"height", c.height},
          {"frames", c.size()},
          {"fps", rational_json(c.fps)}};
}

void emit_report(const json& report, const std::string& path) {
  if (path.empty()) return;
  write_json_file(report, path);
}

WatermarkPayload random_payload(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> s(length);
  for (int& v : s) v = (rng() & 1) ? 1 : -1;
  return WatermarkPayload(std::move(s));
}

int cmd_embed(const Options& o) {
  const EmbedParams ep = o.params();
  const WatermarkPayload payload = o.payload();
  const std::string in = o.input_path(), out = o.output_path(true);
  const VideoClip source = read_clip(in, o.frame_rate());

  VideoClip work = source;
  const EmbedReport er = embed_clip(work, payload, o.arnold_key(), ep);
  if (er.empty_groups() == er.masks.size()) {
    std::cerr << "error: payload not embeddable in this content (no selectable blocks in any group)\n";
    return kNotEmbeddable;
  }
  const VideoClip written = write_clip(work, out);
  const QualityReport q = psnr(source, written);

  json groups = json::array();
  for (const auto& m : er.masks) groups.push_back(m.size());
  json config = o.run_config(ep);
  config["payload_length"] = payload.size();
  json report{{"command", "embed"},
              {"attack", nullptr},
              {"ber", nullptr},
              {"psnr_mean", psnr_value(q.psnr_mean)},
              {"psnr_rgb", to_json(q)["psnr_rgb"]},
              {"params", config},
              {"clip", clip_json(source, in)},
              {"output", out},
              {"group_blocks", groups},
              {"empty_groups", er.empty_groups()},
              {"modified_blocks", er.modified_blocks},
              {"config_hash", config_hash(config)}};
  emit_report(report, o.report);
  std::cout << "embedded " << payload.size() << " bits into " << source.size() << " frames, PSNR "
            << std::fixed << std::setprecision(2) << q.psnr_mean << " dB\n";
  return kOk;
}

int cmd_extract(const Options& o, std::optional<std::size_t> length, const std::string& alignment_path) {
  const EmbedParams ep = o.params();
  const auto reference = o.payload_opt();
  if (!length && !reference) throw ConfigError("payload length unknown: give --length or a reference --payload");
  const std::size_t len = length ? *length : reference->size();
  if (square_side(len) < 2) throw ConfigError("payload length " + std::to_string(len) + " is not a perfect square >= 4");
  if (reference && reference->size() != len) throw ConfigError("--length disagrees with the reference payload");

  const std::string in = o.input_path();
  VideoClip clip = read_clip(in, o.frame_rate());
  if (!alignment_path.empty()) clip = apply_alignment(clip, alignment_from(read_json_file(alignment_path)));
  const ExtractResult r = extract(clip, len, o.arnold_key(), ep);

  const std::string out = o.output_path(false);
  if (!out.empty()) write_payload(r.payload, out);

  json config = o.run_config(ep);
  config["payload_length"] = len;
  json report{{"command", "extract"},
              {"attack", nullptr},
              {"ber", reference ? json(ber(*reference, r.payload)) : json(nullptr)},
              {"psnr_mean", nullptr},
              {"psnr_rgb", nullptr},
              {"params", config},
              {"clip", clip_json(clip, in)},
              {"bits", r.payload.to_bits()},
              {"confidence", r.confidence},
              {"uncovered", r.uncovered},
              {"uncovered_count", r.uncovered_count()},
              {"config_hash", config_hash(config)}};
  emit_report(report, o.report);

  std::cout << r.payload.to_bits() << '\n';
  if (reference) std::cout << "BER " << ber(*reference, r.payload) << '\n';
  if (r.uncovered_count() > 0) {
    std::cerr << "warning: " << r.uncovered_count() << " of " << len << " bits received no votes\n";
    return kUncovered;
  }
  return kOk;
}

int cmd_attack(const Options& o, const std::string& attack, const std::string& alignment_path) {
  const json aj = attack.empty() ? o.config.value("attack", json(nullptr)) : attack_json(attack);
  if (aj.is_null()) throw ConfigError("--attack is required");
  const AttackSpec spec = attack_spec_from(aj);
  const std::string in = o.input_path(), out = o.output_path(true);
  const VideoClip clip = read_clip(in, o.frame_rate());
  const AttackResult r = apply_attack(clip, spec.variant);
  write_clip(r.clip, out);
  if (!alignment_path.empty()) write_json_file(to_json(r.alignment), alignment_path);

  json report{{"command", "attack"},
              {"attack", to_json(spec)},
              {"ber", nullptr},
              {"psnr_mean", nullptr},
              {"psnr_rgb", nullptr},
              {"params", nullptr},
              {"clip", clip_json(clip, in)},
              {"output", clip_json(r.clip, out)},
              {"alignment", to_json(r.alignment)},
              {"config_hash", config_hash(to_json(spec))}};
  emit_report(report, o.report);
  std::cout << spec.name << ": " << clip.size() << " -> " << r.clip.size() << " frames, " << r.clip.width
            << "x" << r.clip.height << '\n';
  return kOk;
}

struct EvalSource {
  std::string label;
  VideoClip clip;
};

std::vector<EvalSource> eval_sources(const Options& o, const std::vector<std::uint64_t>& seeds, int frames) {
  std::vector<EvalSource> out;
  if (!o.input.empty() || o.config.contains("input")) {
    const std::string in = o.input_path();
    out.push_back({in, read_clip(in, o.frame_rate())});
    return out;
  }
  for (std::uint64_t s : seeds) {
    CorpusSpec cs;
    cs.seed = s;
    cs.frames = frames;
    // stored as 8-bit 4:2:0, exactly as gen-corpus would write it
    out.push_back({"corpus:" + std::to_string(s), quantize_420(generate_clip(cs))});
  }
  return out;
}

AttackQuantization parse_quantization(const std::string& s) {
  if (s == "rgb8") return AttackQuantization::Rgb8;
  if (s == "yuv420") return AttackQuantization::Yuv420;
  if (s == "none") return AttackQuantization::None;
  throw ConfigError("unknown quantization '" + s + "' (rgb8|yuv420|none)");
}

int cmd_evaluate(const Options& o, const std::string& battery_arg, const std::vector<std::uint64_t>& seeds,
                 int frames, const std::string& quant, bool strict) {
  const EmbedParams ep = o.params();
  std::vector<BatteryEntry> battery;
  if (!battery_arg.empty())
    battery = battery_from(attack_json(battery_arg));
  else if (o.config.contains("battery"))
    battery = battery_from(o.config.at("battery"));
  else
    battery = default_battery();
  const AttackQuantization storage = parse_quantization(quant);
  const ArnoldKey key = o.arnold_key();
  const auto fixed = o.payload_opt();
  const std::size_t length = fixed ? fixed->size() : 16;

  std::vector<double> ber_sum(battery.size(), 0.0);
  std::vector<std::size_t> uncovered(battery.size(), 0);
  json clips = json::array();
  double psnr_sum = 0.0;
  std::array<double, 3> rgb_sum{};
  std::size_t n_clips = 0;
  for (const auto& src : eval_sources(o, seeds, frames)) {
    const WatermarkPayload payload = fixed ? *fixed : random_payload(length, o.rng_seed() + n_clips);
    const WatermarkedClip wm = embed_and_quantize(src.clip, payload, key, ep);
    json per = json::array();
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const AttackOutcome r = run_attack(wm.clip, payload, key, ep, battery[i].spec, storage);
      ber_sum[i] += r.ber;
      uncovered[i] += r.uncovered;
      per.push_back({{"attack", battery[i].spec.name}, {"ber", r.ber}, {"uncovered", r.uncovered}});
    }
    clips.push_back({{"clip", clip_json(src.clip, src.label)},
                     {"psnr_mean", psnr_value(wm.quality.psnr_mean)},
                     {"results", per}});
    psnr_sum += wm.quality.psnr_mean;
    for (int c = 0; c < 3; ++c) rgb_sum[c] += wm.quality.psnr_rgb[c];
    ++n_clips;
  }
  const double nc = static_cast<double>(n_clips);

  std::cout << std::left << std::setw(14) << "attack" << std::right << std::setw(10) << "BER" << std::setw(10)
            << "limit" << std::setw(8) << "result" << '\n';
  json rows = json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const double mean_ber = ber_sum[i] / nc;
    const auto& lim = battery[i].max_ber;
    const bool pass = !lim || mean_ber <= *lim + 1e-12;
    all_pass = all_pass && pass;
    std::cout << std::left << std::setw(14) << battery[i].spec.name << std::right << std::fixed
              << std::setprecision(4) << std::setw(10) << mean_ber << std::setw(10)
              << (lim ? std::to_string(*lim).substr(0, 6) : std::string("-")) << std::setw(8)
              << (lim ? (pass ? "pass" : "FAIL") : "-") << '\n';
    json row{{"attack", battery[i].spec.name},
             {"spec", to_json(battery[i].spec)},
             {"ber", mean_ber},
             {"uncovered", uncovered[i]},
             {"max_ber", lim ? json(*lim) : json(nullptr)},
             {"pass", lim ? json(pass) : json(nullptr)}};
    rows.push_back(row);
  }
  const double psnr_mean = n_clips ? psnr_sum / nc : 0.0;
  if (n_clips) std::cout << "mean PSNR " << std::setprecision(2) << psnr_mean << " dB over " << n_clips << " clip(s)\n";

  json config = o.run_config(ep);
  config["payload_length"] = length;
  config["storage"] = quant;
  json report{{"command", "evaluate"},
              {"attack", rows},
              {"ber", nullptr},
              {"psnr_mean", psnr_value(psnr_mean)},
              {"psnr_rgb", {rgb_sum[0] / nc, rgb_sum[1] / nc, rgb_sum[2] / nc}},
              {"params", config},
              {"clip", clips},
              {"all_pass", all_pass},
              {"config_hash", config_hash(config)}};
  emit_report(report, o.report);
  return strict && !all_pass ? kThresholdFailed : kOk;
}

int cmd_calibrate(const Options& o, double p_min, double p_max, double p_step, const std::string& csv,
                  const std::string& attack, int frames, const std::string& quant) {
  if (!(p_min > 0.0) || p_max < p_min) throw ConfigError("empty p range");
  if (p_max > p_min && !(p_step > 0.0)) throw ConfigError("--p-step must be positive");
  const EmbedParams ep = o.params();
  const auto fixed = o.payload_opt();
  const WatermarkPayload payload = fixed ? *fixed : random_payload(16, o.rng_seed());
  const AttackSpec spec = attack.empty() ? AttackSpec{"identity", IdentityAttack{}} : attack_spec_from(attack_json(attack));
  const auto sources = eval_sources(o, {o.rng_seed()}, frames);
  const CalibrationResult r =
      calibrate(sources.front().clip, payload, o.arnold_key(), ep, p_min, p_max, p_step, spec, parse_quantization(quant));

  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw IoError("cannot open " + csv + " for writing");
    out << "p,psnr_mean,ber\n";
    for (const auto& pt : r.sweep) out << pt.p << ',' << pt.psnr_mean << ',' << pt.ber << '\n';
  }
  json sweep = json::array();
  for (const auto& pt : r.sweep) sweep.push_back({{"p", pt.p}, {"psnr_mean", psnr_value(pt.psnr_mean)}, {"ber", pt.ber}});
  json config = o.run_config(ep);
  json report{{"command", "calibrate"},
              {"attack", to_json(spec)},
              {"ber", nullptr},
              {"psnr_mean", nullptr},
              {"psnr_rgb", nullptr},
              {"params", config},
              {"clip", clip_json(sources.front().clip, sources.front().label)},
              {"sweep", sweep},
              {"recommended_p", r.recommended ? json(*r.recommended) : json(nullptr)},
              {"config_hash", config_hash(config)}};
  emit_report(report, o.report);
  if (!r.recommended) {
    std::cerr << "no p in range reaches BER 0\n";
    return kNotEmbeddable;
  }
  std::cout << *r.recommended << '\n';
  return kOk;
}

int cmd_gen_corpus(const Options& o, int frames, int width, int height) {
  CorpusSpec cs;
  cs.seed = o.rng_seed();
  cs.frames = frames;
  cs.width = width;
  cs.height = height;
  if (const auto fps = o.frame_rate()) cs.fps = *fps;
  const std::string out = o.output_path(true);
  const VideoClip clip = generate_clip(cs);
  write_clip(clip, out);
  std::cout << "wrote " << clip.size() << " frames to " << out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind video watermarking with DWT/DCT blue-green channel reference"};
  app.require_subcommand(1);

  Options opt;
  std::optional<std::size_t> length;
  std::string attack, alignment, csv, quant = "rgb8";
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int frames = 100, width = 352, height = 288;
  double p_min = 0, p_max = 0, p_step = 0;
  bool strict = false;

  auto* embed = app.add_subcommand("embed", "embed a payload into a clip");
  opt.add_to(*embed, true);

  auto* ext = app.add_subcommand("extract", "recover a payload from a clip");
  opt.add_to(*ext, true);
  ext->add_option("--length", length, "payload length (a perfect square)");
  ext->add_option("--alignment", alignment, "alignment JSON written by `attack`");

  auto* atk = app.add_subcommand("attack", "apply an attack and record its alignment");
  opt.add_to(*atk, false);
  atk->add_option("--attack", attack, "attack JSON file, inline JSON, or short form like rotate=4");
  atk->add_option("--alignment", alignment, "write the alignment JSON here");

  auto* eval = app.add_subcommand("evaluate", "run an attack battery and report BER per attack");
  opt.add_to(*eval, true);
  eval->add_option("--attack", attack, "battery JSON (list of attack specs with optional max_ber)");
  eval->add_option("--corpus-seeds", seeds, "synthetic clips to use when no --input is given");
  eval->add_option("--frames", frames, "frames per synthetic clip");
  eval->add_option("--quantize", quant, "storage of attacked frames: rgb8|yuv420|none");
  eval->add_flag("--strict", strict, "exit 4 when a threshold fails");

  auto* cal = app.add_subcommand("calibrate", "sweep p and report the smallest p with BER 0");
  opt.add_to(*cal, true);
  cal->add_option("--p-min", p_min, "sweep start")->required();
  cal->add_option("--p-max", p_max, "sweep end")->required();
  cal->add_option("--p-step", p_step, "sweep step");
  cal->add_option("--csv", csv, "write the sweep as CSV");
  cal->add_option("--attack", attack, "attack applied before extraction (default identity)");
  cal->add_option("--frames", frames, "frames of the synthetic clip when no --input is given");
  cal->add_option("--quantize", quant, "storage of attacked frames: rgb8|yuv420|none");

  auto* gen = app.add_subcommand("gen-corpus", "write a seeded synthetic clip");
  opt.add_to(*gen, false);
  gen->add_option("--frames", frames, "frame count");
  gen->add_option("--width", width, "frame width");
  gen->add_option("--height", height, "frame height");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    opt.load();
    if (embed->parsed()) return cmd_embed(opt);
    if (ext->parsed()) return cmd_extract(opt, length, alignment);
    if (atk->parsed()) return cmd_attack(opt, attack, alignment);
    if (eval->parsed()) return cmd_evaluate(opt, attack, seeds, frames, quant, strict);
    if (cal->parsed()) return cmd_calibrate(opt, p_min, p_max, p_step, csv, attack, frames, quant);
    if (gen->parsed()) return cmd_gen_corpus(opt, frames, width, height);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
