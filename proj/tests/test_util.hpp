#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "vwm/corpus.hpp"
#include "vwm/image.hpp"

namespace vwm::test {

inline Plane random_plane(int w, int h, std::mt19937_64& rng, double lo = 0.0, double hi = 255.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Plane p(w, h);
  for (double& v : p.samples()) v = u(rng);
  return p;
}

inline FrameRGB random_frame(int w, int h, std::mt19937_64& rng, double lo = 0.0, double hi = 255.0) {
  FrameRGB f(w, h);
  for (int c = 0; c < 3; ++c) f.channel(c) = random_plane(w, h, rng, lo, hi);
  return f;
}

inline VideoClip constant_clip(int w, int h, int frames, double value) {
  VideoClip c{{}, w, h, {25, 1}};
  for (int i = 0; i < frames; ++i) c.frames.emplace_back(w, h, value);
  return c;
}

inline VideoClip corpus_clip(std::uint64_t seed, int frames) {
  CorpusSpec s;
  s.seed = seed;
  s.frames = frames;
  return generate_clip(s);
}

inline VideoClip small_corpus_clip(std::uint64_t seed, int frames, int w = 176, int h = 144) {
  CorpusSpec s;
  s.seed = seed;
  s.frames = frames;
  s.width = w;
  s.height = h;
  return generate_clip(s);
}

// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           (tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace vwm::test
