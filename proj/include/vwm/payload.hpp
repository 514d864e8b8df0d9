#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vwm/error.hpp"

namespace vwm {

// Side length n with n * n == length, or -1 when length is not a perfect square.
inline int square_side(std::size_t length) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(length))));
  return n * n == length ? static_cast<int>(n) : -1;
}

// L = n^2 symbols over {+1, -1}.
class WatermarkPayload {
 public:
  WatermarkPayload() = default;
  explicit WatermarkPayload(std::vector<int> symbols) : symbols_(std::move(symbols)) {
    n_ = square_side(symbols_.size());
    if (n_ < 2)
      throw std::invalid_argument("payload length " + std::to_string(symbols_.size()) +
                                  " is not a perfect square >= 4");
    for (int s : symbols_)
      if (s != 1 && s != -1) throw std::invalid_argument("payload symbols must be +1 or -1");
  }

  int side() const { return n_; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<int>& symbols() const { return symbols_; }
  int operator[](std::size_t i) const { return symbols_[i]; }

  // '1' -> +1, '0' -> -1
  static WatermarkPayload from_bits(const std::string& bits) {
    std::vector<int> s;
    for (char c : bits) {
      if (c == '0' || c == '1') s.push_back(c == '1' ? 1 : -1);
      else if (!std::isspace(static_cast<unsigned char>(c)))
        throw std::invalid_argument(std::string("payload contains invalid character '") + c + "'");
    }
    return WatermarkPayload(std::move(s));
  }

  std::string to_bits() const {
    std::string out;
    for (int s : symbols_) out.push_back(s > 0 ? '1' : '0');
    return out;
  }

  friend bool operator==(const WatermarkPayload&, const WatermarkPayload&) = default;

 private:
  std::vector<int> symbols_;
  int n_ = 0;
};

inline WatermarkPayload read_payload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open payload file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return WatermarkPayload::from_bits(ss.str());
}

inline void write_payload(const WatermarkPayload& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << p.to_bits() << '\n';
}

}  // namespace vwm
