#pragma once

#include <cstdint>

namespace plnash {

// SplitMix64: a tiny, seedable, portable 64-bit generator. Every uniform
// variate consumes exactly one 64-bit draw, so traces that log the draw
// sequence are reproducible across platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform block index in {0, ..., n-1}, drawn as floor(n*u) from a single
  // 64-bit draw (clamped so u ~ 1.0 rounding cannot escape the range).
  int block_index(int n) {
    const int i = static_cast<int>(static_cast<double>(n) * uniform01());
    return i < n ? i : n - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace plnash
