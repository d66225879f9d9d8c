// Counter-based random streams (SplitMix64).
//
// A stream is a key plus a counter; draw i equals the i-th output of the
// published SplitMix64 generator seeded with the key. Counter addressing
// makes streams splittable per (node, core, round) with no coordination
// and lets the batch kernels produce the exact sequential sequence.
#pragma once

#include <cstdint>

namespace emg {

constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

struct RngStream {
  std::uint64_t key = 0;
  std::uint64_t ctr = 0;

  static RngStream seeded(std::uint64_t seed) { return {seed, 0}; }

  // Child stream; chains give (seed, node, core)-style ids.
  RngStream derive(std::uint64_t salt) const {
    return {mix64(key ^ (mix64(salt) + kSplitmixGamma)), 0};
  }

  std::uint64_t at(std::uint64_t i) const { return mix64(key + (i + 1) * kSplitmixGamma); }
  std::uint64_t next() { return at(ctr++); }
  void skip(std::uint64_t n) { ctr += n; }

  // Uniform draw in [0, s) — multiply-shift with rejection, exactly uniform.
  std::uint64_t bounded(std::uint64_t s) {
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * s;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < s) {
      const std::uint64_t t = (0 - s) % s;
      while (l < t) {
        x = next();
        m = static_cast<__uint128_t>(x) * s;
        l = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }
};

// Salts for the per-phase stream families.
namespace stream_tag {
constexpr std::uint64_t shuffle = 1;
constexpr std::uint64_t generate = 2;
constexpr std::uint64_t jitter = 3;
}  // namespace stream_tag

}  // namespace emg
