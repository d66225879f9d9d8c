// Scalar reference kernels. These define the bit-exact behavior every other
// variant must reproduce.
#include <cassert>
#include <cmath>

#include "emgraph/kernels.hpp"
#include "emgraph/rng.hpp"

namespace emg::kernels {

QuadrantThresholds quadrant_thresholds(double a, double b, double c) {
  // p * 2^53 is exact (power-of-two scaling); llround pins the half-way rule.
  auto t = [](double p) {
    if (p >= 1.0) return std::uint64_t(1) << 53;
    if (p <= 0.0) return std::uint64_t(0);
    return static_cast<std::uint64_t>(std::llround(p * 0x1p53));
  };
  return {t(a), t(a + b), t(a + b + c)};
}

namespace ref {

void fill_random(std::uint64_t key, std::uint64_t start_ctr, std::uint64_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mix64(key + (start_ctr + i + 1) * kSplitmixGamma);
}

void rmat_fill(std::uint64_t key, std::uint64_t start_ctr, std::uint32_t scale,
               const QuadrantThresholds& t, Edge* out, std::size_t n) {
  std::uint64_t ctr = start_ctr;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t src = 0, des = 0;
    for (std::uint32_t lvl = 0; lvl < scale; ++lvl) {
      const std::uint64_t u = mix64(key + (ctr++ + 1) * kSplitmixGamma) >> 11;
      // quadrant index = number of thresholds at or below u
      const unsigned q = unsigned(u >= t.t_a) + unsigned(u >= t.t_ab) + unsigned(u >= t.t_abc);
      src = (src << 1) | (q >> 1);
      des = (des << 1) | (q & 1);
    }
    out[i] = {src, des};
  }
}

std::size_t match_run(const Edge* e, std::size_t n, EdgeField f, std::uint64_t id) {
  std::size_t i = 0;
  if (f == EdgeField::src) {
    while (i < n && e[i].src == id) ++i;
  } else {
    while (i < n && e[i].des == id) ++i;
  }
  return i;
}

void prefix_sum(const std::uint64_t* deg, std::uint64_t* offv, std::size_t n) {
  std::uint64_t acc = 0;
  offv[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += deg[i];
    offv[i + 1] = acc;
  }
}

MinMaxSum reduce_minmax_sum(const std::uint64_t* v, std::size_t n) {
  assert(n > 0);
  MinMaxSum r{v[0], v[0], 0};
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] < r.min) r.min = v[i];
    if (v[i] > r.max) r.max = v[i];
    r.sum += v[i];
  }
  return r;
}

}  // namespace ref
}  // namespace emg::kernels
