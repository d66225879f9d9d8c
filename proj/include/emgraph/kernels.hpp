// Hot inner loops: scalar reference kernels plus AVX2 variants selected at
// runtime. Every variant is bit-exact against the scalar reference (integer
// arithmetic only); the equivalence suite enforces it.
#pragma once

#include <cstddef>
#include <cstdint>

#include "emgraph/core.hpp"

namespace emg::kernels {

enum class Level : std::uint8_t { scalar = 0, avx2 = 1 };

const char* level_name(Level);
Level best_supported();
bool supported(Level);
void select(Level);
Level active();

// R-MAT quadrant thresholds in 53-bit fixed point. Draws are quantized to
// 53 bits so a threshold of exactly 1.0 saturates (degenerate quadrants
// stay degenerate) and lane compares stay in signed 64-bit range.
struct QuadrantThresholds {
  std::uint64_t t_a;
  std::uint64_t t_ab;
  std::uint64_t t_abc;
};
QuadrantThresholds quadrant_thresholds(double a, double b, double c);

// out[i] = draw (start_ctr + i) of the stream with the given key.
void fill_random(std::uint64_t key, std::uint64_t start_ctr, std::uint64_t* out, std::size_t n);

// n edges; edge i consumes draws [start_ctr + i*scale, start_ctr + (i+1)*scale).
void rmat_fill(std::uint64_t key, std::uint64_t start_ctr, std::uint32_t scale,
               const QuadrantThresholds& t, Edge* out, std::size_t n);

// Length of the leading run with edge field == id (edges sorted on that field).
std::size_t match_run(const Edge* e, std::size_t n, EdgeField f, std::uint64_t id);

// offv[0] = 0; offv[i] = offv[i-1] + deg[i-1]. offv has n+1 slots.
void prefix_sum(const std::uint64_t* deg, std::uint64_t* offv, std::size_t n);

struct MinMaxSum {
  std::uint64_t min;
  std::uint64_t max;
  std::uint64_t sum;
};
// Requires n > 0 and values < 2^63.
MinMaxSum reduce_minmax_sum(const std::uint64_t* v, std::size_t n);

// Scalar reference implementations (always available; the equivalence tests
// compare dispatched output against these).
namespace ref {
void fill_random(std::uint64_t key, std::uint64_t start_ctr, std::uint64_t* out, std::size_t n);
void rmat_fill(std::uint64_t key, std::uint64_t start_ctr, std::uint32_t scale,
               const QuadrantThresholds& t, Edge* out, std::size_t n);
std::size_t match_run(const Edge* e, std::size_t n, EdgeField f, std::uint64_t id);
void prefix_sum(const std::uint64_t* deg, std::uint64_t* offv, std::size_t n);
MinMaxSum reduce_minmax_sum(const std::uint64_t* v, std::size_t n);
}  // namespace ref

#if defined(__x86_64__) || defined(_M_X64)
#define EMG_HAVE_AVX2_KERNELS 1
namespace avx2 {
void fill_random(std::uint64_t key, std::uint64_t start_ctr, std::uint64_t* out, std::size_t n);
void rmat_fill(std::uint64_t key, std::uint64_t start_ctr, std::uint32_t scale,
               const QuadrantThresholds& t, Edge* out, std::size_t n);
std::size_t match_run(const Edge* e, std::size_t n, EdgeField f, std::uint64_t id);
void prefix_sum(const std::uint64_t* deg, std::uint64_t* offv, std::size_t n);
MinMaxSum reduce_minmax_sum(const std::uint64_t* v, std::size_t n);
}  // namespace avx2
#endif

}  // namespace emg::kernels
