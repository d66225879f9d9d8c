#include <atomic>
#include <stdexcept>

#include "emgraph/kernels.hpp"

namespace emg::kernels {

namespace {

std::atomic<Level> g_level{best_supported()};

}  // namespace

const char* level_name(Level l) {
  switch (l) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
  }
  return "?";
}

bool supported(Level l) {
  if (l == Level::scalar) return true;
#if defined(EMG_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  if (l == Level::avx2) return __builtin_cpu_supports("avx2") != 0;
#endif
  return false;
}

Level best_supported() {
  return supported(Level::avx2) ? Level::avx2 : Level::scalar;
}

void select(Level l) {
  if (!supported(l))
    throw std::runtime_error(std::string("kernel level not supported on this cpu: ") + level_name(l));
  g_level.store(l, std::memory_order_relaxed);
}

Level active() { return g_level.load(std::memory_order_relaxed); }

void fill_random(std::uint64_t key, std::uint64_t start_ctr, std::uint64_t* out, std::size_t n) {
#if defined(EMG_HAVE_AVX2_KERNELS)
  if (active() == Level::avx2) return avx2::fill_random(key, start_ctr, out, n);
#endif
  ref::fill_random(key, start_ctr, out, n);
}

void rmat_fill(std::uint64_t key, std::uint64_t start_ctr, std::uint32_t scale,
               const QuadrantThresholds& t, Edge* out, std::size_t n) {
#if defined(EMG_HAVE_AVX2_KERNELS)
  if (active() == Level::avx2) return avx2::rmat_fill(key, start_ctr, scale, t, out, n);
#endif
  ref::rmat_fill(key, start_ctr, scale, t, out, n);
}

std::size_t match_run(const Edge* e, std::size_t n, EdgeField f, std::uint64_t id) {
#if defined(EMG_HAVE_AVX2_KERNELS)
  if (active() == Level::avx2) return avx2::match_run(e, n, f, id);
#endif
  return ref::match_run(e, n, f, id);
}

void prefix_sum(const std::uint64_t* deg, std::uint64_t* offv, std::size_t n) {
#if defined(EMG_HAVE_AVX2_KERNELS)
  if (active() == Level::avx2) return avx2::prefix_sum(deg, offv, n);
#endif
  ref::prefix_sum(deg, offv, n);
}

MinMaxSum reduce_minmax_sum(const std::uint64_t* v, std::size_t n) {
#if defined(EMG_HAVE_AVX2_KERNELS)
  if (active() == Level::avx2) return avx2::reduce_minmax_sum(v, n);
#endif
  return ref::reduce_minmax_sum(v, n);
}

}  // namespace emg::kernels
