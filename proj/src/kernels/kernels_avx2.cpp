// AVX2 kernel variants. Integer-only, bit-exact against kernels::ref.
// This translation unit is compiled with -mavx2; callers must check
// supported(Level::avx2) before dispatching here.
#include "emgraph/kernels.hpp"

#if defined(EMG_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <bit>
#include <cassert>

#include "emgraph/rng.hpp"

namespace emg::kernels::avx2 {

namespace {

// 64x64 -> low 64 multiply from 32-bit partial products.
inline __m256i mullo64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(a_hi, b), _mm256_mul_epu32(a, b_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix4(__m256i z) {
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ull)));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBull)));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
  return z;
}

inline __m256i states_for(std::uint64_t key, std::uint64_t c0, std::uint64_t stride) {
  // lane e holds key + (c0 + e*stride + 1) * gamma
  return _mm256_set_epi64x(
      static_cast<long long>(key + (c0 + 3 * stride + 1) * kSplitmixGamma),
      static_cast<long long>(key + (c0 + 2 * stride + 1) * kSplitmixGamma),
      static_cast<long long>(key + (c0 + 1 * stride + 1) * kSplitmixGamma),
      static_cast<long long>(key + (c0 + 1) * kSplitmixGamma));
}

}  // namespace

void fill_random(std::uint64_t key, std::uint64_t start_ctr, std::uint64_t* out, std::size_t n) {
  const __m256i step = _mm256_set1_epi64x(static_cast<long long>(4 * kSplitmixGamma));
  __m256i st = states_for(key, start_ctr, 1);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), mix4(st));
    st = _mm256_add_epi64(st, step);
  }
  if (i < n) ref::fill_random(key, start_ctr + i, out + i, n - i);
}

void rmat_fill(std::uint64_t key, std::uint64_t start_ctr, std::uint32_t scale,
               const QuadrantThresholds& t, Edge* out, std::size_t n) {
  const __m256i gamma = _mm256_set1_epi64x(static_cast<long long>(kSplitmixGamma));
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi64x(1);
  // u >= t  <=>  u > t-1 (signed is safe: draws and thresholds are < 2^62)
  const __m256i ta = _mm256_set1_epi64x(static_cast<long long>(t.t_a) - 1);
  const __m256i tab = _mm256_set1_epi64x(static_cast<long long>(t.t_ab) - 1);
  const __m256i tabc = _mm256_set1_epi64x(static_cast<long long>(t.t_abc) - 1);

  std::uint64_t ctr = start_ctr;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4, ctr += 4 * scale) {
    __m256i st = states_for(key, ctr, scale);
    __m256i src = zero, des = zero;
    for (std::uint32_t lvl = 0; lvl < scale; ++lvl) {
      const __m256i u = _mm256_srli_epi64(mix4(st), 11);
      const __m256i q_neg = _mm256_add_epi64(
          _mm256_add_epi64(_mm256_cmpgt_epi64(u, ta), _mm256_cmpgt_epi64(u, tab)),
          _mm256_cmpgt_epi64(u, tabc));
      const __m256i q = _mm256_sub_epi64(zero, q_neg);
      src = _mm256_or_si256(_mm256_slli_epi64(src, 1), _mm256_srli_epi64(q, 1));
      des = _mm256_or_si256(_mm256_slli_epi64(des, 1), _mm256_and_si256(q, one));
      st = _mm256_add_epi64(st, gamma);
    }
    const __m256i lo = _mm256_unpacklo_epi64(src, des);  // s0 d0 s2 d2
    const __m256i hi = _mm256_unpackhi_epi64(src, des);  // s1 d1 s3 d3
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        _mm256_permute2x128_si256(lo, hi, 0x20));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i + 2),
                        _mm256_permute2x128_si256(lo, hi, 0x31));
  }
  if (i < n) ref::rmat_fill(key, ctr, scale, t, out + i, n - i);
}

std::size_t match_run(const Edge* e, std::size_t n, EdgeField f, std::uint64_t id) {
  const __m256i vid = _mm256_set1_epi64x(static_cast<long long>(id));
  std::size_t i = 0;
  while (i + 4 <= n) {
    const __m256i v0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(e + i));
    const __m256i v1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(e + i + 2));
    __m256i k01, k23;
    if (f == EdgeField::src) {
      k01 = _mm256_permute4x64_epi64(v0, 0x08);  // qwords 0,2
      k23 = _mm256_permute4x64_epi64(v1, 0x08);
    } else {
      k01 = _mm256_permute4x64_epi64(v0, 0x0D);  // qwords 1,3
      k23 = _mm256_permute4x64_epi64(v1, 0x0D);
    }
    const __m256i keys = _mm256_permute2x128_si256(k01, k23, 0x20);
    const __m256i eq = _mm256_cmpeq_epi64(keys, vid);
    const unsigned mask =
        static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(eq)));
    if (mask != 0xFu) return i + std::countr_one(mask);
    i += 4;
  }
  while (i < n && edge_key(e[i], f) == id) ++i;
  return i;
}

void prefix_sum(const std::uint64_t* deg, std::uint64_t* offv, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i carry = zero;
  offv[0] = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(deg + i));
    __m256i t1 = _mm256_permute4x64_epi64(x, 0x90);  // a a b c
    t1 = _mm256_blend_epi32(t1, zero, 0x03);         // 0 a b c
    x = _mm256_add_epi64(x, t1);
    const __m256i t2 = _mm256_permute2x128_si256(x, x, 0x08);  // 0 0 x0 x1
    x = _mm256_add_epi64(x, t2);
    x = _mm256_add_epi64(x, carry);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(offv + 1 + i), x);
    carry = _mm256_permute4x64_epi64(x, 0xFF);
  }
  std::uint64_t acc = offv[i];
  for (; i < n; ++i) {
    acc += deg[i];
    offv[i + 1] = acc;
  }
}

MinMaxSum reduce_minmax_sum(const std::uint64_t* v, std::size_t n) {
  assert(n > 0);
  if (n < 8) return ref::reduce_minmax_sum(v, n);
  __m256i mn = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v));
  __m256i mx = mn;
  __m256i sm = mn;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i));
    mn = _mm256_blendv_epi8(mn, x, _mm256_cmpgt_epi64(mn, x));
    mx = _mm256_blendv_epi8(x, mx, _mm256_cmpgt_epi64(mx, x));
    sm = _mm256_add_epi64(sm, x);
  }
  alignas(32) std::uint64_t lmn[4], lmx[4], lsm[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lmn), mn);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lmx), mx);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lsm), sm);
  MinMaxSum r{lmn[0], lmx[0], 0};
  for (int k = 0; k < 4; ++k) {
    if (lmn[k] < r.min) r.min = lmn[k];
    if (lmx[k] > r.max) r.max = lmx[k];
    r.sum += lsm[k];
  }
  for (; i < n; ++i) {
    if (v[i] < r.min) r.min = v[i];
    if (v[i] > r.max) r.max = v[i];
    r.sum += v[i];
  }
  return r;
}

}  // namespace emg::kernels::avx2

#endif  // EMG_HAVE_AVX2_KERNELS
