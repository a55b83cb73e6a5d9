#include "mecplace/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <limits>

namespace mecplace::kernels::detail {

// Per-lane add + min: same operation and order per element as the scalar
// reference, so results are bit-identical.
__attribute__((target("avx2"))) void min_plus_relax_avx2(double* dst, const double* via,
                                                         double add, std::size_t n) {
  const __m256d vadd = _mm256_set1_pd(add);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cand = _mm256_add_pd(vadd, _mm256_loadu_pd(via + i));
    const __m256d cur = _mm256_loadu_pd(dst + i);
    _mm256_storeu_pd(dst + i, _mm256_min_pd(cand, cur));
  }
  for (; i < n; ++i) {
    const double cand = add + via[i];
    if (cand < dst[i]) dst[i] = cand;
  }
}

__attribute__((target("avx2"))) void min_inplace_avx2(double* dst, const double* src,
                                                      std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(dst + i);
    const __m256d b = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_min_pd(b, a));
  }
  for (; i < n; ++i) {
    if (src[i] < dst[i]) dst[i] = src[i];
  }
}

// Lane-wise accumulation; association order differs from the scalar loop,
// so callers comparing backends allow a small relative tolerance.
__attribute__((target("avx2"))) double sum_avx2(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  double out = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
  for (; i < n; ++i) out += v[i];
  return out;
}

__attribute__((target("avx2"))) double max_avx2(const double* v, std::size_t n) {
  __m256d acc = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d m2 = _mm_max_pd(lo, hi);
  double out = _mm_cvtsd_f64(_mm_max_sd(m2, _mm_unpackhi_pd(m2, m2)));
  for (; i < n; ++i) out = v[i] > out ? v[i] : out;
  return out;
}

}  // namespace mecplace::kernels::detail

#else  // non-x86: never dispatched, present only to satisfy the linker

namespace mecplace::kernels::detail {

void min_plus_relax_avx2(double* dst, const double* via, double add, std::size_t n) {
  min_plus_relax_scalar(dst, via, add, n);
}
void min_inplace_avx2(double* dst, const double* src, std::size_t n) {
  min_inplace_scalar(dst, src, n);
}
double sum_avx2(const double* v, std::size_t n) { return sum_scalar(v, n); }
double max_avx2(const double* v, std::size_t n) { return max_scalar(v, n); }

}  // namespace mecplace::kernels::detail

#endif
