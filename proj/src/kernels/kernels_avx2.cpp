// Compiled with -mavx2. Only reached after a CPUID check.

#include "kernels_internal.hpp"

#include <immintrin.h>

#include <algorithm>

namespace rtep::kernels::detail {

void adjacent_differences_avx2(const double* in, std::size_t n, double* out) {
  if (n < 2) return;
  const std::size_t m = n - 1;
  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    const __m256d cur = _mm256_loadu_pd(in + t);
    const __m256d next = _mm256_loadu_pd(in + t + 1);
    _mm256_storeu_pd(out + t, _mm256_sub_pd(next, cur));
  }
  for (; t < m; ++t) out[t] = in[t + 1] - in[t];
}

double sum_avx2(const double* in, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(in + t));
  // lanes {0,1,2,3} -> (0+2) + (1+3), matching the scalar reduction order
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double total = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
  for (; t < n; ++t) total += in[t];
  return total;
}

void min_max_avx2(const double* in, std::size_t n, double* lo, double* hi) {
  std::size_t t = 0;
  double a = in[0];
  double b = in[0];
  if (n >= 4) {
    __m256d vmin = _mm256_loadu_pd(in);
    __m256d vmax = vmin;
    for (t = 4; t + 4 <= n; t += 4) {
      const __m256d x = _mm256_loadu_pd(in + t);
      vmin = _mm256_min_pd(vmin, x);
      vmax = _mm256_max_pd(vmax, x);
    }
    alignas(32) double mins[4];
    alignas(32) double maxs[4];
    _mm256_store_pd(mins, vmin);
    _mm256_store_pd(maxs, vmax);
    a = std::min(std::min(mins[0], mins[1]), std::min(mins[2], mins[3]));
    b = std::max(std::max(maxs[0], maxs[1]), std::max(maxs[2], maxs[3]));
  }
  for (; t < n; ++t) {
    a = std::min(a, in[t]);
    b = std::max(b, in[t]);
  }
  *lo = a;
  *hi = b;
}

void scale_avx2(const double* in, std::size_t n, double factor, double* out) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) _mm256_storeu_pd(out + t, _mm256_mul_pd(f, _mm256_loadu_pd(in + t)));
  for (; t < n; ++t) out[t] = factor * in[t];
}

double masked_sum_avx2(const double* values, const double* weights, std::size_t n,
                       double threshold) {
  const __m256d th = _mm256_set1_pd(threshold);
  __m256d acc = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(values + t), th, _CMP_GT_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(weights + t)));
  }
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double total = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
  for (; t < n; ++t) {
    if (values[t] > threshold) total += weights[t];
  }
  return total;
}

}  // namespace rtep::kernels::detail
