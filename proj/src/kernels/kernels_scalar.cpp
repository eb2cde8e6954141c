#include "kernels_internal.hpp"

#include <algorithm>

namespace rtep::kernels::detail {

void adjacent_differences_scalar(const double* in, std::size_t n, double* out) {
  for (std::size_t t = 0; t + 1 < n; ++t) out[t] = in[t + 1] - in[t];
}

// Four interleaved partial sums, combined pairwise. The AVX2 variant keeps
// the same lane layout so both paths round identically.
double sum_scalar(const double* in, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    acc[0] += in[t];
    acc[1] += in[t + 1];
    acc[2] += in[t + 2];
    acc[3] += in[t + 3];
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; t < n; ++t) total += in[t];
  return total;
}

void min_max_scalar(const double* in, std::size_t n, double* lo, double* hi) {
  double a = in[0];
  double b = in[0];
  for (std::size_t t = 1; t < n; ++t) {
    a = std::min(a, in[t]);
    b = std::max(b, in[t]);
  }
  *lo = a;
  *hi = b;
}

void scale_scalar(const double* in, std::size_t n, double factor, double* out) {
  for (std::size_t t = 0; t < n; ++t) out[t] = factor * in[t];
}

double masked_sum_scalar(const double* values, const double* weights, std::size_t n,
                         double threshold) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      if (values[t + l] > threshold) acc[l] += weights[t + l];
    }
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; t < n; ++t) {
    if (values[t] > threshold) total += weights[t];
  }
  return total;
}

}  // namespace rtep::kernels::detail
