#pragma once

#include <cstddef>

namespace rtep::kernels::detail {

void adjacent_differences_scalar(const double* in, std::size_t n, double* out);
double sum_scalar(const double* in, std::size_t n);
void min_max_scalar(const double* in, std::size_t n, double* lo, double* hi);
void scale_scalar(const double* in, std::size_t n, double factor, double* out);
double masked_sum_scalar(const double* values, const double* weights, std::size_t n,
                         double threshold);

#if defined(RTEP_HAVE_AVX2)
void adjacent_differences_avx2(const double* in, std::size_t n, double* out);
double sum_avx2(const double* in, std::size_t n);
void min_max_avx2(const double* in, std::size_t n, double* lo, double* hi);
void scale_avx2(const double* in, std::size_t n, double factor, double* out);
double masked_sum_avx2(const double* values, const double* weights, std::size_t n,
                       double threshold);
#endif

}  // namespace rtep::kernels::detail
