#pragma once

// Data-parallel inner loops used by the load-curve pipeline and the
// simulator reductions. Each kernel has a scalar reference implementation
// and an AVX2 variant; the variant is chosen once at runtime from CPUID.
// Setting RTEP_FORCE_SCALAR=1 in the environment pins the scalar path.

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

namespace rtep::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

// The ISA the dispatched entry points below are bound to.
Isa active_isa();

// True when the CPU (and build) can run the given ISA.
bool isa_available(Isa isa);

// out[t] = in[t + 1] - in[t]; out.size() must be in.size() - 1.
void adjacent_differences(std::span<const double> in, std::span<double> out);

double sum(std::span<const double> in);

// {min, max}; in must be non-empty.
std::pair<double, double> min_max(std::span<const double> in);

// out[t] = factor * in[t]
void scale(std::span<const double> in, double factor, std::span<double> out);

// Sum of weights[t] where values[t] > threshold.
double masked_sum(std::span<const double> values, std::span<const double> weights,
                  double threshold);

// Explicit per-ISA tables, exposed so the variants can be equivalence-tested
// against each other.
struct Table {
  void (*adjacent_differences)(const double* in, std::size_t n, double* out);
  double (*sum)(const double* in, std::size_t n);
  void (*min_max)(const double* in, std::size_t n, double* lo, double* hi);
  void (*scale)(const double* in, std::size_t n, double factor, double* out);
  double (*masked_sum)(const double* values, const double* weights, std::size_t n,
                       double threshold);
};

const Table& scalar_table();
// Falls back to the scalar table when AVX2 is not available.
const Table& avx2_table();

}  // namespace rtep::kernels
