#include "rtep/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace rtep::kernels {
namespace {

const Table kScalar = {
    detail::adjacent_differences_scalar, detail::sum_scalar, detail::min_max_scalar,
    detail::scale_scalar, detail::masked_sum_scalar,
};

#if defined(RTEP_HAVE_AVX2)
const Table kAvx2 = {
    detail::adjacent_differences_avx2, detail::sum_avx2, detail::min_max_avx2,
    detail::scale_avx2, detail::masked_sum_avx2,
};
#endif

bool force_scalar() {
  const char* env = std::getenv("RTEP_FORCE_SCALAR");
  return env != nullptr && std::string(env) != "0" && std::string(env) != "";
}

Isa select_isa() {
  if (force_scalar()) return Isa::kScalar;
  return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

const Table& active_table() {
  static const Table& table = active_isa() == Isa::kAvx2 ? avx2_table() : scalar_table();
  return table;
}

void check_size(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(RTEP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const Table& scalar_table() { return kScalar; }

const Table& avx2_table() {
#if defined(RTEP_HAVE_AVX2)
  if (isa_available(Isa::kAvx2)) return kAvx2;
#endif
  return kScalar;
}

void adjacent_differences(std::span<const double> in, std::span<double> out) {
  check_size(!in.empty() && out.size() + 1 == in.size(),
             "adjacent_differences: out must have in.size() - 1 elements");
  active_table().adjacent_differences(in.data(), in.size(), out.data());
}

double sum(std::span<const double> in) { return active_table().sum(in.data(), in.size()); }

std::pair<double, double> min_max(std::span<const double> in) {
  check_size(!in.empty(), "min_max: empty input");
  double lo = 0.0;
  double hi = 0.0;
  active_table().min_max(in.data(), in.size(), &lo, &hi);
  return {lo, hi};
}

void scale(std::span<const double> in, double factor, std::span<double> out) {
  check_size(in.size() == out.size(), "scale: size mismatch");
  active_table().scale(in.data(), in.size(), factor, out.data());
}

double masked_sum(std::span<const double> values, std::span<const double> weights,
                  double threshold) {
  check_size(values.size() == weights.size(), "masked_sum: size mismatch");
  return active_table().masked_sum(values.data(), weights.data(), values.size(), threshold);
}

}  // namespace rtep::kernels
