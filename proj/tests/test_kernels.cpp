#include <doctest.h>

#include <random>
#include <vector>

#include "rtep/kernels.hpp"

using namespace rtep::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(50.0, 20.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels on a small vector") {
  const std::vector<double> v = {5, 3, 8, 6};
  const Table& t = scalar_table();
  double out[3];
  t.adjacent_differences(v.data(), v.size(), out);
  CHECK(out[0] == -2);
  CHECK(out[1] == 5);
  CHECK(out[2] == -2);
  CHECK(t.sum(v.data(), v.size()) == 22);
  double lo = 0, hi = 0;
  t.min_max(v.data(), v.size(), &lo, &hi);
  CHECK(lo == 3);
  CHECK(hi == 8);
  const std::vector<double> w = {1, 1, 1, 10};
  CHECK(t.masked_sum(v.data(), w.data(), v.size(), 5.0) == 11);
}

TEST_CASE("AVX2 matches scalar") {
  const Table& s = scalar_table();
  const Table& a = avx2_table();
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1000u, 8760u}) {
    CAPTURE(n);
    const auto v = random_vector(n, n);
    const auto w = random_vector(n, n + 1);
    CHECK(a.sum(v.data(), n) == doctest::Approx(s.sum(v.data(), n)).epsilon(1e-12));
    double lo1, hi1, lo2, hi2;
    s.min_max(v.data(), n, &lo1, &hi1);
    a.min_max(v.data(), n, &lo2, &hi2);
    CHECK(lo1 == lo2);
    CHECK(hi1 == hi2);
    std::vector<double> o1(n), o2(n);
    s.scale(v.data(), n, 1.05, o1.data());
    a.scale(v.data(), n, 1.05, o2.data());
    CHECK(o1 == o2);
    if (n > 1) {
      std::vector<double> d1(n - 1), d2(n - 1);
      s.adjacent_differences(v.data(), n, d1.data());
      a.adjacent_differences(v.data(), n, d2.data());
      CHECK(d1 == d2);
    }
    CHECK(a.masked_sum(v.data(), w.data(), n, 50.0) ==
          doctest::Approx(s.masked_sum(v.data(), w.data(), n, 50.0)).epsilon(1e-12));
  }
}

TEST_CASE("dispatched entry points") {
  const std::vector<double> v = {1, 2, 3};
  CHECK(sum(v) == 6);
  CHECK(min_max(v) == std::pair<double, double>{1, 3});
  CHECK(isa_available(Isa::kScalar));
  MESSAGE("active isa: " << to_string(active_isa()));
}
