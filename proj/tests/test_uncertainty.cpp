#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rtep/error.hpp"
#include "rtep/uncertainty.hpp"

using namespace rtep;

namespace {

HourlyCurve curve(std::vector<double> v) { return {"1", 0, std::move(v)}; }

std::vector<double> deltas_of(const SlotFragment& f, int slot) {
  auto d = f.events[slot];
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("ramp events") {
  const auto ev = extract_ramp_events(curve({5, 3, 8, 6}));
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].start_level == 5);
  CHECK(ev[0].delta == -2);
  CHECK(ev[1].start_level == 3);
  CHECK(ev[1].delta == 5);
  CHECK(ev[2].start_level == 8);
  CHECK(ev[2].delta == -2);

  for (const auto& e : extract_ramp_events(curve({4, 4, 4}))) {
    CHECK(e.start_level == 4);
    CHECK(e.delta == 0);
  }
  for (const auto& e : extract_ramp_events(curve({1, 2, 3}))) CHECK(e.delta == 1);
  CHECK_THROWS_AS(extract_ramp_events(curve({1})), Error);
}

TEST_CASE("duration curve attaches deltas to their start hour") {
  const DurationCurve d = build_duration_curve(curve({5, 3, 8, 6}));
  CHECK(d.levels == std::vector<double>{8, 6, 5, 3});
  REQUIRE(d.deltas.size() == 4);
  CHECK(*d.deltas[0] == -2);
  CHECK_FALSE(d.deltas[1].has_value());
  CHECK(*d.deltas[2] == -2);
  CHECK(*d.deltas[3] == 5);

  CHECK(build_duration_curve(curve({9, 7, 4, 1})).levels == std::vector<double>{9, 7, 4, 1});
  const DurationCurve ties = build_duration_curve(curve({7, 7}));
  CHECK(ties.levels == std::vector<double>{7, 7});
  CHECK(ties.hours == std::vector<int>{0, 1});
}

TEST_CASE("discretize the four-hour example") {
  const DurationCurve d = build_duration_curve(curve({5, 3, 8, 6}));
  const int two[] = {2, 2};
  const SlotFragment f = discretize(d, two);
  CHECK(f.levels == std::vector<double>{7, 4});
  CHECK(deltas_of(f, 0) == std::vector<double>{-2});
  CHECK(deltas_of(f, 1) == std::vector<double>{-2, 5});

  const int one[] = {4};
  CHECK(discretize(d, one).levels == std::vector<double>{5.5});
  const int unit[] = {1, 1, 1, 1};
  CHECK(discretize(d, unit).levels == d.levels);
  const int bad[] = {2, 1};
  CHECK_THROWS_AS(discretize(d, bad), Error);
}

TEST_CASE("sets from the four-hour example") {
  const int durations[] = {2, 2};
  const SlottedLoadModel m = build_load_model({{5, 3, 8, 6}}, 1, 0.0, durations);
  const double lambda[] = {1};
  const UncertaintyModel u = build_uncertainty(m, 0.05, lambda);
  CHECK(u.ldcu.halfwidth(0, 0, 0) == doctest::Approx(0.35));
  CHECK(u.hlru.lower(0, 0, 0) == -2);
  CHECK(u.hlru.upper(0, 0, 0) == 0);
  CHECK(u.hlru.lower(0, 0, 1) == -2);
  CHECK(u.hlru.upper(0, 0, 1) == 5);

  const UncertaintyModel z = build_uncertainty(m, 0.0, lambda);
  CHECK(z.ldcu.halfwidth(0, 0, 0) == 0);
  const double negative[] = {-1};
  CHECK_THROWS_AS(build_ldcu(m, 0.05, negative), Error);
  const double fractional[] = {0.5};
  CHECK_THROWS_AS(build_ldcu(m, 0.05, fractional), Error);
  CHECK_THROWS_AS(build_ldcu(m, -0.1, lambda), Error);
}

TEST_CASE("growth scales levels and ramps") {
  const int durations[] = {2, 2};
  const SlottedLoadModel m = build_load_model({{5, 3, 8, 6}}, 3, 0.05, durations);
  CHECK(m.levels(0, 2, 0) == doctest::Approx(7 * 1.05 * 1.05));
  const auto& ev = m.ramp_events(0, 2, 1);
  CHECK(*std::max_element(ev.begin(), ev.end()) == doctest::Approx(5 * 1.05 * 1.05));
}

TEST_CASE("energy is conserved by the slot model") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(100.0, 30.0);
  std::vector<double> v(20000);
  for (double& x : v) x = n(rng);
  const auto durations = equal_slot_durations(static_cast<int>(v.size()), 12);
  const SlottedLoadModel m = build_load_model({v}, 1, 0.0, durations);
  double slots = 0.0;
  for (int h = 0; h < 12; ++h) slots += durations[h] * m.levels(0, 0, h);
  const double hours = std::accumulate(v.begin(), v.end(), 0.0);
  CHECK(std::abs(slots - hours) <= 1e-9 * std::abs(hours));
  for (int h = 1; h < 12; ++h) CHECK(m.levels(0, 0, h) <= m.levels(0, 0, h - 1));
}

TEST_CASE("membership") {
  const int durations[] = {1, 1};
  const SlottedLoadModel m = build_load_model({{10, 20}, {30, 40}}, 1, 0.0, durations);
  const double one[] = {1};
  UncertaintyModel u = build_uncertainty(m, 0.1, one);
  const double hw0 = u.ldcu.halfwidth(0, 0, 0);
  const double hw1 = u.ldcu.halfwidth(1, 0, 0);

  const double a[] = {hw0, 0.0};
  CHECK(contains_slot(u, SetKind::kLdcu, 0, 0, a));
  const double b[] = {hw0, hw1};
  CHECK_FALSE(contains_slot(u, SetKind::kLdcu, 0, 0, b));
  const double c[] = {0.5 * hw0, -0.5 * hw1};
  CHECK(contains_slot(u, SetKind::kLdcu, 0, 0, c));

  u.ldcu.budget = {0, 0};
  const double zero[] = {0.0, 0.0};
  CHECK(contains_slot(u, SetKind::kLdcu, 0, 0, zero));
  CHECK_FALSE(contains_slot(u, SetKind::kLdcu, 0, 0, a));

  const double over[] = {u.hlru.upper(0, 0, 0) + 1.0, 0.0};
  CHECK_FALSE(contains_slot(u, SetKind::kHlru, 0, 0, over));
  const double wrong[] = {0.0};
  CHECK_THROWS_AS(contains_slot(u, SetKind::kHlru, 0, 0, wrong), Error);
}

TEST_CASE("extreme points") {
  const int durations[] = {2};
  const SlottedLoadModel m = build_load_model({{10, 12}, {20, 16}}, 1, 0.0, durations);
  const double one[] = {1};
  const UncertaintyModel u1 = build_uncertainty(m, 0.1, one);
  const auto p1 = enumerate_extreme_points(u1, SetKind::kLdcu, 0, 0);
  CHECK(p1.size() == 4);
  CHECK(count_extreme_points(u1, SetKind::kLdcu, 0, 0) == 4);
  for (const auto& p : p1) {
    CHECK(contains_slot(u1, SetKind::kLdcu, 0, 0, p));
    CHECK((p[0] == 0.0) != (p[1] == 0.0));
  }

  const double two[] = {2};
  const UncertaintyModel u2 = build_uncertainty(m, 0.1, two);
  const auto p2 = enumerate_extreme_points(u2, SetKind::kLdcu, 0, 0);
  CHECK(p2.size() == 4);
  for (const auto& p : p2) {
    CHECK(std::abs(p[0]) == doctest::Approx(u2.ldcu.halfwidth(0, 0, 0)));
    CHECK(std::abs(p[1]) == doctest::Approx(u2.ldcu.halfwidth(1, 0, 0)));
  }

  const double none[] = {0};
  const UncertaintyModel u0 = build_uncertainty(m, 0.1, none);
  const auto p0 = enumerate_extreme_points(u0, SetKind::kLdcu, 0, 0);
  REQUIRE(p0.size() == 1);
  CHECK(p0[0] == std::vector<double>{0.0, 0.0});

  const auto corners = enumerate_extreme_points(u1, SetKind::kHlru, 0, 0);
  CHECK(corners.size() == 4);
  for (const auto& p : corners) CHECK(contains_slot(u1, SetKind::kHlru, 0, 0, p));

  CHECK_THROWS_AS(enumerate_extreme_points(u1, SetKind::kLdcu, 0, 0, 3), Error);
}

TEST_CASE("worst case of a linear function is attained at an extreme point") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int durations[] = {2};
  const SlottedLoadModel m = build_load_model({{10, 10}, {20, 20}, {15, 15}}, 1, 0.0, durations);
  for (int lambda = 0; lambda <= 3; ++lambda) {
    const double bl[] = {static_cast<double>(lambda)};
    const UncertaintyModel set = build_uncertainty(m, 0.2, bl);
    const double c[] = {u(rng), u(rng), u(rng)};
    double best_vertex = -1e300;
    for (const auto& p : enumerate_extreme_points(set, SetKind::kLdcu, 0, 0)) {
      best_vertex = std::max(best_vertex, c[0] * p[0] + c[1] * p[1] + c[2] * p[2]);
    }
    double best_sample = -1e300;
    for (int i = 0; i < 20000; ++i) {
      double p[3];
      for (int b = 0; b < 3; ++b) p[b] = u(rng) * set.ldcu.halfwidth(b, 0, 0);
      if (!contains_slot(set, SetKind::kLdcu, 0, 0, p)) continue;
      best_sample = std::max(best_sample, c[0] * p[0] + c[1] * p[1] + c[2] * p[2]);
    }
    CHECK(best_sample <= best_vertex + 1e-9);
  }
}
