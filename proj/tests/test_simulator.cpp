#include <doctest.h>

#include <cmath>

#include "rtep/error.hpp"
#include "rtep/simulator.hpp"
#include "support.hpp"

using namespace rtep;
using namespace rtep::testing;

namespace {

UncertaintyModel three_bus_sets(double budget) {
  const int durations[] = {2, 2};
  const SlottedLoadModel m =
      build_load_model({{10, 30, 20, 25}, {40, 35, 60, 20}, {15, 15, 16, 17}}, 2, 0.05, durations);
  const double b[] = {budget};
  return build_uncertainty(m, 0.1, b);
}

}  // namespace

TEST_CASE("truncated normal stays in bounds") {
  std::mt19937_64 rng(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_truncated_normal(rng, 1.0, 1.0);
    REQUIRE(std::abs(x) <= 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sample_truncated_normal(rng, 0.0, 1.0) == 0.0);
  CHECK(sample_truncated_normal(rng, 1.0, 0.0) == 0.0);
}

TEST_CASE("sampled points lie in their sets") {
  for (double budget : {0.0, 1.0, 2.0, 3.0}) {
    const UncertaintyModel u = three_bus_sets(budget);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
      CHECK(contains(u, sample_ldcu_point(u, rng)));
      CHECK(contains(u, sample_hlru_point(u, rng)));
    }
  }
}

TEST_CASE("uniform ramp draws cover the box") {
  const UncertaintyModel u = three_bus_sets(1.0);
  std::mt19937_64 rng(8);
  double mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) mean += sample_hlru_point(u, rng).epsilon(1, 0, 1);
  const double lo = u.hlru.lower(1, 0, 1);
  const double hi = u.hlru.upper(1, 0, 1);
  CHECK(mean / n == doctest::Approx(0.5 * (lo + hi)).epsilon(0.05).scale(hi - lo));
}

TEST_CASE("sampling is reproducible per seed") {
  const UncertaintyModel u = three_bus_sets(2.0);
  ScenarioConfig c;
  c.count = 20;
  c.seed = 42;
  const auto a = sample_ldcu(u, c);
  const auto b = sample_ldcu(u, c);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].epsilon.data() == b[i].epsilon.data());
  c.seed = 43;
  CHECK(sample_ldcu(u, c)[0].epsilon.data() != a[0].epsilon.data());
}

TEST_CASE("shedding is priced per MWh") {
  const PlanningSystem s = two_bus_system();
  const AssetCatalog c = AssetCatalog::build(s, {});
  SlotContext slot = two_bus_slot(48.0);
  slot.units[0].weight = 1e-5;
  ScenarioConfig cfg;
  cfg.include_hlru = false;
  SlotDispatcher d(s, c, slot, cfg);
  const double zero[] = {0.0, 0.0};
  const SlotOutcome o = d.run(zero, zero);
  CHECK(o.shed_mw == doctest::Approx(2.0));
  // 2 MWh at 7000 $/MWh, in M$.
  CHECK(o.shed_cost * 1e6 == doctest::Approx(14000.0));
  CHECK(o.fuel_cost == doctest::Approx(48.0e-5));

  const double more[] = {0.0, 5.0};
  CHECK(d.run(more, zero).shed_mw == doctest::Approx(7.0));
  const double less[] = {0.0, -5.0};
  CHECK(d.run(less, zero).shed_mw == doctest::Approx(0.0).epsilon(1e-9));

  ScenarioConfig bad;
  bad.shedding_price = 0.0;
  CHECK_THROWS_AS(SlotDispatcher(s, c, slot, bad), Error);
}

TEST_CASE("ramp stage sheds what the ramp limit cannot follow") {
  PlanningSystem s = two_bus_system();
  const AssetCatalog c = AssetCatalog::build(s, {});
  SlotContext slot = one_bus_ramp_slot();
  slot.units[0].weight = 1e-5;
  ScenarioConfig cfg;
  cfg.ramp_reference = RampReference::kBase;
  SlotDispatcher d(s, c, slot, cfg);
  const double zero[] = {0.0};
  const double up[] = {15.0};
  CHECK(d.run(zero, up).shed_mw == doctest::Approx(5.0));
  const double down[] = {-30.0};
  CHECK(d.run(zero, down).shed_mw == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("metrics add up") {
  PlanningSystem s = two_bus_system();
  s.existing_generators[0].cost_marginal = 1e-4;
  const SlottedLoadModel loads = flat_loads(s, {0.0, 50.0}, 4, 1);
  const double b[] = {1};
  const UncertaintyModel u = build_uncertainty(loads, 0.4, b);
  const AssetCatalog c = AssetCatalog::build(s, {});
  Plan p = Plan::empty(c, 1, 1);
  p.status[0][0] = 1;
  p.dispatch[0][0] = 50.0;
  ScenarioConfig cfg;
  cfg.count = 200;
  cfg.seed = 5;
  const SimulationMetrics m = evaluate(p, s, c, loads, u, cfg);
  CHECK(m.scenarios.size() == 200);
  CHECK(m.etc == doctest::Approx(m.eoc + m.elc));
  // One year, undiscounted: the shedding cost is the price times the energy.
  CHECK(m.elc == doctest::Approx(m.eens * 7000.0 * 1e-6));
  CHECK(m.eens > 0.0);
  CHECK(m.lolh > 0.0);
  CHECK(m.lolh < 4.0);
  CHECK(m.max_shed_mw <= 20.0 - 10.0 + 1e-6);
  REQUIRE(m.years.size() == 1);
  CHECK(m.years[0].eens == doctest::Approx(m.eens));

  cfg.threads = 3;
  const SimulationMetrics t = evaluate(p, s, c, loads, u, cfg);
  CHECK(t.etc == m.etc);
  CHECK(t.eens == m.eens);
}
