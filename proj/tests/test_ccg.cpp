#include <doctest.h>

#include "rtep/ccg.hpp"
#include "rtep/error.hpp"
#include "rtep/master.hpp"
#include "rtep/oracle.hpp"
#include "support.hpp"

using namespace rtep;
using namespace rtep::testing;

namespace {

UncertaintyModel sets_for(const SlottedLoadModel& loads, double fraction, double budget) {
  const double b[] = {budget};
  return build_uncertainty(loads, fraction, b);
}

// Triangle: generator at bus 1, load 100 at bus 3, equal reactances, so the
// direct line carries two thirds of the transfer and overloads at 60 MW. A
// device shifting 20 MW off the direct line relieves it.
PlanningSystem triangle() {
  PlanningSystem s;
  s.name = "tri";
  s.buses = {{"1", false, 0}, {"2", false, 0}, {"3", true, 0}};
  s.corridors = {{"1-3", "1", "3", 0.1, 60.0, 1, 2, 10.0},
                 {"1-2", "1", "2", 0.1, 100.0, 1, 1, 10.0},
                 {"2-3", "2", "3", 0.1, 100.0, 1, 1, 10.0}};
  s.existing_generators = {{"G", "1", 0.0, 200.0, 200.0, 200.0, 0.0, 0.001}};
  s.facts_types = {{"F", 30.0, 1.0}};
  s.candidate_line_corridors = {"1-3"};
  s.candidate_facts_corridors = {"1-3"};
  s.horizon.num_years = 1;
  return s;
}

double m1_objective(const PlanningSystem& s, const SlottedLoadModel& loads, const AssetOptions& o) {
  const MasterProblem mp = build_master(s, loads, {}, o);
  const SolveResult r = solve(mp.model);
  REQUIRE(r.status == SolveStatus::kOptimal);
  return r.objective;
}

}  // namespace

TEST_CASE("master objective of the toy") {
  const PlanningSystem s = two_bus_system();
  const SlottedLoadModel loads = flat_loads(s, {0.0, 50.0}, 4, 1);
  const MasterProblem mp = build_master(s, loads, {}, {});
  const SolveResult r = solve(mp.model);
  REQUIRE(r.status == SolveStatus::kOptimal);
  // 50 MW for 4 h at 0.01 M$/MWh.
  CHECK(r.objective == doctest::Approx(2.0));
  const ExtractedPlan p = extract_plan(r, mp, s, loads);
  CHECK(p.cost.total == doctest::Approx(2.0));
  CHECK(p.cost.investment() == 0.0);
}

TEST_CASE("FACTS can only lower the deterministic cost") {
  const PlanningSystem s = triangle();
  const SlottedLoadModel loads = flat_loads(s, {0.0, 0.0, 100.0}, 2, 1);
  AssetOptions no_facts;
  no_facts.enable_facts = false;
  const double with = m1_objective(s, loads, {});
  const double without = m1_objective(s, loads, no_facts);
  CHECK(with <= without + 1e-9);
  // FACTS (1 M$) instead of the second line (10 M$).
  CHECK(without - with == doctest::Approx(9.0));
}

TEST_CASE("line lead time") {
  PlanningSystem s = two_bus_system();
  s.horizon.num_years = 2;
  const SlottedLoadModel loads = flat_loads(s, {0.0, 70.0}, 2, 1);
  AssetCatalog c = AssetCatalog::build(s, {});
  CHECK(c.line_may_exist(s, 1, 0));
  s.horizon.line_lead_years = 1;
  CHECK_FALSE(c.line_may_exist(s, 1, 0));
  CHECK(c.line_may_exist(s, 1, 1));

  CcgConfig cfg;
  cfg.mode = Mode::kM1;
  CHECK(run_ccg(s, loads, zero_uncertainty(loads), cfg).reason == Termination::kInfeasible);
  s.horizon.line_lead_years = 0;
  const CcgReport ok = run_ccg(s, loads, zero_uncertainty(loads), cfg);
  CHECK(ok.reason == Termination::kConverged);
}

TEST_CASE("M1 solves the master once") {
  const PlanningSystem s = two_bus_system();
  const SlottedLoadModel loads = flat_loads(s, {0.0, 50.0}, 4, 1);
  CcgConfig cfg;
  cfg.mode = Mode::kM1;
  const CcgReport r = run_ccg(s, loads, sets_for(loads, 0.4, 1), cfg);
  CHECK(r.reason == Termination::kConverged);
  CHECK(r.iterations.size() == 1);
  CHECK(r.cuts.empty());
  CHECK(r.cost.total == doctest::Approx(2.0));
}

TEST_CASE("one LDCU cut buys the second line") {
  const PlanningSystem s = two_bus_system();
  const SlottedLoadModel loads = flat_loads(s, {0.0, 50.0}, 4, 1);
  const UncertaintyModel u = sets_for(loads, 0.4, 1);
  CcgConfig cfg;
  cfg.mode = Mode::kM3;
  int verdicts = 0;
  cfg.on_verdict = [&](int, const std::string&, const SubproblemVerdict&) { ++verdicts; };
  const CcgReport r = run_ccg(s, loads, u, cfg);
  CHECK(r.reason == Termination::kConverged);
  REQUIRE(r.iterations.size() == 2);
  CHECK(r.iterations[0].spd1 == doctest::Approx(10.0));
  CHECK(r.iterations[0].cut_from == "SPD-1");
  CHECK(r.cuts.size() == 1);
  CHECK(r.ldcu_cuts == 1);
  CHECK(r.iterations[1].master_objective >= r.iterations[0].master_objective);
  CHECK(r.cost.line_invest == doctest::Approx(1.0));
  CHECK(verdicts >= 3);

  const PlanCertificate cert = certify_plan(r.plan, s, r.catalog, loads, u, kInfinity);
  CHECK(cert.spd1.violation <= 1e-6);
  CHECK(cert.spr.violation <= 1e-6);
}

TEST_CASE("infeasible master") {
  const PlanningSystem s = two_bus_system();
  const SlottedLoadModel loads = flat_loads(s, {0.0, 150.0}, 4, 1);
  const CcgReport r = run_ccg(s, loads, zero_uncertainty(loads), CcgConfig{});
  CHECK(r.reason == Termination::kInfeasible);
  CHECK(r.iterations.size() == 1);
  CHECK_FALSE(r.has_plan);
}

TEST_CASE("recourse budget drives an SPD-2 cut") {
  PlanningSystem s = two_bus_system();
  s.corridors[0].line_capacity = 200.0;
  s.existing_generators.push_back({"C", "2", 0.0, 100.0, 100.0, 100.0, 0.0, 0.002});
  const SlottedLoadModel loads = flat_loads(s, {0.0, 50.0}, 4, 1);
  const UncertaintyModel u = sets_for(loads, 0.4, 1);
  CcgConfig cfg;
  cfg.mode = Mode::kM2;
  const CcgReport unlimited = run_ccg(s, loads, u, cfg);
  CHECK(unlimited.reason == Termination::kConverged);
  CHECK(unlimited.iterations.size() == 1);
  CHECK(unlimited.iterations[0].spd2 == std::nullopt);

  // Re-dispatching +20 MW on the cheap unit costs 20 * 0.002 * 4 = 0.16.
  s.horizon.recourse_budget = 1.0;
  const CcgReport loose = run_ccg(s, loads, u, cfg);
  CHECK(loose.reason == Termination::kConverged);
  CHECK(loose.iterations.front().spd2 == doctest::Approx(0.0));

  // Base case C=50 costs 0.4. To keep the +20 MW re-dispatch within 0.1 the
  // base shifts 1.875 MW onto G so that recourse can back it off:
  // 21.875 * 0.008 - 1.875 * 0.04 = 0.1, total 1.875 * 0.04 + 48.125 * 0.008.
  s.horizon.recourse_budget = 0.1;
  const CcgReport tight = run_ccg(s, loads, u, cfg);
  CHECK(tight.iterations.front().spd2 == doctest::Approx(0.06));
  CHECK(tight.iterations.front().cut_from == "SPD-2");
  CHECK(tight.reason == Termination::kConverged);
  CHECK(tight.iterations.size() == 2);
  CHECK(tight.cost.total == doctest::Approx(0.46));
}
