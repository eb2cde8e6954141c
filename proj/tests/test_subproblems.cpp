#include <doctest.h>

#include <random>

#include "rtep/error.hpp"
#include "rtep/oracle.hpp"
#include "rtep/subproblems.hpp"
#include "support.hpp"

using namespace rtep;
using namespace rtep::testing;

TEST_CASE("SPD-1 on the two-bus slot") {
  const SubproblemVerdict v = solve_spd1(two_bus_slot(60.0));
  CHECK(v.violation == doctest::Approx(10.0));
  REQUIRE(v.slots.size() == 1);
  CHECK(v.slots[0].point[1] == doctest::Approx(20.0));
  CHECK(v.worst_point.epsilon(1, 0, 0) == doctest::Approx(20.0));

  CHECK(solve_spd1(two_bus_slot(80.0)).violation == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("SPR on the ramp slot") {
  const SubproblemVerdict v = solve_spr(one_bus_ramp_slot());
  CHECK(v.violation == doctest::Approx(5.0));
  CHECK(v.slots[0].point[0] == doctest::Approx(15.0));
}

TEST_CASE("SPD-2 against a recourse budget") {
  const SlotContext s = one_bus_recourse_slot();
  const SlotContext one[] = {s};
  const SubproblemVerdict p1 = run_spd1(one, 1, 1, 1);
  const SubproblemVerdict v = run_spd2(one, 1, 1, 1, 1500.0, p1);
  CHECK(v.violation == doctest::Approx(500.0));
  CHECK(v.worst_point.epsilon(0, 0, 0) == doctest::Approx(2.0));

  SlotContext b = s;
  b.slot = 1;
  const SlotContext two[] = {s, b};
  const SubproblemVerdict p2 = run_spd1(two, 1, 1, 2);
  CHECK(run_spd2(two, 1, 1, 2, 3000.0, p2).violation == doctest::Approx(1000.0));
  CHECK(run_spd2(two, 1, 1, 2, 5000.0, p2).violation == 0.0);
  CHECK(run_spd2(two, 1, 1, 2, kInfinity, p2).violation == 0.0);
}

TEST_CASE("SPD-2 requires a passing SPD-1") {
  const SlotContext bad[] = {two_bus_slot(60.0)};
  const SubproblemVerdict p = run_spd1(bad, 2, 1, 1);
  try {
    run_spd2(bad, 2, 1, 1, 100.0, p);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPrecondition);
  }
}

TEST_CASE("budget zero means no deviation") {
  SlotContext s = two_bus_slot(40.0);
  s.budget = 0;
  CHECK(solve_spd1(s).violation == doctest::Approx(10.0));
}

TEST_CASE("worst slot defines the cut unless all slots are requested") {
  SlotContext a = two_bus_slot(60.0);
  SlotContext b = two_bus_slot(55.0);
  b.slot = 1;
  const SlotContext slots[] = {a, b};
  const SubproblemVerdict worst = run_spd1(slots, 2, 1, 2);
  CHECK(worst.violation == doctest::Approx(15.0));
  CHECK(worst.binding == 1);
  CHECK(worst.worst_point.epsilon(1, 0, 0) == 0.0);
  CHECK(worst.worst_point.epsilon(1, 0, 1) == doctest::Approx(20.0));

  SubproblemOptions o;
  o.all_violating_slots = true;
  const SubproblemVerdict all = run_spd1(slots, 2, 1, 2, o);
  CHECK(all.violation == doctest::Approx(15.0));
  CHECK(all.worst_point.epsilon(1, 0, 0) == doctest::Approx(20.0));
  CHECK(all.worst_point.epsilon(1, 0, 1) == doctest::Approx(20.0));
}

TEST_CASE("per-slot and monolithic subproblems agree") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<SlotContext> slots;
    for (int h = 0; h < 3; ++h) {
      SlotContext s = random_slot(rng, 0, h, 1 + h % 2);
      s.num_buses = 3;
      s.load.resize(3, 0.0);
      s.ldcu_halfwidth.resize(3, 0.0);
      s.hlru_lower.resize(3, 0.0);
      s.hlru_upper.resize(3, 0.0);
      slots.push_back(s);
    }
    for (SetKind kind : {SetKind::kLdcu, SetKind::kHlru}) {
      double sum = 0.0;
      for (const auto& s : slots) sum += dualize_and_solve(s, kind, ObjectiveKind::kSlack).value;
      const double mono = solve_monolithic(slots, kind, ObjectiveKind::kSlack);
      CHECK(mono == doctest::Approx(sum).epsilon(1e-6));
    }
  }
}

TEST_CASE("dualized subproblems match enumeration") {
  std::mt19937_64 rng(99);
  int recourse_checked = 0;
  for (int trial = 0; trial < 25; ++trial) {
    CAPTURE(trial);
    const SlotContext s = random_slot(rng, 0, 0, trial % 4);
    for (SetKind kind : {SetKind::kLdcu, SetKind::kHlru}) {
      const double oracle = brute_force(s, kind, ObjectiveKind::kSlack).violation;
      const double dual = dualize_and_solve(s, kind, ObjectiveKind::kSlack).value;
      CHECK(dual == doctest::Approx(oracle).epsilon(1e-6).scale(1.0));
    }
    if (brute_force(s, SetKind::kLdcu, ObjectiveKind::kSlack).violation > 1e-7) continue;
    const double oracle = brute_force(s, SetKind::kLdcu, ObjectiveKind::kRecourse).violation;
    const double dual = dualize_and_solve(s, SetKind::kLdcu, ObjectiveKind::kRecourse).value;
    CHECK(dual == doctest::Approx(oracle).epsilon(1e-6).scale(1.0));
    ++recourse_checked;
  }
  CHECK(recourse_checked > 0);
}

TEST_CASE("oracle point counts") {
  CHECK(brute_force(two_bus_slot(60.0), SetKind::kLdcu, ObjectiveKind::kSlack).points == 2);
  CHECK(brute_force(one_bus_ramp_slot(), SetKind::kHlru, ObjectiveKind::kSlack).points == 2);
  SlotContext z = two_bus_slot(60.0);
  z.budget = 0;
  const OracleVerdict v = brute_force(z, SetKind::kLdcu, ObjectiveKind::kSlack);
  CHECK(v.points == 1);
  CHECK(v.violation == 0.0);

  OracleOptions tiny;
  tiny.cap = 1;
  CHECK_THROWS_AS(brute_force(two_bus_slot(60.0), SetKind::kLdcu, ObjectiveKind::kSlack, tiny), Error);
}

TEST_CASE("inner problem evaluation") {
  const InnerProblem inner = build_inner(two_bus_slot(60.0), SetKind::kLdcu, ObjectiveKind::kSlack);
  const double none[] = {0.0, 0.0};
  CHECK(evaluate_inner(inner, none) == doctest::Approx(0.0));
  const double up[] = {0.0, 15.0};
  CHECK(evaluate_inner(inner, up) == doctest::Approx(5.0));
  const double down[] = {0.0, -20.0};
  CHECK(evaluate_inner(inner, down) == doctest::Approx(0.0));
}
