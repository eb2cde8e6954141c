#pragma once

// Worst-case feasibility checks of a fixed plan, one (year, slot) at a time:
//   SPD-1  max over LDCU points of the min total balance slack
//   SPD-2  max over LDCU points of the min re-dispatch cost, summed over
//          slots, minus the recourse budget
//   SPR    max over HLRU corners of the min total slack with dispatch
//          tethered to the base case by ramp limits
// Each is solved as one MILP: the LP dual of the inner problem with the
// uncertainty written in closed extreme-point form.

#include <span>
#include <string>
#include <vector>

#include "rtep/master.hpp"
#include "rtep/plan.hpp"
#include "rtep/solver.hpp"
#include "rtep/uncertainty.hpp"

namespace rtep {

// A line in service in the slot; facts_capacity is 0 without a device.
struct SlotLine {
  int from = 0;
  int to = 0;
  double reactance_pu = 0.0;
  double capacity = 0.0;
  double facts_capacity = 0.0;
};

// A committed unit.
struct SlotUnit {
  int unit = 0;  // index into AssetCatalog::units
  int bus = 0;
  double p_min = 0.0;
  double p_max = 0.0;
  double ramp_up = 0.0;
  double ramp_down = 0.0;
  double base = 0.0;    // base-case dispatch, MW
  double weight = 0.0;  // discounted cost per MW over the slot
};

struct SlotContext {
  int year = 0;
  int slot = 0;
  int num_buses = 0;
  double duration = 0.0;
  double theta_max = 0.0;
  std::vector<SlotLine> lines;
  std::vector<SlotUnit> units;
  std::vector<double> load;
  std::vector<double> ldcu_halfwidth;
  int budget = 0;
  std::vector<double> hlru_lower;
  std::vector<double> hlru_upper;
};

SlotContext make_slot_context(const PlanningSystem& system, const AssetCatalog& catalog,
                              const Plan& plan, const SlottedLoadModel& loads,
                              const UncertaintyModel& uncertainty, int year, int slot);

// All (year, slot) contexts in year-major order.
std::vector<SlotContext> make_slot_contexts(const PlanningSystem& system,
                                            const AssetCatalog& catalog, const Plan& plan,
                                            const SlottedLoadModel& loads,
                                            const UncertaintyModel& uncertainty);

enum class ObjectiveKind { kSlack, kRecourse };

// Inner minimisation for a fixed deviation. Balance rows carry
// rhs = -(load + epsilon).
struct InnerProblem {
  LinearModel model;
  std::vector<int> balance_row;  // per bus
  std::vector<double> load;
};

// kind selects the dispatch range: LDCU is free within limits, HLRU is
// tethered to base +/- ramp.
InnerProblem build_inner(const SlotContext& slot, SetKind kind, ObjectiveKind objective);

// Optimal inner value at one deviation vector. Throws on an infeasible
// recourse problem and Error(kModelConstruction) on an unbounded one.
double evaluate_inner(const InnerProblem& inner, std::span<const double> epsilon);

// Uncertainty as the dualizer sees it for one slot.
struct SlotSet {
  SetKind kind = SetKind::kLdcu;
  std::vector<int> buses;       // uncertain buses
  std::vector<double> halfwidth;  // LDCU, per listed bus
  std::vector<double> lower;      // HLRU, per listed bus
  std::vector<double> upper;
  int cardinality = 0;  // LDCU: min(budget, #buses)
  int budget = 0;
};

SlotSet slot_set(const SlotContext& slot, SetKind kind);

struct DualOptions {
  // Enforce exactly min(budget, n) deviating buses (otherwise <= budget).
  bool budget_equality = true;
  // Bound on the balance duals for the recourse objective; <= 0 computes
  // one from the slot itself.
  double recourse_bound = 0.0;
  SolveParams params = tight_params();

  static SolveParams tight_params() {
    SolveParams p;
    p.rel_gap = 1e-9;
    p.abs_gap = 1e-10;
    p.feasibility_tol = 1e-9;
    p.integrality_tol = 1e-9;
    return p;
  }
};

struct SlotVerdict {
  int year = 0;
  int slot = 0;
  double value = 0.0;  // inner optimum at the worst point
  SlotPoint point;     // worst deviation over all buses
  double milp_objective = 0.0;
  double dual_bound = 0.0;
};

SlotVerdict dualize_and_solve(const SlotContext& slot, SetKind kind, ObjectiveKind objective,
                              const DualOptions& options = {});

// Bound = (max discounted marginal cost) x (peak load + total half-width)
// x (max slot duration), over all given slots.
double recourse_dual_bound(std::span<const SlotContext> slots);

struct SubproblemVerdict {
  double violation = 0.0;
  UncertainPoint worst_point;
  std::vector<SlotVerdict> slots;
  int binding = -1;  // index into slots of the slot defining the cut (SPD-1/SPR)
};

struct SubproblemOptions {
  DualOptions dual;
  bool parallel = false;
  // Add every violating slot's maximiser to the cut instead of the worst one.
  bool all_violating_slots = false;
  double tolerance = 1e-3;
};

SubproblemVerdict run_spd1(std::span<const SlotContext> slots, int num_buses, int num_years,
                           int num_slots, const SubproblemOptions& options = {});

// Requires a passing SPD-1 verdict; throws Error(kPrecondition) otherwise.
SubproblemVerdict run_spd2(std::span<const SlotContext> slots, int num_buses, int num_years,
                           int num_slots, double recourse_budget, const SubproblemVerdict& spd1,
                           const SubproblemOptions& options = {});

SubproblemVerdict run_spr(std::span<const SlotContext> slots, int num_buses, int num_years,
                          int num_slots, const SubproblemOptions& options = {});

// Single-slot wrappers.
SubproblemVerdict solve_spd1(const SlotContext& slot, const DualOptions& options = {});
SubproblemVerdict solve_spr(const SlotContext& slot, const DualOptions& options = {});

// All slots in one MILP with the summed objective (reference path for the
// per-slot decomposition).
double solve_monolithic(std::span<const SlotContext> slots, SetKind kind, ObjectiveKind objective,
                        const DualOptions& options = {});

}  // namespace rtep
