#pragma once

// Master problem: investment plus base-case operation, grown with one
// recourse block per accumulated uncertainty cut.

#include <vector>

#include "rtep/network.hpp"
#include "rtep/plan.hpp"
#include "rtep/solver.hpp"
#include "rtep/uncertainty.hpp"

namespace rtep {

struct CutPoint {
  SetKind kind = SetKind::kLdcu;
  UncertainPoint point;
  int iteration = 0;
};

// Column layout of a built master model.
struct MasterIndex {
  AssetCatalog catalog;
  int num_years = 0;
  int num_slots = 0;
  std::vector<std::vector<Indicator>> line;   // [line unit][year]
  std::vector<std::vector<Indicator>> facts;  // [facts unit][year]
  std::vector<std::vector<Indicator>> gen;    // [new gen][year]
  std::vector<std::vector<Indicator>> status; // [unit][cell]
  std::vector<std::vector<int>> dispatch;     // [unit][cell], -1 when the unit can never run
  int num_cut_blocks = 0;
};

struct MasterProblem {
  LinearModel model;
  MasterIndex index;
};

MasterProblem build_master(const PlanningSystem& system, const SlottedLoadModel& loads,
                           const std::vector<CutPoint>& cuts, const AssetOptions& options);

struct ExtractedPlan {
  Plan plan;
  CostBreakdown cost;
};

// Rounds binaries at 0.5, re-checks the build rules and recomputes costs.
// Throws Error(kNumericalIntegrality) when rounding breaks a rule or the
// recomputed total drifts from the solver objective by more than 1e-4
// relative.
ExtractedPlan extract_plan(const SolveResult& result, const MasterProblem& master,
                           const PlanningSystem& system, const SlottedLoadModel& loads);

// Same rounding without the objective comparison (for externally built
// solution vectors).
Plan round_plan(const std::vector<double>& primal, const MasterIndex& index);

}  // namespace rtep
