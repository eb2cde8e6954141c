#pragma once

// Column-and-constraint generation: solve the master, check the plan
// against the worst LDCU and HLRU points, add the violating point as a new
// recourse block, repeat.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rtep/master.hpp"
#include "rtep/subproblems.hpp"

namespace rtep {

// M1: deterministic base case only. M2: plus LDCU checks. M3: plus HLRU.
enum class Mode { kM1, kM2, kM3 };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

enum class Termination { kConverged, kInfeasible, kIterationLimit };

std::string_view to_string(Termination reason);

struct IterationRecord {
  int iteration = 0;
  double master_objective = 0.0;
  double master_seconds = 0.0;
  std::optional<double> spd1;
  std::optional<double> spd2;
  std::optional<double> spr;
  std::string cut_from;  // "SPD-1", "SPD-2", "SPR" or empty
  double subproblem_seconds = 0.0;
};

struct CcgConfig {
  double tolerance = 1e-3;
  int max_iterations = 50;
  Mode mode = Mode::kM3;
  AssetOptions assets;
  bool parallel = false;
  bool all_violating_slots = false;
  SolveParams master_params;
  DualOptions dual;
  // Directory for one LP file per master solve; empty disables.
  std::string lp_dump_dir;
  // Called after every iteration and for every subproblem verdict.
  std::function<void(const IterationRecord&)> on_iteration;
  std::function<void(int iteration, const std::string& kind, const SubproblemVerdict&)> on_verdict;
};

struct CcgReport {
  Termination reason = Termination::kConverged;
  bool has_plan = false;
  Plan plan;
  CostBreakdown cost;
  AssetCatalog catalog;
  std::vector<IterationRecord> iterations;
  std::vector<CutPoint> cuts;
  int ldcu_cuts = 0;
  int hlru_cuts = 0;
  double wall_seconds = 0.0;
};

// Throws Error(kNumericalStall) if a subproblem returns a point already in
// the master or the master objective decreases.
CcgReport run_ccg(const PlanningSystem& system, const SlottedLoadModel& loads,
                  const UncertaintyModel& uncertainty, const CcgConfig& config);

}  // namespace rtep
