#pragma once

// Monte Carlo check of a fixed plan. Each scenario pairs a load-duration
// deviation (truncated normal) with a ramp deviation (uniform); every slot
// is re-dispatched with priced load shedding and unit status frozen.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rtep/plan.hpp"
#include "rtep/subproblems.hpp"
#include "rtep/uncertainty.hpp"

namespace rtep {

enum class RampReference {
  kStage1,  // stage-2 dispatch within ramp limits of the stage-1 dispatch
  kBase,    // stage-2 dispatch within ramp limits of the plan's base dispatch
};

struct ScenarioConfig {
  int count = 1000;
  std::uint64_t seed = 1;
  double shedding_price = 7000.0;  // $/MWh; spilled energy is priced the same
  bool include_hlru = true;        // false: stage 1 only
  RampReference ramp_reference = RampReference::kStage1;
  // Redraws per slot before an over-budget LDCU sample is scaled back onto
  // the budget.
  int max_redraws = 10000;
  int threads = 1;
};

// Independent stream per (seed, scenario, kind).
std::mt19937_64 scenario_rng(std::uint64_t seed, int scenario, SetKind kind);

// Normal(0, sd) conditioned on [-bound, bound]; 0 when sd or bound is 0.
double sample_truncated_normal(std::mt19937_64& rng, double sd, double bound);

// Deviation-form draws, one point per scenario, in-set by construction.
UncertainPoint sample_ldcu_point(const UncertaintyModel& model, std::mt19937_64& rng,
                                 int max_redraws = 10000);
UncertainPoint sample_hlru_point(const UncertaintyModel& model, std::mt19937_64& rng);

std::vector<UncertainPoint> sample_ldcu(const UncertaintyModel& model, const ScenarioConfig& config);
std::vector<UncertainPoint> sample_hlru(const UncertaintyModel& model, const ScenarioConfig& config);

// Result of re-dispatching one slot. Costs are discounted M$ for the slot's
// full duration; powers are MW summed over both stages.
struct SlotOutcome {
  double fuel_cost = 0.0;
  double shed_cost = 0.0;
  double shed_mw = 0.0;
  double spill_mw = 0.0;
};

// Two-stage dispatch LP of one (year, slot) that can be re-solved for many
// deviation vectors.
class SlotDispatcher {
 public:
  SlotDispatcher(const PlanningSystem& system, const AssetCatalog& catalog, const SlotContext& slot,
                 const ScenarioConfig& config);
  ~SlotDispatcher();
  SlotDispatcher(SlotDispatcher&&) noexcept;
  SlotDispatcher& operator=(SlotDispatcher&&) noexcept;

  // ldcu / hlru: deviations per bus. hlru is ignored when stage 2 is off.
  SlotOutcome run(std::span<const double> ldcu, std::span<const double> hlru);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ScenarioResult {
  int index = 0;
  double operation_cost = 0.0;  // M$, discounted, whole horizon
  double shedding_cost = 0.0;
  double shed_energy = 0.0;     // MWh per year
  double loss_of_load_hours = 0.0;  // h per year
  double spill_energy = 0.0;    // MWh per year
};

struct YearMetrics {
  int year = 0;
  double eoc = 0.0;
  double elc = 0.0;
  double eens = 0.0;
  double lolh = 0.0;
};

struct SimulationMetrics {
  double etc = 0.0;
  double eoc = 0.0;
  double elc = 0.0;
  double hlc = 0.0;
  double eens = 0.0;  // MWh/year
  double lolh = 0.0;  // h/year
  double max_shed_mw = 0.0;
  std::vector<ScenarioResult> scenarios;
  std::vector<YearMetrics> years;
};

// Shedding below this (MW) is treated as solver noise.
inline constexpr double kShedThreshold = 1e-6;

SimulationMetrics evaluate(const Plan& plan, const PlanningSystem& system,
                           const AssetCatalog& catalog, const SlottedLoadModel& loads,
                           const UncertaintyModel& uncertainty, const ScenarioConfig& config);

}  // namespace rtep
