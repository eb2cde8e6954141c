#pragma once

// Flattened catalog of every buildable or dispatchable unit, and the Plan
// that records first-stage decisions over it.

#include <cstdint>
#include <string>
#include <vector>

#include "rtep/system.hpp"

namespace rtep {

struct AssetOptions {
  bool enable_lines = true;
  bool enable_gens = true;
  bool enable_facts = true;
};

// Line slot k of a corridor. Slots below min_lines are existing lines.
struct LineUnit {
  int corridor = 0;
  int k = 0;
  bool existing = false;
  bool candidate = false;  // may be built when not existing
};

struct FactsUnit {
  int corridor = 0;
  int k = 0;  // line slot the device sits on
  int type = 0;
};

struct NewGenUnit {
  int bus = 0;
  int slot = 0;
  int type = 0;
};

// A dispatchable generator, existing or new, with its operating data.
struct GenUnit {
  int bus = 0;
  int new_index = -1;  // index into AssetCatalog::new_gens, -1 for existing
  std::string label;
  double p_min = 0.0;
  double p_max = 0.0;
  double ramp_up = 0.0;
  double ramp_down = 0.0;
  double cost_fixed = 0.0;
  double cost_marginal = 0.0;
  int discount_offset = 0;  // years subtracted from the operation-cost exponent
};

struct AssetCatalog {
  AssetOptions options;
  std::vector<LineUnit> lines;
  std::vector<FactsUnit> facts;
  std::vector<NewGenUnit> new_gens;
  std::vector<GenUnit> units;  // existing generators first, then new_gens in order

  static AssetCatalog build(const PlanningSystem& system, const AssetOptions& options);

  // Whether the line can be in service in `year` at all (existing, or a
  // candidate past the construction period).
  bool line_may_exist(const PlanningSystem& system, int line, int year) const;
  bool gen_may_exist(const PlanningSystem& system, int new_gen, int year) const;
  int line_index(int corridor, int k) const;
};

// Discount factor applied to an amount paid `exponent` years after y0.
double discount_factor(const Horizon& horizon, int exponent);

struct CostBreakdown {
  double line_invest = 0.0;
  double facts_invest = 0.0;
  double gen_invest = 0.0;
  double base_operation = 0.0;
  double total = 0.0;

  double investment() const { return line_invest + facts_invest + gen_invest; }
};

struct Plan {
  int num_years = 0;
  int num_slots = 0;
  std::vector<std::vector<std::uint8_t>> line_built;   // [line unit][year]
  std::vector<std::vector<std::uint8_t>> facts_built;  // [facts unit][year]
  std::vector<std::vector<std::uint8_t>> gen_built;    // [new gen][year]
  std::vector<std::vector<std::uint8_t>> status;       // [unit][year * slots + slot]
  std::vector<std::vector<double>> dispatch;           // [unit][year * slots + slot], MW

  int cell(int year, int slot) const { return year * num_slots + slot; }

  // Empty plan over the catalog: existing lines in service, nothing built,
  // all units off.
  static Plan empty(const AssetCatalog& catalog, int num_years, int num_slots);
};

// Checks the structural build rules and dispatch limits; returns the first
// broken rule or an empty string.
std::string check_plan(const PlanningSystem& system, const AssetCatalog& catalog, const Plan& plan);

// Investment and base-case operation cost of a plan, discounted.
CostBreakdown cost_of(const PlanningSystem& system, const AssetCatalog& catalog, const Plan& plan,
                      const std::vector<int>& slot_durations);

}  // namespace rtep
