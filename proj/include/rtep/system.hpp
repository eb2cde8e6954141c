#pragma once

// Network, candidate assets and planning horizon. Currency is in M$, power
// in MW, reactance in per-unit on base_mva.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace rtep {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Bus {
  std::string id;
  bool has_load = true;
  int max_new_generators = 0;
};

// Parallel lines in a corridor share reactance and capacity. Line slots
// [0, min_lines) are existing; [min_lines, max_lines) may be built.
struct Corridor {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double reactance = 0.0;
  double line_capacity = 0.0;
  int min_lines = 0;
  int max_lines = 0;
  double line_cost = 0.0;
};

struct GeneratorExisting {
  std::string id;
  std::string bus;
  double p_min = 0.0;
  double p_max = 0.0;
  double ramp_up = 0.0;
  double ramp_down = 0.0;
  double cost_fixed = 0.0;     // M$/h while committed
  double cost_marginal = 0.0;  // M$/MWh
};

struct GeneratorType {
  std::string id;
  double p_min = 0.0;
  double p_max = 0.0;
  double ramp_up = 0.0;
  double ramp_down = 0.0;
  double invest_cost = 0.0;
  double cost_fixed = 0.0;
  double cost_marginal = 0.0;
};

struct FactsType {
  std::string id;
  double capacity = 0.0;
  double invest_cost = 0.0;
};

struct Horizon {
  // FACTS devices come into service the year they are paid for.
  static constexpr int kFactsLeadYears = 0;

  int base_year = 0;
  int num_years = 1;
  double discount_rate = 0.0;
  int line_lead_years = 0;
  int gen_lead_years = 0;
  double theta_max = std::numbers::pi / 2.0;
  // Cap on the discounted re-dispatch cost under load-duration deviations.
  // kInfinity means unlimited.
  double recourse_budget = kInfinity;

  // 1 / (1 + D)^exponent
  double discount(double exponent) const { return std::pow(1.0 + discount_rate, -exponent); }
};

struct PlanningSystem {
  std::string name;
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Corridor> corridors;
  std::vector<GeneratorExisting> existing_generators;
  std::vector<GeneratorType> generator_types;
  std::vector<FactsType> facts_types;
  std::vector<std::string> candidate_gen_buses;
  std::vector<std::string> candidate_line_corridors;
  std::vector<std::string> candidate_facts_corridors;
  Horizon horizon;

  std::optional<int> bus_index(const std::string& id) const;
  std::optional<int> corridor_index(const std::string& id) const;
  std::optional<int> generator_type_index(const std::string& id) const;
  std::optional<int> facts_type_index(const std::string& id) const;
};

struct Violation {
  std::string entity;  // e.g. "corridor 1-2"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Pure; never throws on malformed data.
ValidationReport validate(const PlanningSystem& system);

// Throws Error(kValidation) carrying the report text when validate() fails.
void require_valid(const PlanningSystem& system);

}  // namespace rtep
