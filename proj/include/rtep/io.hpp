#pragma once

// File formats: system JSON, hourly curve CSV, run configuration, and the
// plan / report / metrics outputs. Field names are listed in
// schema/formats.md.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rtep/ccg.hpp"
#include "rtep/oracle.hpp"
#include "rtep/simulator.hpp"

namespace rtep {

using Json = nlohmann::ordered_json;

// Parse failures throw Error(kParse) naming the entity and field;
// load_system additionally throws Error(kValidation) via require_valid.
PlanningSystem parse_system(const Json& doc);
PlanningSystem parse_system_text(std::string_view text);
PlanningSystem load_system(const std::string& path);
Json system_to_json(const PlanningSystem& system);

struct CurveSet {
  std::vector<std::string> buses;           // bus ids in column order
  std::vector<std::vector<double>> values;  // [column][hour]
  std::vector<std::string> warnings;

  int hours() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
};

// Header `hour,bus_<id>,...`; hours contiguous from 1.
CurveSet parse_curves(std::string_view text);
CurveSet load_curves(const std::string& path);

// Curves in system bus order; empty for buses without load. Throws
// Error(kValidation) when a load bus has no column or a column names an
// unknown bus.
std::vector<std::vector<double>> curves_for_system(const PlanningSystem& system, const CurveSet& curves);

struct RunConfig {
  std::string system_path;
  std::string curves_path;
  std::string output_dir = "out";
  Mode mode = Mode::kM3;
  AssetOptions assets;
  double tolerance = 1e-3;
  int max_iterations = 50;
  std::optional<double> recourse_budget;  // overrides the system's horizon value
  std::optional<int> line_lead_years;
  std::vector<double> budget = {1.0};     // scalar broadcast or one per (year, slot)
  double error_fraction = 0.05;
  double growth_rate = 0.05;
  int num_slots = 12;
  std::vector<int> slot_durations;        // empty: equal split of the curve length
  ScenarioConfig scenarios;
  SolveParams solver;
  bool parallel = false;
  bool all_violating_slots = false;
};

// Relative paths are resolved against the config file's directory.
RunConfig parse_run_config(const Json& doc, const std::string& base_dir = "");
RunConfig load_run_config(const std::string& path);
Json run_config_to_json(const RunConfig& config);

// Everything a command needs, built from a RunConfig.
struct Inputs {
  PlanningSystem system;
  SlottedLoadModel loads;
  UncertaintyModel uncertainty;
  std::vector<std::string> warnings;
};

Inputs prepare_inputs(const RunConfig& config);

Json plan_to_json(const Plan& plan, const AssetCatalog& catalog, const PlanningSystem& system);

struct LoadedPlan {
  Plan plan;
  AssetCatalog catalog;
};

// Accepts a plan document or a report document with a "plan" member.
LoadedPlan plan_from_json(const Json& doc, const PlanningSystem& system);
LoadedPlan load_plan(const std::string& path, const PlanningSystem& system);

Json cost_to_json(const CostBreakdown& cost);
Json report_to_json(const CcgReport& report, const PlanningSystem& system, const RunConfig& config);
Json uncertainty_to_json(const PlanningSystem& system, const SlottedLoadModel& loads,
                         const UncertaintyModel& uncertainty);
Json certificate_to_json(const PlanCertificate& cert);
Json metrics_to_json(const SimulationMetrics& metrics);

std::string scenarios_csv(const SimulationMetrics& metrics);
// Year-indexed series: eoc_elc.csv, lolh.csv, eens.csv.
void write_plot_csvs(const SimulationMetrics& metrics, int base_year, const std::string& dir);

// Plain-text tables for the terminal.
std::string format_cost_table(const CostBreakdown& cost);
std::string format_build_schedule(const Plan& plan, const AssetCatalog& catalog,
                                  const PlanningSystem& system);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace rtep
