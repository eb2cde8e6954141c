// rtep: plan, certify, simulate, dump-sets.
//
// Exit codes: 0 ok, 2 parse, 3 validation, 4 infeasible, 5 backend or
// numerical failure, 6 iteration limit, 7 enumeration too large, 1 other.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "rtep/error.hpp"
#include "rtep/io.hpp"

namespace fs = std::filesystem;
using namespace rtep;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidInput:
      return 2;
    case ErrorCode::kValidation:
    case ErrorCode::kPrecondition:
      return 3;
    case ErrorCode::kInfeasible:
      return 4;
    case ErrorCode::kBackend:
    case ErrorCode::kNumericalIntegrality:
    case ErrorCode::kDualBoundTooTight:
    case ErrorCode::kModelConstruction:
    case ErrorCode::kNumericalStall:
      return 5;
    case ErrorCode::kIterationLimit:
      return 6;
    case ErrorCode::kEnumerationTooLarge:
      return 7;
  }
  return 1;
}

struct Common {
  std::string config_path;
  std::string system_path;
  std::string curves_path;
  std::string out_dir;
  std::string mode;
  std::vector<double> budget;
  double error_fraction = -1.0;
  double growth_rate = -2.0;
  int num_slots = 0;
  double recourse_budget = -1.0;
  int line_lead = -1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "run configuration JSON");
  cmd->add_option("--system", c.system_path, "system JSON (overrides config)");
  cmd->add_option("--curves", c.curves_path, "hourly curves CSV (overrides config)");
  cmd->add_option("-o,--out", c.out_dir, "output directory");
  cmd->add_option("--budget", c.budget, "LDCU budget, scalar or one per (year, slot)");
  cmd->add_option("--error-fraction", c.error_fraction, "LDCU half-width as a fraction of the slot level");
  cmd->add_option("--growth", c.growth_rate, "annual net-load growth rate");
  cmd->add_option("--slots", c.num_slots, "number of duration-curve slots");
  cmd->add_option("--recourse-budget", c.recourse_budget, "re-dispatch cost cap in M$");
  cmd->add_option("--line-lead", c.line_lead, "line construction years");
}

RunConfig resolve_config(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_run_config(c.config_path);
  if (!c.system_path.empty()) cfg.system_path = c.system_path;
  if (!c.curves_path.empty()) cfg.curves_path = c.curves_path;
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (!c.mode.empty()) {
    const auto m = parse_mode(c.mode);
    if (!m) throw Error(ErrorCode::kInvalidInput, "--mode must be M1, M2 or M3");
    cfg.mode = *m;
  }
  if (!c.budget.empty()) cfg.budget = c.budget;
  if (c.error_fraction >= 0.0) cfg.error_fraction = c.error_fraction;
  if (c.growth_rate > -1.0) cfg.growth_rate = c.growth_rate;
  if (c.num_slots > 0) cfg.num_slots = c.num_slots;
  if (c.recourse_budget >= 0.0) cfg.recourse_budget = c.recourse_budget;
  if (c.line_lead >= 0) cfg.line_lead_years = c.line_lead;
  return cfg;
}

void print_warnings(const Inputs& in) {
  for (const auto& w : in.warnings) std::cerr << "warning: " << w << '\n';
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

int run_plan(const RunConfig& cfg, const std::string& dump_lp) {
  const Inputs in = prepare_inputs(cfg);
  print_warnings(in);
  CcgConfig cc;
  cc.mode = cfg.mode;
  cc.tolerance = cfg.tolerance;
  cc.max_iterations = cfg.max_iterations;
  cc.assets = cfg.assets;
  cc.parallel = cfg.parallel;
  cc.all_violating_slots = cfg.all_violating_slots;
  cc.master_params = cfg.solver;
  cc.lp_dump_dir = dump_lp;
  cc.on_iteration = [](const IterationRecord& r) {
    Json j{{"iteration", r.iteration},
           {"master_objective", r.master_objective},
           {"spd1", r.spd1 ? Json(*r.spd1) : Json(nullptr)},
           {"spd2", r.spd2 ? Json(*r.spd2) : Json(nullptr)},
           {"spr", r.spr ? Json(*r.spr) : Json(nullptr)},
           {"cut", r.cut_from.empty() ? Json(nullptr) : Json(r.cut_from)},
           {"seconds", r.master_seconds + r.subproblem_seconds}};
    std::cerr << j.dump() << '\n';
  };
  const CcgReport report = run_ccg(in.system, in.loads, in.uncertainty, cc);
  const Json rj = report_to_json(report, in.system, cfg);
  write_file(out_path(cfg, "report.json"), rj.dump(2));

  std::cout << in.system.name << "  mode " << to_string(cfg.mode) << "  " << to_string(report.reason)
            << " after " << report.iterations.size() << " iterations (" << report.ldcu_cuts << " LDCU cuts, "
            << report.hlru_cuts << " HLRU cuts, " << report.wall_seconds << " s)\n";
  if (report.has_plan) {
    write_file(out_path(cfg, "plan.json"), plan_to_json(report.plan, report.catalog, in.system).dump(2));
    std::cout << format_cost_table(report.cost) << "build schedule\n"
              << format_build_schedule(report.plan, report.catalog, in.system);
  }
  switch (report.reason) {
    case Termination::kConverged: return 0;
    case Termination::kInfeasible: return 4;
    case Termination::kIterationLimit: return 6;
  }
  return 1;
}

int run_certify(const RunConfig& cfg, const std::string& plan_path, std::size_t cap) {
  const Inputs in = prepare_inputs(cfg);
  print_warnings(in);
  const LoadedPlan lp = load_plan(plan_path, in.system);
  OracleOptions opts;
  opts.cap = cap;
  opts.progress = [](std::size_t done, std::size_t total) {
    std::cerr << "  " << done << " / " << total << " points\n";
  };
  const PlanCertificate cert = certify_plan(lp.plan, in.system, lp.catalog, in.loads, in.uncertainty,
                                            in.system.horizon.recourse_budget, cfg.tolerance, opts);
  const Json cj = certificate_to_json(cert);
  write_file(out_path(cfg, "certificate.json"), cj.dump(2));
  auto line = [&](const char* name, const OracleVerdict& v) {
    std::cout << "  " << name << "  ";
    if (!v.evaluated) {
      std::cout << "skipped\n";
    } else {
      std::cout << v.violation << "  (" << v.points << " points)\n";
    }
  };
  std::cout << "worst-case violations\n";
  line("SPD-1", cert.spd1);
  line("SPD-2", cert.spd2);
  line("SPR  ", cert.spr);
  return 0;
}

int run_simulate(RunConfig cfg, const std::string& plan_path) {
  const Inputs in = prepare_inputs(cfg);
  print_warnings(in);
  const LoadedPlan lp = load_plan(plan_path, in.system);
  const SimulationMetrics m = evaluate(lp.plan, in.system, lp.catalog, in.loads, in.uncertainty, cfg.scenarios);
  write_file(out_path(cfg, "metrics.json"), metrics_to_json(m).dump(2));
  write_file(out_path(cfg, "scenarios.csv"), scenarios_csv(m));
  write_plot_csvs(m, in.system.horizon.base_year, out_path(cfg, "plots"));
  std::printf("scenarios %zu\n  ETC  %.6f M$\n  EOC  %.6f M$\n  ELC  %.6f M$\n  HLC  %.6f M$\n"
              "  EENS %.6f MWh/yr\n  LOLH %.6f h/yr\n",
              m.scenarios.size(), m.etc, m.eoc, m.elc, m.hlc, m.eens, m.lolh);
  return 0;
}

int run_dump_sets(const RunConfig& cfg) {
  const Inputs in = prepare_inputs(cfg);
  print_warnings(in);
  const std::string text = uncertainty_to_json(in.system, in.loads, in.uncertainty).dump(2);
  write_file(out_path(cfg, "sets.json"), text);
  std::cout << text << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust transmission expansion planning"};
  app.require_subcommand(1);

  Common plan_opts, cert_opts, sim_opts, dump_opts;
  std::string dump_lp, cert_plan, sim_plan, ramp_ref;
  double tolerance = -1.0;
  int max_iterations = 0, count = 0, threads = 0;
  long long seed = -1;
  double price = -1.0;
  bool no_lines = false, no_gens = false, no_facts = false, parallel = false, ldcu_only = false;
  bool all_slots = false, worst_slot = false;
  std::size_t cap = kDefaultEnumerationCap;

  auto* plan = app.add_subcommand("plan", "run column-and-constraint generation");
  add_common(plan, plan_opts);
  plan->add_option("--mode", plan_opts.mode, "M1, M2 or M3");
  plan->add_option("--tolerance", tolerance, "subproblem violation tolerance");
  plan->add_option("--max-iterations", max_iterations, "iteration cap");
  plan->add_flag("--no-lines", no_lines, "disable new lines");
  plan->add_flag("--no-gens", no_gens, "disable new generators");
  plan->add_flag("--no-facts", no_facts, "disable FACTS devices");
  plan->add_flag("--parallel", parallel, "solve slots in parallel");
  plan->add_flag("--all-slots", all_slots, "one cut carries every violating slot");
  plan->add_flag("--worst-slot", worst_slot, "one cut carries only the worst slot");
  plan->add_option("--dump-lp", dump_lp, "write each master problem as an LP file here");

  auto* cert = app.add_subcommand("certify", "enumerate extreme points to certify a plan");
  add_common(cert, cert_opts);
  cert->add_option("--plan", cert_plan, "plan.json or report.json")->required();
  cert->add_option("--cap", cap, "maximum inner LPs per slot");
  cert->add_option("--tolerance", tolerance, "tolerance for skipping SPD-2");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo evaluation of a plan");
  add_common(sim, sim_opts);
  sim->add_option("--plan", sim_plan, "plan.json or report.json")->required();
  sim->add_option("--count", count, "number of scenario pairs");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--price", price, "load-shedding price, $/MWh");
  sim->add_option("--threads", threads, "worker threads");
  sim->add_option("--ramp-reference", ramp_ref, "stage1 or base");
  sim->add_flag("--ldcu-only", ldcu_only, "skip the ramp stage");

  auto* dump = app.add_subcommand("dump-sets", "write the uncertainty sets as JSON");
  add_common(dump, dump_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) {
      RunConfig cfg = resolve_config(plan_opts);
      if (tolerance > 0.0) cfg.tolerance = tolerance;
      if (max_iterations > 0) cfg.max_iterations = max_iterations;
      if (no_lines) cfg.assets.enable_lines = false;
      if (no_gens) cfg.assets.enable_gens = false;
      if (no_facts) cfg.assets.enable_facts = false;
      if (parallel) cfg.parallel = true;
      if (all_slots) cfg.all_violating_slots = true;
      if (worst_slot) cfg.all_violating_slots = false;
      return run_plan(cfg, dump_lp);
    }
    if (*cert) {
      RunConfig cfg = resolve_config(cert_opts);
      if (tolerance > 0.0) cfg.tolerance = tolerance;
      return run_certify(cfg, cert_plan, cap);
    }
    if (*sim) {
      RunConfig cfg = resolve_config(sim_opts);
      if (count > 0) cfg.scenarios.count = count;
      if (seed >= 0) cfg.scenarios.seed = static_cast<std::uint64_t>(seed);
      if (price > 0.0) cfg.scenarios.shedding_price = price;
      if (threads > 0) cfg.scenarios.threads = threads;
      if (ldcu_only) cfg.scenarios.include_hlru = false;
      if (ramp_ref == "base") {
        cfg.scenarios.ramp_reference = RampReference::kBase;
      } else if (ramp_ref == "stage1") {
        cfg.scenarios.ramp_reference = RampReference::kStage1;
      } else if (!ramp_ref.empty()) {
        throw Error(ErrorCode::kInvalidInput, "--ramp-reference must be stage1 or base");
      }
      return run_simulate(cfg, sim_plan);
    }
    if (*dump) return run_dump_sets(resolve_config(dump_opts));
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
