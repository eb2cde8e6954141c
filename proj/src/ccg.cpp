#include "rtep/ccg.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "rtep/error.hpp"

namespace rtep {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

bool same_cut(const CutPoint& a, SetKind kind, const UncertainPoint& p) {
  return a.kind == kind && a.point.epsilon.data() == p.epsilon.data();
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kM1: return "M1";
    case Mode::kM2: return "M2";
    case Mode::kM3: return "M3";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "M1" || text == "m1") return Mode::kM1;
  if (text == "M2" || text == "m2") return Mode::kM2;
  if (text == "M3" || text == "m3") return Mode::kM3;
  return std::nullopt;
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::kConverged: return "converged";
    case Termination::kInfeasible: return "infeasible";
    case Termination::kIterationLimit: return "iteration-limit";
  }
  return "?";
}

CcgReport run_ccg(const PlanningSystem& system, const SlottedLoadModel& loads,
                  const UncertaintyModel& uncertainty, const CcgConfig& config) {
  if (!(config.tolerance > 0.0) || config.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidInput, "tolerance must be > 0 and max_iterations >= 1");
  }
  require_valid(system);
  const auto start = Clock::now();
  const int nb = static_cast<int>(system.buses.size());
  const int Y = loads.num_years();
  const int H = loads.num_slots();
  const double budget = system.horizon.recourse_budget;

  SubproblemOptions sub;
  sub.dual = config.dual;
  sub.parallel = config.parallel;
  sub.all_violating_slots = config.all_violating_slots;
  sub.tolerance = config.tolerance;

  CcgReport report;
  report.reason = Termination::kIterationLimit;
  std::optional<double> previous;

  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    auto t0 = Clock::now();
    MasterProblem mp = build_master(system, loads, report.cuts, config.assets);
    report.catalog = mp.index.catalog;
    if (!config.lp_dump_dir.empty()) {
      std::filesystem::create_directories(config.lp_dump_dir);
      write_lp(mp.model, config.lp_dump_dir + "/master_" + std::to_string(it) + ".lp");
    }
    const SolveResult res = solve(mp.model, config.master_params);
    rec.master_seconds = seconds_since(t0);
    if (res.status == SolveStatus::kInfeasible) {
      report.reason = Termination::kInfeasible;
      report.has_plan = false;
      report.iterations.push_back(rec);
      if (config.on_iteration) config.on_iteration(rec);
      break;
    }
    if (res.status != SolveStatus::kOptimal) {
      throw Error(ErrorCode::kBackend, "master problem ended with status " +
                                           std::string(to_string(res.status)));
    }
    rec.master_objective = res.objective;
    if (previous) {
      const double allowance =
          2.0 * config.master_params.rel_gap * std::max(1.0, std::abs(*previous)) +
          config.master_params.abs_gap + 1e-9;
      if (res.objective < *previous - allowance) {
        throw Error(ErrorCode::kNumericalStall,
                    "master objective decreased from " + std::to_string(*previous) + " to " +
                        std::to_string(res.objective));
      }
    }
    previous = res.objective;
    ExtractedPlan ex = extract_plan(res, mp, system, loads);
    report.plan = ex.plan;
    report.cost = ex.cost;
    report.has_plan = true;

    auto finish = [&](Termination why) {
      report.reason = why;
      report.iterations.push_back(rec);
      if (config.on_iteration) config.on_iteration(rec);
    };
    if (config.mode == Mode::kM1) {
      finish(Termination::kConverged);
      break;
    }

    t0 = Clock::now();
    const std::vector<SlotContext> slots =
        make_slot_contexts(system, mp.index.catalog, ex.plan, loads, uncertainty);
    auto add_cut = [&](SetKind kind, const SubproblemVerdict& v, const char* source) {
      for (const CutPoint& c : report.cuts) {
        if (same_cut(c, kind, v.worst_point)) {
          throw Error(ErrorCode::kNumericalStall,
                      std::string(source) + " returned a point already in the master (violation " +
                          std::to_string(v.violation) + ")");
        }
      }
      report.cuts.push_back({kind, v.worst_point, it});
      (kind == SetKind::kLdcu ? report.ldcu_cuts : report.hlru_cuts) += 1;
      rec.cut_from = source;
    };

    const SubproblemVerdict spd1 = run_spd1(slots, nb, Y, H, sub);
    rec.spd1 = spd1.violation;
    if (config.on_verdict) config.on_verdict(it, "SPD-1", spd1);
    if (spd1.violation > config.tolerance) {
      add_cut(SetKind::kLdcu, spd1, "SPD-1");
    } else {
      if (std::isfinite(budget)) {
        const SubproblemVerdict spd2 = run_spd2(slots, nb, Y, H, budget, spd1, sub);
        rec.spd2 = spd2.violation;
        if (config.on_verdict) config.on_verdict(it, "SPD-2", spd2);
        if (spd2.violation > config.tolerance) add_cut(SetKind::kLdcu, spd2, "SPD-2");
      }
      if (rec.cut_from.empty() && config.mode == Mode::kM3) {
        const SubproblemVerdict spr = run_spr(slots, nb, Y, H, sub);
        rec.spr = spr.violation;
        if (config.on_verdict) config.on_verdict(it, "SPR", spr);
        if (spr.violation > config.tolerance) add_cut(SetKind::kHlru, spr, "SPR");
      }
    }
    rec.subproblem_seconds = seconds_since(t0);
    if (rec.cut_from.empty()) {
      finish(Termination::kConverged);
      break;
    }
    report.iterations.push_back(rec);
    if (config.on_iteration) config.on_iteration(rec);
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

}  // namespace rtep
