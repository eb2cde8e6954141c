// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtep/ccg.hpp"
#include "rtep/error.hpp"
#include "rtep/io.hpp"
#include "rtep/oracle.hpp"
#include "rtep/simulator.hpp"
#include "support.hpp"

using namespace rtep;
using namespace rtep::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Random subproblem battery

struct Instance {
  std::vector<SlotContext> slots;
};

std::vector<Instance> battery(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nslots(1, 4);
  std::uniform_int_distribution<int> lambda(0, 2);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    Instance inst;
    const int H = nslots(rng);
    SlotContext first = random_slot(rng, 0, 0, lambda(rng));
    inst.slots.push_back(first);
    for (int h = 1; h < H; ++h) {
      // Same network, new loads, sets and budget per slot.
      SlotContext s = random_slot(rng, 0, h, lambda(rng));
      SlotContext t = first;
      t.slot = h;
      t.budget = s.budget;
      t.duration = s.duration;
      for (int b = 0; b < t.num_buses; ++b) {
        const int src = b % s.num_buses;
        t.load[b] = s.load[src];
        t.ldcu_halfwidth[b] = s.ldcu_halfwidth[src];
        t.hlru_lower[b] = s.hlru_lower[src];
        t.hlru_upper[b] = s.hlru_upper[src];
      }
      inst.slots.push_back(t);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

// Plenty of headroom so that every LDCU point is servable and the recourse
// cost is finite.
SlotContext roomy(SlotContext s) {
  for (auto& l : s.lines) l.capacity += 500.0;
  for (auto& u : s.units) {
    u.p_max += 500.0;
    u.ramp_up += 500.0;
    u.ramp_down += 500.0;
  }
  if (s.units.empty()) return s;
  // Every bus with load needs a path to a unit: add one unit per bus.
  const double w = s.units.front().weight;
  for (int b = 0; b < s.num_buses; ++b) {
    s.units.push_back(slot_unit(static_cast<int>(s.units.size()), b, 0.0, 500.0, 500.0, 500.0, 0.0,
                                w * (1.0 + 0.1 * b)));
  }
  return s;
}

Outcome criterion_oracle(const std::vector<Instance>& insts) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int compared = 0, recourse = 0;
  for (const Instance& inst : insts) {
    for (const SlotContext& s : inst.slots) {
      for (SetKind kind : {SetKind::kLdcu, SetKind::kHlru}) {
        const double o = brute_force(s, kind, ObjectiveKind::kSlack).violation;
        const double d = dualize_and_solve(s, kind, ObjectiveKind::kSlack).value;
        worst = std::max(worst, std::abs(o - d));
        ++compared;
      }
      const SlotContext r = roomy(s);
      if (brute_force(r, SetKind::kLdcu, ObjectiveKind::kSlack).violation > 0.0) continue;
      const double o = brute_force(r, SetKind::kLdcu, ObjectiveKind::kRecourse).violation;
      const double d = dualize_and_solve(r, SetKind::kLdcu, ObjectiveKind::kRecourse).value;
      worst = std::max(worst, std::abs(o - d));
      ++compared;
      ++recourse;
    }
  }
  const double secs = seconds_since(t0);
  Outcome out;
  out.pass = insts.size() >= 20 && recourse >= 20 && worst <= 1e-6 && secs < 300.0;
  out.detail = fmt("%zu instances, %d comparisons (%d recourse), max |diff| %.3g, %.1f s", insts.size(),
                   compared, recourse, worst, secs);
  return out;
}

Outcome criterion_red(const std::vector<Instance>& insts) {
  double worst = 0.0;
  int compared = 0;
  for (const Instance& inst : insts) {
    for (SetKind kind : {SetKind::kLdcu, SetKind::kHlru}) {
      double sum = 0.0;
      for (const SlotContext& s : inst.slots) sum += dualize_and_solve(s, kind, ObjectiveKind::kSlack).value;
      const double mono = solve_monolithic(inst.slots, kind, ObjectiveKind::kSlack);
      worst = std::max(worst, std::abs(sum - mono));
      ++compared;
    }
  }
  Outcome out;
  out.pass = worst <= 1e-6;
  out.detail = fmt("%d decomposed vs monolithic pairs, max |diff| %.3g", compared, worst);
  return out;
}

// ---------------------------------------------------------------------------
// Uncertainty builder

Outcome criterion_builder() {
  bool ok = true;
  std::ostringstream why;
  const int durations[] = {2, 2};
  const SlottedLoadModel m = build_load_model({{5, 3, 8, 6}}, 1, 0.0, durations);
  const double one[] = {1};
  const UncertaintyModel u = build_uncertainty(m, 0.05, one);
  if (m.levels(0, 0, 0) != 7.0 || m.levels(0, 0, 1) != 4.0) {
    ok = false;
    why << "levels " << m.levels(0, 0, 0) << "," << m.levels(0, 0, 1) << "; ";
  }
  if (u.hlru.lower(0, 0, 0) != -2.0 || u.hlru.upper(0, 0, 0) != 0.0 || u.hlru.lower(0, 0, 1) != -2.0 ||
      u.hlru.upper(0, 0, 1) != 5.0) {
    ok = false;
    why << "ramp bounds; ";
  }

  std::mt19937_64 rng(2016);
  std::uniform_real_distribution<double> level(0.0, 1000.0);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> v(100000);
    for (double& x : v) x = level(rng);
    const int slots = 7 + trial * 5;
    const auto d = equal_slot_durations(static_cast<int>(v.size()), slots);
    const SlottedLoadModel lm = build_load_model({v}, 1, 0.0, d);
    long double hourly = 0.0L, slotted = 0.0L;
    for (double x : v) hourly += x;
    for (int h = 0; h < slots; ++h) slotted += static_cast<long double>(d[h]) * lm.levels(0, 0, h);
    worst = std::max(worst, static_cast<double>(std::abs(slotted - hourly) / hourly));
  }
  if (worst > 1e-9) ok = false;
  Outcome out;
  out.pass = ok;
  out.detail = fmt("levels [%g, %g], ramp boxes [%g, %g] [%g, %g], energy rel. error %.2g %s", m.levels(0, 0, 0),
                   m.levels(0, 0, 1), u.hlru.lower(0, 0, 0), u.hlru.upper(0, 0, 0), u.hlru.lower(0, 0, 1),
                   u.hlru.upper(0, 0, 1), worst, why.str().c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Planning runs

struct Run {
  std::string label;
  const PlanningSystem* system = nullptr;
  const SlottedLoadModel* loads = nullptr;
  const UncertaintyModel* uncertainty = nullptr;
  Mode mode = Mode::kM3;
  CcgReport report;
  double seconds = 0.0;
  std::string error;
};

Run plan_run(std::string label, const PlanningSystem& s, const SlottedLoadModel& l, const UncertaintyModel& u,
             CcgConfig cfg) {
  Run r;
  r.label = std::move(label);
  r.system = &s;
  r.loads = &l;
  r.uncertainty = &u;
  r.mode = cfg.mode;
  const auto t0 = Clock::now();
  try {
    r.report = run_ccg(s, l, u, cfg);
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.seconds = seconds_since(t0);
  std::fprintf(stderr, "[acceptance] %s: %s, %zu iterations, %zu cuts, objective %.6f, %.1f s%s%s\n",
               r.label.c_str(), r.error.empty() ? std::string(to_string(r.report.reason)).c_str() : "error",
               r.report.iterations.size(), r.report.cuts.size(), r.report.cost.total, r.seconds,
               r.error.empty() ? "" : ": ", r.error.c_str());
  return r;
}

bool converged(const Run& r) { return r.error.empty() && r.report.reason == Termination::kConverged; }

// True when no candidate line is in service before the construction period
// has passed.
bool respects_lead(const Run& r) {
  if (!r.report.has_plan) return true;
  const auto& cat = r.report.catalog;
  const int lead = r.system->horizon.line_lead_years;
  for (std::size_t i = 0; i < cat.lines.size(); ++i) {
    if (cat.lines[i].existing) continue;
    for (int y = 0; y < std::min(lead, r.report.plan.num_years); ++y) {
      if (r.report.plan.line_built[i][y]) return false;
    }
  }
  return true;
}

bool monotone(const Run& r) {
  const auto& it = r.report.iterations;
  for (std::size_t i = 1; i < it.size(); ++i) {
    const double prev = it[i - 1].master_objective;
    if (it[i].master_objective < prev - 1e-6 * std::max(1.0, std::abs(prev))) return false;
  }
  return true;
}

struct Garver {
  RunConfig config;
  Inputs inputs;
  std::map<std::string, Run> runs;
  bool loaded = false;
  std::string error;

  CcgConfig ccg(Mode mode, double tol) const {
    CcgConfig c;
    c.mode = mode;
    c.tolerance = tol;
    c.max_iterations = config.max_iterations;
    c.assets = config.assets;
    c.master_params = config.solver;
    c.parallel = config.parallel;
    c.all_violating_slots = config.all_violating_slots;
    return c;
  }

  const Run& get(const std::string& key, Mode mode, double tol) {
    auto it = runs.find(key);
    if (it != runs.end()) return it->second;
    return runs.emplace(key, plan_run("garver " + key, inputs.system, inputs.loads, inputs.uncertainty,
                                      ccg(mode, tol)))
        .first->second;
  }
};

// Small planning instances whose subproblems enumerate instantly.
struct Toy {
  std::string name;
  PlanningSystem system;
  SlottedLoadModel loads;
  UncertaintyModel uncertainty;
};

std::vector<Toy> toys() {
  std::vector<Toy> out;
  {
    Toy t;
    t.name = "two-bus";
    t.system = two_bus_system();
    t.loads = flat_loads(t.system, {0.0, 50.0}, 4, 1);
    const double b[] = {1};
    t.uncertainty = build_uncertainty(t.loads, 0.4, b);
    out.push_back(std::move(t));
  }
  {
    Toy t;
    t.name = "two-bus ramping";
    t.system = two_bus_system();
    t.system.horizon.num_years = 2;
    t.system.horizon.discount_rate = 0.05;
    t.system.existing_generators[0].ramp_up = 8.0;
    t.system.generator_types = {{"CT", 0.0, 40.0, 40.0, 40.0, 2.0, 0.0, 0.02}};
    t.system.buses[1].max_new_generators = 1;
    t.system.candidate_gen_buses = {"2"};
    std::vector<std::vector<double>> curves(2);
    for (int h = 0; h < 48; ++h) curves[1].push_back(45.0 + 12.0 * std::sin(h * 0.5) + (h % 5 == 0 ? 9.0 : 0.0));
    t.loads = build_load_model(curves, 2, 0.05, equal_slot_durations(48, 3));
    const double b[] = {1};
    t.uncertainty = build_uncertainty(t.loads, 0.1, b);
    out.push_back(std::move(t));
  }
  {
    Toy t;
    t.name = "triangle";
    t.system.name = "tri";
    t.system.buses = {{"1", false, 0}, {"2", true, 0}, {"3", true, 0}};
    t.system.corridors = {{"1-3", "1", "3", 0.1, 60.0, 1, 2, 10.0},
                          {"1-2", "1", "2", 0.1, 100.0, 1, 2, 8.0},
                          {"2-3", "2", "3", 0.1, 100.0, 1, 1, 10.0}};
    t.system.existing_generators = {{"G", "1", 0.0, 250.0, 60.0, 60.0, 0.0, 0.001}};
    t.system.facts_types = {{"F", 10.0, 1.0}};
    t.system.candidate_line_corridors = {"1-3", "1-2"};
    t.system.candidate_facts_corridors = {"1-3"};
    t.system.horizon.num_years = 2;
    t.system.horizon.discount_rate = 0.05;
    std::vector<std::vector<double>> curves(3);
    for (int h = 0; h < 24; ++h) {
      curves[1].push_back(30.0 + 10.0 * std::cos(h * 0.3));
      curves[2].push_back(70.0 + 15.0 * std::sin(h * 0.4));
    }
    t.loads = build_load_model(curves, 2, 0.05, equal_slot_durations(24, 2));
    const double b[] = {1};
    t.uncertainty = build_uncertainty(t.loads, 0.15, b);
    out.push_back(std::move(t));
  }
  return out;
}

bool certified(const Run& r, std::string& why) {
  const double budget = r.system->horizon.recourse_budget;
  const PlanCertificate c = certify_plan(r.report.plan, *r.system, r.report.catalog, *r.loads, *r.uncertainty,
                                         budget, 1e-3);
  const bool spr_applies = r.mode == Mode::kM3;
  const bool ok = c.spd1.violation <= 1e-6 && (!c.spd2.evaluated || c.spd2.violation <= 1e-6) &&
                  (!spr_applies || c.spr.violation <= 1e-6);
  if (!ok) {
    why += fmt("%s residual spd1 %.3g spd2 %.3g spr %.3g; ", r.label.c_str(), c.spd1.violation,
               c.spd2.violation, c.spr.violation);
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rtep acceptance checks"};
  std::string data_dir = RTEP_DATA_DIR;
  std::vector<int> only;
  app.add_option("--data", data_dir, "directory holding garver6_run.json");
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  auto selected = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };

  std::map<int, Outcome> results;
  auto guarded = [&](int c, const std::function<Outcome()>& fn) {
    if (!selected(c)) return;
    try {
      results[c] = fn();
    } catch (const std::exception& e) {
      results[c] = {false, std::string("exception: ") + e.what()};
    }
    std::fprintf(stderr, "[acceptance] criterion %d done\n", c);
  };

  const std::vector<Instance> insts = battery(24, 20240611);
  guarded(1, [&] { return criterion_oracle(insts); });
  guarded(2, [&] { return criterion_red(insts); });
  guarded(8, [&] { return criterion_builder(); });

  Garver g;
  const bool need_garver = selected(3) || selected(4) || selected(5) || selected(6) || selected(7) || selected(9);
  if (need_garver) {
    try {
      g.config = load_run_config(data_dir + "/garver6_run.json");
      g.inputs = prepare_inputs(g.config);
      g.loaded = true;
    } catch (const std::exception& e) {
      g.error = e.what();
    }
  }
  auto need = [&]() {
    if (!g.loaded) throw Error(ErrorCode::kInvalidInput, "bundled example not loaded: " + g.error);
  };
  const double tol = 1e-3;

  guarded(9, [&] {
    need();
    const Run& m3 = g.get("M3", Mode::kM3, tol);
    Outcome o;
    o.pass = converged(m3) && m3.seconds < 600.0;
    o.detail = fmt("M3 %s in %.1f s (limit 600 s), %zu iterations", converged(m3) ? "converged" : "did not converge",
                   m3.seconds, m3.report.iterations.size());
    return o;
  });

  guarded(4, [&] {
    need();
    const Run& m1 = g.get("M1", Mode::kM1, tol);
    const Run& m2 = g.get("M2", Mode::kM2, tol);
    const Run& m3 = g.get("M3", Mode::kM3, tol);
    Outcome o;
    if (!converged(m1) || !converged(m2) || !converged(m3)) {
      o.detail = "a run did not converge";
      return o;
    }
    const double a = m1.report.cost.total, b = m2.report.cost.total, c = m3.report.cost.total;
    const double eps = 1e-6 * std::max(1.0, std::abs(c));
    o.pass = a <= b + eps && b <= c + eps && c > a + eps;
    o.detail = fmt("M1 %.4f <= M2 %.4f <= M3 %.4f; cuts M2 %d LDCU, M3 %d LDCU + %d HLRU", a, b, c,
                   m2.report.ldcu_cuts, m3.report.ldcu_cuts, m3.report.hlru_cuts);
    return o;
  });

  guarded(6, [&] {
    need();
    const Run& base = g.get("M3", Mode::kM3, tol);
    const Run& loose = g.get("M3 tol 1e-2", Mode::kM3, 1e-2);
    const Run& tight = g.get("M3 tol 1e-4", Mode::kM3, 1e-4);
    Outcome o;
    if (!converged(base) || !converged(loose) || !converged(tight)) {
      o.detail = "a run did not converge";
      return o;
    }
    const double ref = base.report.cost.total;
    const double dl = std::abs(loose.report.cost.total - ref) / std::abs(ref);
    const double dt = std::abs(tight.report.cost.total - ref) / std::abs(ref);
    o.pass = dl < 1e-3 && dt < 1e-3;
    o.detail = fmt("1e-3: %.4f, 1e-2: %.4f (rel %.2g), 1e-4: %.4f (rel %.2g)", ref, loose.report.cost.total, dl,
                   tight.report.cost.total, dt);
    return o;
  });

  guarded(5, [&] {
    need();
    const Run& m1 = g.get("M1", Mode::kM1, tol);
    const Run& m3 = g.get("M3", Mode::kM3, tol);
    Outcome o;
    if (!converged(m1) || !converged(m3)) {
      o.detail = "a run did not converge";
      return o;
    }
    std::string why;
    if (!certified(m3, why)) {
      o.detail = "M3 plan not certified: " + why;
      return o;
    }
    ScenarioConfig sc = g.config.scenarios;
    sc.count = 1000;
    const auto t0 = Clock::now();
    const SimulationMetrics s3 = evaluate(m3.report.plan, g.inputs.system, m3.report.catalog, g.inputs.loads,
                                          g.inputs.uncertainty, sc);
    const SimulationMetrics s1 = evaluate(m1.report.plan, g.inputs.system, m1.report.catalog, g.inputs.loads,
                                          g.inputs.uncertainty, sc);
    o.pass = s3.max_shed_mw <= 1e-6 && s3.eens == 0.0 && s1.elc > 0.0 && s1.eens > 0.0;
    o.detail = fmt("1000 scenarios (seed %llu): M3 max shed %.3g MW, EENS %.4g; M1 ELC %.4g M$, EENS %.4g MWh/yr; "
                   "%.1f s",
                   static_cast<unsigned long long>(sc.seed), s3.max_shed_mw, s3.eens, s1.elc, s1.eens,
                   seconds_since(t0));
    return o;
  });

  guarded(3, [&] {
    std::vector<Toy> ts = toys();
    std::vector<Run> runs;
    for (const Toy& t : ts) {
      for (Mode m : {Mode::kM2, Mode::kM3}) {
        CcgConfig c;
        c.mode = m;
        runs.push_back(plan_run(t.name + " " + std::string(to_string(m)), t.system, t.loads, t.uncertainty, c));
      }
    }
    std::vector<const Run*> all;
    for (const Run& r : runs) all.push_back(&r);
    if (g.loaded) {
      for (const auto& [k, r] : g.runs) all.push_back(&r);
    }
    int certified_count = 0, checked = 0;
    bool ok = true;
    std::string why;
    for (const Run* r : all) {
      if (!r->error.empty()) {
        ok = false;
        why += r->label + ": " + r->error + "; ";
        continue;
      }
      if (!monotone(*r)) {
        ok = false;
        why += r->label + ": master objective decreased; ";
      }
      if (r->mode == Mode::kM1 || !converged(*r)) continue;
      ++checked;
      if (certified(*r, why)) {
        ++certified_count;
      } else {
        ok = false;
      }
    }
    Outcome o;
    o.pass = ok && checked > 0;
    o.detail = fmt("%d/%d converged plans certified, %zu runs monotone-checked %s", certified_count, checked,
                   all.size(), why.c_str());
    return o;
  });

  guarded(7, [&] {
    bool ok = true;
    std::string why;
    // Toy: the second line is needed in year 0.
    // Each run keeps a pointer to its system, so the two leads need separate copies.
    PlanningSystem s0 = two_bus_system();
    s0.horizon.num_years = 2;
    PlanningSystem s1 = s0;
    s1.horizon.line_lead_years = 1;
    const SlottedLoadModel loads = flat_loads(s0, {0.0, 70.0}, 2, 1);
    const UncertaintyModel zero = zero_uncertainty(loads);
    CcgConfig c;
    c.mode = Mode::kM1;
    const Run t0 = plan_run("toy lead 0", s0, loads, zero, c);
    const Run t1 = plan_run("toy lead 1", s1, loads, zero, c);
    const bool toy_ok = converged(t0) && t1.error.empty() &&
                        (t1.report.reason == Termination::kInfeasible ||
                         t1.report.cost.total >= t0.report.cost.total - 1e-9);
    if (!toy_ok) {
      ok = false;
      why += "toy ordering; ";
    }
    std::vector<const Run*> all = {&t0, &t1};
    std::string garver_note;
    if (g.loaded) {
      // Bundled example at lead 0 and lead 1, deterministic model.
      static PlanningSystem gs0, gs1;
      gs0 = g.inputs.system;
      gs1 = g.inputs.system;
      gs0.horizon.line_lead_years = 0;
      gs1.horizon.line_lead_years = 1;
      const Run& g0 = g.runs.emplace("M1 lead 0", plan_run("garver M1 lead 0", gs0, g.inputs.loads,
                                                           g.inputs.uncertainty, g.ccg(Mode::kM1, tol)))
                          .first->second;
      const Run& g1 = g.runs.emplace("M1 lead 1", plan_run("garver M1 lead 1", gs1, g.inputs.loads,
                                                           g.inputs.uncertainty, g.ccg(Mode::kM1, tol)))
                          .first->second;
      const bool gok = converged(g0) && g1.error.empty() &&
                       (g1.report.reason == Termination::kInfeasible ||
                        g1.report.cost.total >= g0.report.cost.total - 1e-6 * std::abs(g0.report.cost.total));
      if (!gok) {
        ok = false;
        why += "bundled ordering; ";
      }
      garver_note = fmt("bundled M1 lead 0 %.4f, lead 1 %s %.4f; ", g0.report.cost.total,
                        std::string(to_string(g1.report.reason)).c_str(), g1.report.cost.total);
      for (const auto& [k, r] : g.runs) all.push_back(&r);
    }
    int plans = 0;
    for (const Run* r : all) {
      if (!r->report.has_plan) continue;
      ++plans;
      if (!respects_lead(*r)) {
        ok = false;
        why += r->label + " has a line before its lead time; ";
      }
    }
    Outcome o;
    o.pass = ok;
    o.detail = fmt("toy lead 0 %.4f, lead 1 %s; %s%d plans checked for early lines %s", t0.report.cost.total,
                   std::string(to_string(t1.report.reason)).c_str(), garver_note.c_str(), plans, why.c_str());
    return o;
  });

  int failed = 0;
  for (const auto& [c, o] : results) {
    std::printf("criterion %d: %s - %s\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    if (!o.pass) ++failed;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
