#include "rtep/subproblems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "rtep/error.hpp"
#include "rtep/network.hpp"

namespace rtep {
namespace {

constexpr double kBoundHitFraction = 1.0 - 1e-6;

struct DualBlock {
  std::vector<int> z_plus;   // LDCU
  std::vector<int> z_minus;  // LDCU
  std::vector<int> z;        // HLRU
  std::vector<int> y_balance;
};

// Appends the dual of `inner` with the slot's uncertainty in extreme-point
// form to the maximisation model `d`.
DualBlock add_dual_block(LinearModel& d, const InnerProblem& inner, const SlotSet& set,
                         double bound, bool budget_equality, const std::string& tag) {
  const LinearModel& p = inner.model;
  const int nr = p.num_rows();
  const int nc = p.num_variables();
  DualBlock blk;

  std::vector<int> balance_bus(nr, -1);
  for (int b = 0; b < static_cast<int>(inner.balance_row.size()); ++b) {
    if (inner.balance_row[b] >= 0) balance_bus[inner.balance_row[b]] = b;
  }

  std::vector<int> y(nr);
  for (int r = 0; r < nr; ++r) {
    const Row& row = p.row(r);
    double lo = row.sense == RowSense::kGe ? 0.0 : -kInfinity;
    double hi = row.sense == RowSense::kLe ? 0.0 : kInfinity;
    if (balance_bus[r] >= 0) {
      lo = std::max(lo, -bound);
      hi = std::min(hi, bound);
    }
    y[r] = d.add_variable(lo, hi, row.rhs, false, tag + "y_" + std::to_string(r));
  }
  blk.y_balance.assign(inner.balance_row.size(), -1);
  for (int b = 0; b < static_cast<int>(inner.balance_row.size()); ++b) {
    if (inner.balance_row[b] >= 0) blk.y_balance[b] = y[inner.balance_row[b]];
  }

  // Column-wise view of the inner matrix.
  std::vector<std::vector<std::pair<int, double>>> cols(nc);
  for (int r = 0; r < nr; ++r) {
    const Row& row = p.row(r);
    for (std::size_t k = 0; k < row.index.size(); ++k) cols[row.index[k]].push_back({r, row.value[k]});
  }
  for (int j = 0; j < nc; ++j) {
    const Variable& v = p.variable(j);
    std::vector<int> idx;
    std::vector<double> val;
    for (const auto& [r, a] : cols[j]) {
      idx.push_back(y[r]);
      val.push_back(a);
    }
    const std::string nm = tag + "c_" + std::to_string(j);
    if (v.lower == v.upper) {
      idx.push_back(d.add_variable(-kInfinity, kInfinity, v.lower, false, nm + "_fix"));
      val.push_back(1.0);
    } else {
      if (std::isfinite(v.lower)) {
        idx.push_back(d.add_variable(0.0, kInfinity, v.lower, false, nm + "_lo"));
        val.push_back(1.0);
      }
      if (std::isfinite(v.upper)) {
        idx.push_back(d.add_variable(-kInfinity, 0.0, v.upper, false, nm + "_up"));
        val.push_back(1.0);
      }
    }
    d.add_row(idx, val, RowSense::kEq, v.cost, nm);
  }

  // w = y * z, exact for binary z with y in [lo, hi].
  auto product = [&](int ycol, int zcol, const std::string& nm) {
    const double lo = d.variable(ycol).lower;
    const double hi = d.variable(ycol).upper;
    const int w = d.add_variable(lo, hi, 0.0, false, nm);
    d.add_row({{w, 1.0}, {zcol, -hi}}, RowSense::kLe, 0.0, nm + "_a");
    d.add_row({{w, 1.0}, {zcol, -lo}}, RowSense::kGe, 0.0, nm + "_b");
    d.add_row({{w, 1.0}, {ycol, -1.0}, {zcol, -lo}}, RowSense::kLe, -lo, nm + "_c");
    d.add_row({{w, 1.0}, {ycol, -1.0}, {zcol, -hi}}, RowSense::kGe, -hi, nm + "_d");
    return w;
  };

  // rhs_b = -load_b - eps_b, so each balance dual picks up -eps_b * y_b.
  std::vector<int> all_z;
  for (std::size_t i = 0; i < set.buses.size(); ++i) {
    const int b = set.buses[i];
    const int yb = blk.y_balance[b];
    if (yb < 0) {
      throw Error(ErrorCode::kModelConstruction, "uncertain bus without a balance row");
    }
    const std::string nm = tag + "u_" + std::to_string(b);
    if (set.kind == SetKind::kLdcu) {
      const double u = set.halfwidth[i];
      const int zp = d.add_binary(0.0, nm + "_zp");
      const int zm = d.add_binary(0.0, nm + "_zm");
      d.add_row({{zp, 1.0}, {zm, 1.0}}, RowSense::kLe, 1.0, nm + "_one");
      d.add_cost(product(yb, zp, nm + "_wp"), -u);
      d.add_cost(product(yb, zm, nm + "_wm"), u);
      blk.z_plus.push_back(zp);
      blk.z_minus.push_back(zm);
      all_z.push_back(zp);
      all_z.push_back(zm);
    } else {
      const double lo = set.lower[i];
      const double hi = set.upper[i];
      const int z = d.add_binary(0.0, nm + "_z");
      d.add_cost(yb, -lo);
      d.add_cost(product(yb, z, nm + "_w"), -(hi - lo));
      blk.z.push_back(z);
    }
  }
  if (set.kind == SetKind::kLdcu && !all_z.empty()) {
    const std::vector<double> ones(all_z.size(), 1.0);
    if (budget_equality) {
      d.add_row(all_z, ones, RowSense::kEq, set.cardinality, tag + "budget");
    } else {
      d.add_row(all_z, ones, RowSense::kLe, set.budget, tag + "budget");
    }
  }
  d.set_offset(d.offset() + p.offset());
  return blk;
}

SlotPoint read_point(const DualBlock& blk, const SlotSet& set, int num_buses,
                     const std::vector<double>& x) {
  SlotPoint eps(static_cast<std::size_t>(num_buses), 0.0);
  for (std::size_t i = 0; i < set.buses.size(); ++i) {
    const int b = set.buses[i];
    if (set.kind == SetKind::kLdcu) {
      if (x[blk.z_plus[i]] > 0.5) eps[b] = set.halfwidth[i];
      if (x[blk.z_minus[i]] > 0.5) eps[b] = -set.halfwidth[i];
    } else {
      eps[b] = x[blk.z[i]] > 0.5 ? set.upper[i] : set.lower[i];
    }
  }
  return eps;
}

void check_certificate(const DualBlock& blk, double bound, const std::vector<double>& x,
                       const SlotContext& slot) {
  for (int col : blk.y_balance) {
    if (col >= 0 && std::abs(x[col]) >= bound * kBoundHitFraction) {
      throw Error(ErrorCode::kDualBoundTooTight,
                  "recourse dual reached its bound " + std::to_string(bound) + " in slot (" +
                      std::to_string(slot.year) + ", " + std::to_string(slot.slot) +
                      "); increase the recourse dual bound");
    }
  }
}

bool trivially_fixed(const SlotSet& set) {
  return set.buses.empty() || (set.kind == SetKind::kLdcu && set.cardinality == 0);
}

SlotPoint fixed_point(const SlotSet& set, int num_buses) {
  SlotPoint eps(static_cast<std::size_t>(num_buses), 0.0);
  if (set.kind == SetKind::kHlru) {
    for (std::size_t i = 0; i < set.buses.size(); ++i) eps[set.buses[i]] = set.lower[i];
  }
  return eps;
}

// Runs fn(i) for i in [0, n), optionally on worker threads; exceptions are
// rethrown in index order.
void for_each_slot(std::size_t n, bool parallel, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (!parallel || n < 2 || hw < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < std::min<std::size_t>(hw, n); ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

UncertainPoint zero_point(SetKind kind, int nb, int ny, int ns) {
  return UncertainPoint{kind, SlotTensor<double>(nb, ny, ns, 0.0)};
}

void place(UncertainPoint& pt, const SlotVerdict& v) {
  for (std::size_t b = 0; b < v.point.size(); ++b) pt.epsilon(static_cast<int>(b), v.year, v.slot) = v.point[b];
}

std::vector<SlotVerdict> solve_all(std::span<const SlotContext> slots, SetKind kind,
                                   ObjectiveKind objective, const SubproblemOptions& options,
                                   const DualOptions& dual) {
  std::vector<SlotVerdict> out(slots.size());
  for_each_slot(slots.size(), options.parallel,
                [&](std::size_t i) { out[i] = dualize_and_solve(slots[i], kind, objective, dual); });
  return out;
}

SubproblemVerdict max_aggregate(std::vector<SlotVerdict> verdicts, SetKind kind, int nb, int ny,
                                int ns, const SubproblemOptions& options) {
  SubproblemVerdict out;
  out.worst_point = zero_point(kind, nb, ny, ns);
  out.slots = std::move(verdicts);
  for (std::size_t i = 0; i < out.slots.size(); ++i) {
    if (out.binding < 0 || out.slots[i].value > out.violation) {
      out.violation = out.slots[i].value;
      out.binding = static_cast<int>(i);
    }
  }
  out.violation = std::max(0.0, out.violation);
  if (out.binding >= 0) {
    if (options.all_violating_slots) {
      for (const auto& v : out.slots) {
        if (v.value > options.tolerance) place(out.worst_point, v);
      }
    }
    place(out.worst_point, out.slots[out.binding]);
  }
  return out;
}

}  // namespace

SlotContext make_slot_context(const PlanningSystem& system, const AssetCatalog& catalog,
                              const Plan& plan, const SlottedLoadModel& loads,
                              const UncertaintyModel& uncertainty, int year, int slot) {
  const Horizon& hz = system.horizon;
  SlotContext ctx;
  ctx.year = year;
  ctx.slot = slot;
  ctx.num_buses = static_cast<int>(system.buses.size());
  ctx.duration = loads.duration(slot);
  ctx.theta_max = hz.theta_max;
  for (std::size_t i = 0; i < catalog.lines.size(); ++i) {
    if (!plan.line_built[i][year]) continue;
    const LineUnit& l = catalog.lines[i];
    const Corridor& c = system.corridors[l.corridor];
    SlotLine sl;
    sl.from = *system.bus_index(c.from_bus);
    sl.to = *system.bus_index(c.to_bus);
    sl.reactance_pu = c.reactance / system.base_mva;
    sl.capacity = c.line_capacity;
    for (std::size_t f = 0; f < catalog.facts.size(); ++f) {
      const FactsUnit& u = catalog.facts[f];
      if (u.corridor == l.corridor && u.k == l.k && plan.facts_built[f][year]) {
        sl.facts_capacity += system.facts_types[u.type].capacity;
      }
    }
    ctx.lines.push_back(sl);
  }
  const int cell = plan.cell(year, slot);
  for (std::size_t u = 0; u < catalog.units.size(); ++u) {
    if (!plan.status[u][cell]) continue;
    const GenUnit& g = catalog.units[u];
    SlotUnit su;
    su.unit = static_cast<int>(u);
    su.bus = g.bus;
    su.p_min = g.p_min;
    su.p_max = g.p_max;
    su.ramp_up = g.ramp_up;
    su.ramp_down = g.ramp_down;
    su.base = plan.dispatch[u][cell];
    su.weight = ctx.duration * g.cost_marginal * hz.discount(year - g.discount_offset);
    ctx.units.push_back(su);
  }
  for (int b = 0; b < ctx.num_buses; ++b) {
    ctx.load.push_back(loads.levels(b, year, slot));
    ctx.ldcu_halfwidth.push_back(uncertainty.ldcu.halfwidth(b, year, slot));
    ctx.hlru_lower.push_back(uncertainty.hlru.lower(b, year, slot));
    ctx.hlru_upper.push_back(uncertainty.hlru.upper(b, year, slot));
  }
  ctx.budget = uncertainty.budget(year, slot);
  return ctx;
}

std::vector<SlotContext> make_slot_contexts(const PlanningSystem& system,
                                            const AssetCatalog& catalog, const Plan& plan,
                                            const SlottedLoadModel& loads,
                                            const UncertaintyModel& uncertainty) {
  std::vector<SlotContext> out;
  for (int y = 0; y < loads.num_years(); ++y) {
    for (int h = 0; h < loads.num_slots(); ++h) {
      out.push_back(make_slot_context(system, catalog, plan, loads, uncertainty, y, h));
    }
  }
  return out;
}

InnerProblem build_inner(const SlotContext& slot, SetKind kind, ObjectiveKind objective) {
  BlockSpec spec;
  spec.tag = "";
  spec.num_buses = slot.num_buses;
  spec.theta_max = slot.theta_max;
  spec.load = slot.load;
  spec.slacks = objective == ObjectiveKind::kSlack;
  spec.all_balance_rows = true;
  for (std::size_t i = 0; i < slot.lines.size(); ++i) {
    const SlotLine& l = slot.lines[i];
    spec.lines.push_back({l.from, l.to, l.reactance_pu, l.capacity, Indicator::fixed(1.0)});
    if (l.facts_capacity > 0.0) {
      spec.facts.push_back({static_cast<int>(i), l.facts_capacity, Indicator::fixed(1.0)});
    }
  }
  double offset = 0.0;
  for (const SlotUnit& u : slot.units) {
    BlockUnit bu;
    bu.bus = u.bus;
    bu.p_min = u.p_min;
    bu.p_max = u.p_max;
    bu.status = Indicator::fixed(1.0);
    if (kind == SetKind::kHlru) {
      bu.tethered = true;
      bu.lower = std::max(u.p_min, u.base - u.ramp_down);
      bu.upper = std::min(u.p_max, u.base + u.ramp_up);
      if (bu.lower > bu.upper) bu.lower = bu.upper;  // base outside limits; keep the LP well posed
    }
    if (objective == ObjectiveKind::kRecourse) {
      bu.cost = u.weight;
      offset -= u.weight * u.base;
    }
    spec.units.push_back(bu);
  }
  InnerProblem inner;
  const BlockIndex bi = add_operating_block(inner.model, spec);
  inner.model.set_offset(offset);
  inner.balance_row = bi.balance_row;
  inner.load = slot.load;
  return inner;
}

double evaluate_inner(const InnerProblem& inner, std::span<const double> epsilon) {
  if (epsilon.size() != inner.balance_row.size()) {
    throw Error(ErrorCode::kInvalidInput, "deviation vector has wrong dimension");
  }
  LinearModel m = inner.model;
  for (std::size_t b = 0; b < epsilon.size(); ++b) {
    if (inner.balance_row[b] >= 0) m.set_rhs(inner.balance_row[b], -inner.load[b] - epsilon[b]);
  }
  SolveParams params;
  params.feasibility_tol = 1e-9;
  const SolveResult r = solve(m, params);
  if (r.status == SolveStatus::kUnbounded) {
    throw Error(ErrorCode::kModelConstruction, "inner problem is unbounded");
  }
  if (r.status == SolveStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "inner problem is infeasible at this deviation");
  }
  if (r.status != SolveStatus::kOptimal) throw Error(ErrorCode::kBackend, "inner LP did not solve");
  return r.objective;
}

SlotSet slot_set(const SlotContext& slot, SetKind kind) {
  SlotSet set;
  set.kind = kind;
  set.budget = slot.budget;
  for (int b = 0; b < slot.num_buses; ++b) {
    if (kind == SetKind::kLdcu) {
      if (slot.ldcu_halfwidth[b] > 0.0) {
        set.buses.push_back(b);
        set.halfwidth.push_back(slot.ldcu_halfwidth[b]);
      }
    } else if (slot.hlru_upper[b] > slot.hlru_lower[b]) {
      set.buses.push_back(b);
      set.lower.push_back(slot.hlru_lower[b]);
      set.upper.push_back(slot.hlru_upper[b]);
    }
  }
  set.cardinality = std::min(slot.budget, static_cast<int>(set.buses.size()));
  return set;
}

double recourse_dual_bound(std::span<const SlotContext> slots) {
  double cost = 0.0;
  double peak = 0.0;
  double width = 0.0;
  double longest = 0.0;
  for (const SlotContext& s : slots) {
    for (const SlotUnit& u : s.units) {
      if (s.duration > 0.0) cost = std::max(cost, std::abs(u.weight) / s.duration);
    }
    double load = 0.0;
    double w = 0.0;
    for (int b = 0; b < s.num_buses; ++b) {
      load += std::abs(s.load[b]);
      w += s.ldcu_halfwidth[b];
    }
    peak = std::max(peak, load);
    width = std::max(width, w);
    longest = std::max(longest, s.duration);
  }
  const double bound = cost * (peak + width) * longest;
  return bound > 0.0 ? bound : 1.0;
}

SlotVerdict dualize_and_solve(const SlotContext& slot, SetKind kind, ObjectiveKind objective,
                              const DualOptions& options) {
  SlotVerdict v;
  v.year = slot.year;
  v.slot = slot.slot;
  const InnerProblem inner = build_inner(slot, kind, objective);
  const SlotSet set = slot_set(slot, kind);
  if (trivially_fixed(set)) {
    v.point = fixed_point(set, slot.num_buses);
    v.value = evaluate_inner(inner, v.point);
    v.milp_objective = v.value;
    return v;
  }
  double bound = 1.0;
  if (objective == ObjectiveKind::kRecourse) {
    bound = options.recourse_bound > 0.0 ? options.recourse_bound
                                         : recourse_dual_bound(std::span<const SlotContext>(&slot, 1));
  }
  v.dual_bound = bound;
  LinearModel d;
  d.set_sense(ObjectiveSense::kMaximize);
  const DualBlock blk = add_dual_block(d, inner, set, bound, options.budget_equality, "");
  const SolveResult r = solve(d, options.params);
  if (r.status == SolveStatus::kUnbounded) {
    throw Error(ErrorCode::kModelConstruction, "dual subproblem is unbounded");
  }
  if (r.status == SolveStatus::kInfeasible) {
    throw Error(ErrorCode::kModelConstruction, "dual subproblem is infeasible");
  }
  if (!r.has_solution()) throw Error(ErrorCode::kBackend, "dual subproblem did not solve");
  if (objective == ObjectiveKind::kRecourse) check_certificate(blk, bound, r.primal, slot);
  v.milp_objective = r.objective;
  v.point = read_point(blk, set, slot.num_buses, r.primal);
  // Report the inner optimum at the exact extreme point rather than the
  // MILP objective, which carries big-M round-off.
  v.value = evaluate_inner(inner, v.point);
  return v;
}

SubproblemVerdict solve_spd1(const SlotContext& slot, const DualOptions& options) {
  SubproblemOptions o;
  o.dual = options;
  SlotContext s = slot;
  s.year = 0;
  s.slot = 0;
  auto out = max_aggregate({dualize_and_solve(s, SetKind::kLdcu, ObjectiveKind::kSlack, options)},
                           SetKind::kLdcu, slot.num_buses, 1, 1, o);
  out.slots[0].year = slot.year;
  out.slots[0].slot = slot.slot;
  return out;
}

SubproblemVerdict solve_spr(const SlotContext& slot, const DualOptions& options) {
  SubproblemOptions o;
  o.dual = options;
  SlotContext s = slot;
  s.year = 0;
  s.slot = 0;
  auto out = max_aggregate({dualize_and_solve(s, SetKind::kHlru, ObjectiveKind::kSlack, options)},
                           SetKind::kHlru, slot.num_buses, 1, 1, o);
  out.slots[0].year = slot.year;
  out.slots[0].slot = slot.slot;
  return out;
}

SubproblemVerdict run_spd1(std::span<const SlotContext> slots, int num_buses, int num_years,
                           int num_slots, const SubproblemOptions& options) {
  return max_aggregate(solve_all(slots, SetKind::kLdcu, ObjectiveKind::kSlack, options, options.dual),
                       SetKind::kLdcu, num_buses, num_years, num_slots, options);
}

SubproblemVerdict run_spr(std::span<const SlotContext> slots, int num_buses, int num_years,
                          int num_slots, const SubproblemOptions& options) {
  return max_aggregate(solve_all(slots, SetKind::kHlru, ObjectiveKind::kSlack, options, options.dual),
                       SetKind::kHlru, num_buses, num_years, num_slots, options);
}

SubproblemVerdict run_spd2(std::span<const SlotContext> slots, int num_buses, int num_years,
                           int num_slots, double recourse_budget, const SubproblemVerdict& spd1,
                           const SubproblemOptions& options) {
  if (spd1.slots.size() != slots.size() || spd1.violation > options.tolerance) {
    throw Error(ErrorCode::kPrecondition,
                "recourse-cost check needs a passing physical-feasibility check on the same slots");
  }
  SubproblemVerdict out;
  out.worst_point = zero_point(SetKind::kLdcu, num_buses, num_years, num_slots);
  if (!std::isfinite(recourse_budget)) return out;
  DualOptions dual = options.dual;
  if (dual.recourse_bound <= 0.0) dual.recourse_bound = recourse_dual_bound(slots);
  out.slots = solve_all(slots, SetKind::kLdcu, ObjectiveKind::kRecourse, options, dual);
  double total = 0.0;
  for (const auto& v : out.slots) {
    total += v.value;
    place(out.worst_point, v);
  }
  out.violation = std::max(0.0, total - recourse_budget);
  return out;
}

double solve_monolithic(std::span<const SlotContext> slots, SetKind kind, ObjectiveKind objective,
                        const DualOptions& options) {
  LinearModel d;
  d.set_sense(ObjectiveSense::kMaximize);
  double bound = 1.0;
  if (objective == ObjectiveKind::kRecourse) {
    bound = options.recourse_bound > 0.0 ? options.recourse_bound : recourse_dual_bound(slots);
  }
  std::vector<InnerProblem> inners;
  std::vector<SlotSet> sets;
  std::vector<DualBlock> blocks;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    inners.push_back(build_inner(slots[i], kind, objective));
    sets.push_back(slot_set(slots[i], kind));
    if (kind == SetKind::kLdcu && sets.back().cardinality == 0) sets.back().buses.clear();
    blocks.push_back(add_dual_block(d, inners.back(), sets.back(), bound, options.budget_equality,
                                    "s" + std::to_string(i) + "_"));
  }
  const SolveResult r = solve(d, options.params);
  if (!r.has_solution()) {
    throw Error(ErrorCode::kBackend, "monolithic subproblem did not solve: " +
                                         std::string(to_string(r.status)));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (objective == ObjectiveKind::kRecourse) check_certificate(blocks[i], bound, r.primal, slots[i]);
    const SlotPoint pt = sets[i].buses.empty() ? fixed_point(sets[i], slots[i].num_buses)
                                               : read_point(blocks[i], sets[i], slots[i].num_buses, r.primal);
    total += evaluate_inner(inners[i], pt);
  }
  return total;
}

}  // namespace rtep
