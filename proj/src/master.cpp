#include "rtep/master.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtep/error.hpp"

namespace rtep {
namespace {

std::string tag(const char* prefix, std::initializer_list<int> parts) {
  std::string s = prefix;
  for (int p : parts) s += "_" + std::to_string(p);
  return s;
}

// Telescoped investment coefficient on the year-y build flag:
// cost * (delta_y - delta_{y+1}), delta_Y = 0.
double invest_coefficient(double cost, const Horizon& hz, int year, int lead) {
  const double now = hz.discount(year - lead);
  const double next = year + 1 < hz.num_years ? hz.discount(year + 1 - lead) : 0.0;
  return cost * (now - next);
}

void add_le(LinearModel& m, Indicator a, Indicator b, const std::string& name) {
  // a <= b for binary indicators
  if (!a.is_column() && !b.is_column()) return;
  if (!a.is_column() && a.value == 0.0) return;
  if (!b.is_column() && b.value == 1.0) return;
  if (a.is_column() && b.is_column()) {
    m.add_row({{a.col, 1.0}, {b.col, -1.0}}, RowSense::kLe, 0.0, name);
  } else if (a.is_column()) {
    m.add_row({{a.col, 1.0}}, RowSense::kLe, b.value, name);
  } else {
    m.add_row({{b.col, 1.0}}, RowSense::kGe, a.value, name);
  }
}

// sum(items) <= rhs_terms + constant, over indicators.
void add_sum_le(LinearModel& m, const std::vector<Indicator>& lhs, const std::vector<Indicator>& rhs,
                double constant, const std::string& name) {
  std::vector<int> idx;
  std::vector<double> val;
  double fixed = constant;
  for (const auto& a : lhs) {
    if (a.is_column()) {
      idx.push_back(a.col);
      val.push_back(1.0);
    } else {
      fixed -= a.value;
    }
  }
  if (idx.empty()) return;
  for (const auto& b : rhs) {
    if (b.is_column()) {
      idx.push_back(b.col);
      val.push_back(-1.0);
    } else {
      fixed += b.value;
    }
  }
  m.add_row(idx, val, RowSense::kLe, fixed, name);
}

double indicator_value(const Indicator& ind, const std::vector<double>& x) {
  return ind.is_column() ? x[ind.col] : ind.value;
}

std::uint8_t round_flag(const Indicator& ind, const std::vector<double>& x) {
  return indicator_value(ind, x) > 0.5 ? 1 : 0;
}

}  // namespace

MasterProblem build_master(const PlanningSystem& system, const SlottedLoadModel& loads,
                           const std::vector<CutPoint>& cuts, const AssetOptions& options) {
  const Horizon& hz = system.horizon;
  const int Y = hz.num_years;
  const int H = loads.num_slots();
  const int nb = static_cast<int>(system.buses.size());
  if (loads.num_years() != Y || loads.num_buses() != nb) {
    throw Error(ErrorCode::kInvalidInput, "load model does not match the system horizon or buses");
  }

  MasterProblem mp;
  LinearModel& m = mp.model;
  MasterIndex& ix = mp.index;
  ix.catalog = AssetCatalog::build(system, options);
  const AssetCatalog& cat = ix.catalog;
  ix.num_years = Y;
  ix.num_slots = H;

  // Build flags.
  ix.line.resize(cat.lines.size());
  for (std::size_t i = 0; i < cat.lines.size(); ++i) {
    const LineUnit& l = cat.lines[i];
    const double cost = system.corridors[l.corridor].line_cost;
    for (int y = 0; y < Y; ++y) {
      if (l.existing) {
        ix.line[i].push_back(Indicator::fixed(1.0));
      } else if (cat.line_may_exist(system, static_cast<int>(i), y)) {
        const int col = m.add_binary(invest_coefficient(cost, hz, y, hz.line_lead_years),
                                     tag("nl", {static_cast<int>(i), y}));
        ix.line[i].push_back(Indicator::column(col));
      } else {
        ix.line[i].push_back(Indicator::fixed(0.0));
      }
    }
  }
  ix.facts.resize(cat.facts.size());
  for (std::size_t f = 0; f < cat.facts.size(); ++f) {
    const FactsUnit& u = cat.facts[f];
    const int li = cat.line_index(u.corridor, u.k);
    const double cost = system.facts_types[u.type].invest_cost;
    for (int y = 0; y < Y; ++y) {
      if (cat.line_may_exist(system, li, y)) {
        const int col = m.add_binary(invest_coefficient(cost, hz, y, Horizon::kFactsLeadYears),
                                     tag("nf", {static_cast<int>(f), y}));
        ix.facts[f].push_back(Indicator::column(col));
      } else {
        ix.facts[f].push_back(Indicator::fixed(0.0));
      }
    }
  }
  ix.gen.resize(cat.new_gens.size());
  for (std::size_t n = 0; n < cat.new_gens.size(); ++n) {
    const double cost = system.generator_types[cat.new_gens[n].type].invest_cost;
    for (int y = 0; y < Y; ++y) {
      if (cat.gen_may_exist(system, static_cast<int>(n), y)) {
        const int col = m.add_binary(invest_coefficient(cost, hz, y, hz.gen_lead_years),
                                     tag("ng", {static_cast<int>(n), y}));
        ix.gen[n].push_back(Indicator::column(col));
      } else {
        ix.gen[n].push_back(Indicator::fixed(0.0));
      }
    }
  }

  // Build rules: once built, always built; sequential fill; one type per slot.
  for (std::size_t i = 0; i < cat.lines.size(); ++i) {
    const LineUnit& l = cat.lines[i];
    for (int y = 0; y < Y; ++y) {
      if (y > 0) add_le(m, ix.line[i][y - 1], ix.line[i][y], tag("nl_keep", {int(i), y}));
      if (l.k > 0) {
        const int prev = cat.line_index(l.corridor, l.k - 1);
        add_le(m, ix.line[i][y], ix.line[prev][y], tag("nl_seq", {int(i), y}));
      }
    }
  }
  for (std::size_t f = 0; f < cat.facts.size(); ++f) {
    const FactsUnit& u = cat.facts[f];
    for (int y = 0; y < Y; ++y) {
      if (y > 0) add_le(m, ix.facts[f][y - 1], ix.facts[f][y], tag("nf_keep", {int(f), y}));
      if (u.k > 0) {
        for (std::size_t g = 0; g < cat.facts.size(); ++g) {
          const FactsUnit& o = cat.facts[g];
          if (o.corridor == u.corridor && o.type == u.type && o.k == u.k - 1) {
            add_le(m, ix.facts[f][y], ix.facts[g][y], tag("nf_seq", {int(f), y}));
          }
        }
      }
    }
  }
  for (int c = 0; c < static_cast<int>(system.corridors.size()); ++c) {
    for (int y = 0; y < Y; ++y) {
      std::vector<Indicator> devices;
      std::vector<Indicator> lines;
      for (int k = 0; k < system.corridors[c].max_lines; ++k) {
        std::vector<Indicator> on_line;
        for (std::size_t f = 0; f < cat.facts.size(); ++f) {
          if (cat.facts[f].corridor == c && cat.facts[f].k == k) on_line.push_back(ix.facts[f][y]);
        }
        add_sum_le(m, on_line, {}, 1.0, tag("nf_type", {c, k, y}));
        devices.insert(devices.end(), on_line.begin(), on_line.end());
      }
      for (std::size_t i = 0; i < cat.lines.size(); ++i) {
        if (cat.lines[i].corridor == c) lines.push_back(ix.line[i][y]);
      }
      add_sum_le(m, devices, lines, 0.0, tag("nf_nl", {c, y}));
    }
  }
  for (std::size_t n = 0; n < cat.new_gens.size(); ++n) {
    const NewGenUnit& g = cat.new_gens[n];
    for (int y = 0; y < Y; ++y) {
      if (y > 0) add_le(m, ix.gen[n][y - 1], ix.gen[n][y], tag("ng_keep", {int(n), y}));
      if (g.slot > 0) {
        for (std::size_t o = 0; o < cat.new_gens.size(); ++o) {
          const NewGenUnit& q = cat.new_gens[o];
          if (q.bus == g.bus && q.type == g.type && q.slot == g.slot - 1) {
            add_le(m, ix.gen[n][y], ix.gen[o][y], tag("ng_seq", {int(n), y}));
          }
        }
      }
    }
  }
  for (int b = 0; b < nb; ++b) {
    for (int y = 0; y < Y; ++y) {
      std::vector<Indicator> at_bus;
      for (int s = 0; s < system.buses[b].max_new_generators; ++s) {
        std::vector<Indicator> at_slot;
        for (std::size_t n = 0; n < cat.new_gens.size(); ++n) {
          if (cat.new_gens[n].bus == b && cat.new_gens[n].slot == s) at_slot.push_back(ix.gen[n][y]);
        }
        add_sum_le(m, at_slot, {}, 1.0, tag("ng_type", {b, s, y}));
        at_bus.insert(at_bus.end(), at_slot.begin(), at_slot.end());
      }
      add_sum_le(m, at_bus, {}, system.buses[b].max_new_generators, tag("ng_max", {b, y}));
    }
  }

  // Unit status, with the fixed operating cost.
  const std::size_t nu = cat.units.size();
  ix.status.assign(nu, {});
  for (std::size_t u = 0; u < nu; ++u) {
    const GenUnit& g = cat.units[u];
    for (int y = 0; y < Y; ++y) {
      const double disc = hz.discount(y - g.discount_offset);
      const Indicator built = g.new_index >= 0 ? ix.gen[g.new_index][y] : Indicator::fixed(1.0);
      for (int h = 0; h < H; ++h) {
        if (built.is_off()) {
          ix.status[u].push_back(Indicator::fixed(0.0));
          continue;
        }
        const int col = m.add_binary(loads.duration(h) * g.cost_fixed * disc,
                                     tag("v", {int(u), y, h}));
        ix.status[u].push_back(Indicator::column(col));
        if (built.is_column()) {
          m.add_row({{col, 1.0}, {built.col, -1.0}}, RowSense::kLe, 0.0, tag("v_built", {int(u), y, h}));
        }
      }
    }
  }

  // Operating block template for (y, h); costs filled by the caller.
  auto block_spec = [&](int y, int h, const std::string& name) {
    BlockSpec spec;
    spec.tag = name;
    spec.num_buses = nb;
    spec.theta_max = hz.theta_max;
    for (std::size_t i = 0; i < cat.lines.size(); ++i) {
      const Corridor& c = system.corridors[cat.lines[i].corridor];
      spec.lines.push_back({*system.bus_index(c.from_bus), *system.bus_index(c.to_bus),
                            c.reactance / system.base_mva, c.line_capacity, ix.line[i][y]});
    }
    for (std::size_t f = 0; f < cat.facts.size(); ++f) {
      const FactsUnit& u = cat.facts[f];
      spec.facts.push_back({cat.line_index(u.corridor, u.k), system.facts_types[u.type].capacity,
                            ix.facts[f][y]});
    }
    const int cell = y * H + h;
    for (std::size_t u = 0; u < nu; ++u) {
      const GenUnit& g = cat.units[u];
      BlockUnit bu;
      bu.bus = g.bus;
      bu.p_min = g.p_min;
      bu.p_max = g.p_max;
      bu.status = ix.status[u][cell];
      spec.units.push_back(bu);
    }
    spec.load.resize(nb);
    for (int b = 0; b < nb; ++b) spec.load[b] = loads.levels(b, y, h);
    return spec;
  };

  // Base case.
  ix.dispatch.assign(nu, std::vector<int>(static_cast<std::size_t>(Y * H), -1));
  std::vector<std::vector<double>> weight(nu, std::vector<double>(static_cast<std::size_t>(Y * H)));
  for (int y = 0; y < Y; ++y) {
    for (int h = 0; h < H; ++h) {
      BlockSpec spec = block_spec(y, h, tag("b", {y, h}) + "_");
      for (std::size_t u = 0; u < nu; ++u) {
        const GenUnit& g = cat.units[u];
        weight[u][y * H + h] = loads.duration(h) * g.cost_marginal * hz.discount(y - g.discount_offset);
        spec.units[u].cost = weight[u][y * H + h];
      }
      const BlockIndex bi = add_operating_block(m, spec);
      for (std::size_t u = 0; u < nu; ++u) ix.dispatch[u][y * H + h] = bi.dispatch[u];
    }
  }

  // Recourse blocks, one per cut.
  const bool limited = std::isfinite(hz.recourse_budget);
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const CutPoint& cut = cuts[j];
    if (!cut.point.epsilon.same_shape(nb, Y, H)) {
      throw Error(ErrorCode::kInvalidInput, "cut point has wrong dimensions");
    }
    std::vector<int> rc_idx;
    std::vector<double> rc_val;
    for (int y = 0; y < Y; ++y) {
      for (int h = 0; h < H; ++h) {
        bool nonzero = false;
        for (int b = 0; b < nb; ++b) nonzero = nonzero || cut.point.epsilon(b, y, h) != 0.0;
        const bool full = cut.kind == SetKind::kLdcu && limited;
        if (!nonzero && !full) continue;
        BlockSpec spec = block_spec(y, h, tag("k", {int(j), y, h}) + "_");
        for (int b = 0; b < nb; ++b) spec.load[b] += cut.point.epsilon(b, y, h);
        const BlockIndex bi = add_operating_block(m, spec);
        const int cell = y * H + h;
        for (std::size_t u = 0; u < nu; ++u) {
          const int p = ix.dispatch[u][cell];
          const int q = bi.dispatch[u];
          if (p < 0) continue;
          const GenUnit& g = cat.units[u];
          if (cut.kind == SetKind::kHlru) {
            const std::string nm = tag("ramp", {int(j), int(u), y, h});
            m.add_row({{q, 1.0}, {p, -1.0}}, RowSense::kLe, g.ramp_up, nm + "_up");
            m.add_row({{q, 1.0}, {p, -1.0}}, RowSense::kGe, -g.ramp_down, nm + "_dn");
          } else if (full) {
            rc_idx.push_back(q);
            rc_val.push_back(weight[u][cell]);
            rc_idx.push_back(p);
            rc_val.push_back(-weight[u][cell]);
          }
        }
      }
    }
    if (cut.kind == SetKind::kLdcu && limited) {
      m.add_row(rc_idx, rc_val, RowSense::kLe, hz.recourse_budget, tag("recourse", {int(j)}));
    }
    ++ix.num_cut_blocks;
  }
  return mp;
}

Plan round_plan(const std::vector<double>& x, const MasterIndex& ix) {
  const AssetCatalog& cat = ix.catalog;
  Plan plan = Plan::empty(cat, ix.num_years, ix.num_slots);
  for (std::size_t i = 0; i < cat.lines.size(); ++i) {
    for (int y = 0; y < ix.num_years; ++y) plan.line_built[i][y] = round_flag(ix.line[i][y], x);
  }
  for (std::size_t f = 0; f < cat.facts.size(); ++f) {
    for (int y = 0; y < ix.num_years; ++y) plan.facts_built[f][y] = round_flag(ix.facts[f][y], x);
  }
  for (std::size_t n = 0; n < cat.new_gens.size(); ++n) {
    for (int y = 0; y < ix.num_years; ++y) plan.gen_built[n][y] = round_flag(ix.gen[n][y], x);
  }
  constexpr double kSnap = 1e-6;
  for (std::size_t u = 0; u < cat.units.size(); ++u) {
    const GenUnit& g = cat.units[u];
    for (std::size_t c = 0; c < plan.status[u].size(); ++c) {
      const std::uint8_t on = round_flag(ix.status[u][c], x);
      plan.status[u][c] = on;
      const int col = ix.dispatch[u][c];
      double p = col >= 0 ? x[col] : 0.0;
      // Snap solver noise back inside the limits implied by the rounded status.
      const double lo = on ? g.p_min : 0.0;
      const double hi = on ? g.p_max : 0.0;
      const double tol = kSnap * std::max(1.0, g.p_max);
      if (p < lo && p >= lo - tol) p = lo;
      if (p > hi && p <= hi + tol) p = hi;
      plan.dispatch[u][c] = p;
    }
  }
  return plan;
}

ExtractedPlan extract_plan(const SolveResult& result, const MasterProblem& master,
                           const PlanningSystem& system, const SlottedLoadModel& loads) {
  if (!result.has_solution()) {
    throw Error(ErrorCode::kPrecondition, "master problem has no solution to extract");
  }
  ExtractedPlan out;
  out.plan = round_plan(result.primal, master.index);
  const std::string broken = check_plan(system, master.index.catalog, out.plan);
  if (!broken.empty()) {
    throw Error(ErrorCode::kNumericalIntegrality, "rounded plan is inconsistent: " + broken);
  }
  out.cost = cost_of(system, master.index.catalog, out.plan, loads.slot_durations);
  const double diff = std::abs(out.cost.total - result.objective);
  if (diff > 1e-4 * std::max(1.0, std::abs(result.objective))) {
    throw Error(ErrorCode::kNumericalIntegrality,
                "recomputed cost " + std::to_string(out.cost.total) +
                    " differs from the solver objective " + std::to_string(result.objective));
  }
  return out;
}

}  // namespace rtep
