#include "rtep/plan.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rtep/error.hpp"

namespace rtep {

double discount_factor(const Horizon& horizon, int exponent) { return horizon.discount(exponent); }

AssetCatalog AssetCatalog::build(const PlanningSystem& system, const AssetOptions& options) {
  AssetCatalog cat;
  cat.options = options;
  const std::set<std::string> line_cands(system.candidate_line_corridors.begin(),
                                         system.candidate_line_corridors.end());
  const std::set<std::string> facts_cands(system.candidate_facts_corridors.begin(),
                                          system.candidate_facts_corridors.end());
  for (int c = 0; c < static_cast<int>(system.corridors.size()); ++c) {
    const Corridor& cor = system.corridors[c];
    const bool cand = options.enable_lines && line_cands.count(cor.id) > 0;
    for (int k = 0; k < cor.max_lines; ++k) {
      const bool existing = k < cor.min_lines;
      cat.lines.push_back({c, k, existing, !existing && cand});
    }
    if (options.enable_facts && facts_cands.count(cor.id) > 0) {
      for (int k = 0; k < cor.max_lines; ++k) {
        if (k >= cor.min_lines && !cand) continue;  // the line can never exist
        for (int m = 0; m < static_cast<int>(system.facts_types.size()); ++m) {
          cat.facts.push_back({c, k, m});
        }
      }
    }
  }
  if (options.enable_gens) {
    // Candidate list order decides unit order; duplicates are ignored.
    std::set<int> seen;
    for (const auto& id : system.candidate_gen_buses) {
      const auto b = system.bus_index(id);
      if (!b || !seen.insert(*b).second) continue;
      for (int s = 0; s < system.buses[*b].max_new_generators; ++s) {
        for (int w = 0; w < static_cast<int>(system.generator_types.size()); ++w) {
          cat.new_gens.push_back({*b, s, w});
        }
      }
    }
  }
  for (const auto& g : system.existing_generators) {
    GenUnit u;
    u.bus = *system.bus_index(g.bus);
    u.label = g.id;
    u.p_min = g.p_min;
    u.p_max = g.p_max;
    u.ramp_up = g.ramp_up;
    u.ramp_down = g.ramp_down;
    u.cost_fixed = g.cost_fixed;
    u.cost_marginal = g.cost_marginal;
    cat.units.push_back(u);
  }
  for (int n = 0; n < static_cast<int>(cat.new_gens.size()); ++n) {
    const NewGenUnit& ng = cat.new_gens[n];
    const GeneratorType& t = system.generator_types[ng.type];
    GenUnit u;
    u.bus = ng.bus;
    u.new_index = n;
    u.label = system.buses[ng.bus].id + "/" + std::to_string(ng.slot) + "/" + t.id;
    u.p_min = t.p_min;
    u.p_max = t.p_max;
    u.ramp_up = t.ramp_up;
    u.ramp_down = t.ramp_down;
    u.cost_fixed = t.cost_fixed;
    u.cost_marginal = t.cost_marginal;
    u.discount_offset = system.horizon.gen_lead_years;
    cat.units.push_back(u);
  }
  return cat;
}

bool AssetCatalog::line_may_exist(const PlanningSystem& system, int line, int year) const {
  const LineUnit& l = lines[line];
  return l.existing || (l.candidate && year >= system.horizon.line_lead_years);
}

bool AssetCatalog::gen_may_exist(const PlanningSystem& system, int /*new_gen*/, int year) const {
  return year >= system.horizon.gen_lead_years;
}

int AssetCatalog::line_index(int corridor, int k) const {
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    if (lines[i].corridor == corridor && lines[i].k == k) return i;
  }
  return -1;
}

Plan Plan::empty(const AssetCatalog& catalog, int num_years, int num_slots) {
  Plan p;
  p.num_years = num_years;
  p.num_slots = num_slots;
  const auto cells = static_cast<std::size_t>(num_years) * num_slots;
  for (const auto& l : catalog.lines) {
    p.line_built.emplace_back(num_years, l.existing ? 1 : 0);
  }
  p.facts_built.assign(catalog.facts.size(), std::vector<std::uint8_t>(num_years, 0));
  p.gen_built.assign(catalog.new_gens.size(), std::vector<std::uint8_t>(num_years, 0));
  p.status.assign(catalog.units.size(), std::vector<std::uint8_t>(cells, 0));
  p.dispatch.assign(catalog.units.size(), std::vector<double>(cells, 0.0));
  return p;
}

std::string check_plan(const PlanningSystem& system, const AssetCatalog& catalog, const Plan& plan) {
  const int Y = plan.num_years;
  const int H = plan.num_slots;
  if (plan.line_built.size() != catalog.lines.size() ||
      plan.facts_built.size() != catalog.facts.size() ||
      plan.gen_built.size() != catalog.new_gens.size() ||
      plan.status.size() != catalog.units.size() || plan.dispatch.size() != catalog.units.size()) {
    return "plan does not match the asset catalog";
  }
  auto monotone = [Y](const std::vector<std::uint8_t>& v) {
    if (static_cast<int>(v.size()) != Y) return false;
    for (int y = 1; y < Y; ++y) {
      if (v[y] < v[y - 1]) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < catalog.lines.size(); ++i) {
    const LineUnit& l = catalog.lines[i];
    const std::string what = "line " + system.corridors[l.corridor].id + "#" + std::to_string(l.k);
    if (!monotone(plan.line_built[i])) return what + " is removed after being built";
    for (int y = 0; y < Y; ++y) {
      const bool on = plan.line_built[i][y] != 0;
      if (l.existing && !on) return what + " is an existing line but out of service";
      if (on && !catalog.line_may_exist(system, static_cast<int>(i), y)) {
        return what + " in service in year " + std::to_string(y) + " before it can be built";
      }
      if (l.k > 0 && on) {
        const int prev = catalog.line_index(l.corridor, l.k - 1);
        if (!plan.line_built[prev][y]) return what + " built out of sequence";
      }
    }
  }
  for (std::size_t f = 0; f < catalog.facts.size(); ++f) {
    const FactsUnit& u = catalog.facts[f];
    const std::string what = "FACTS " + system.corridors[u.corridor].id + "#" +
                             std::to_string(u.k) + "/" + system.facts_types[u.type].id;
    if (!monotone(plan.facts_built[f])) return what + " is removed after being built";
  }
  // Per corridor and line slot: at most one type, sequential fill per type,
  // device count not above line count.
  for (int y = 0; y < Y; ++y) {
    for (std::size_t f = 0; f < catalog.facts.size(); ++f) {
      const FactsUnit& u = catalog.facts[f];
      if (!plan.facts_built[f][y]) continue;
      int same_slot = 0;
      bool prev_ok = u.k == 0;
      for (std::size_t g = 0; g < catalog.facts.size(); ++g) {
        const FactsUnit& o = catalog.facts[g];
        if (o.corridor != u.corridor) continue;
        if (o.k == u.k && plan.facts_built[g][y]) ++same_slot;
        if (o.k == u.k - 1 && o.type == u.type && plan.facts_built[g][y]) prev_ok = true;
      }
      if (same_slot > 1) return "more than one FACTS device on one line";
      if (!prev_ok) return "FACTS devices installed out of sequence";
    }
    for (int c = 0; c < static_cast<int>(system.corridors.size()); ++c) {
      int devices = 0;
      int lines = 0;
      for (std::size_t f = 0; f < catalog.facts.size(); ++f) {
        if (catalog.facts[f].corridor == c) devices += plan.facts_built[f][y];
      }
      for (std::size_t i = 0; i < catalog.lines.size(); ++i) {
        if (catalog.lines[i].corridor == c) lines += plan.line_built[i][y];
      }
      if (devices > lines) {
        return "corridor " + system.corridors[c].id + " has more FACTS devices than lines";
      }
    }
  }
  for (std::size_t n = 0; n < catalog.new_gens.size(); ++n) {
    const NewGenUnit& g = catalog.new_gens[n];
    const std::string what = "generator " + system.buses[g.bus].id + "/" + std::to_string(g.slot) +
                             "/" + system.generator_types[g.type].id;
    if (!monotone(plan.gen_built[n])) return what + " is removed after being built";
    for (int y = 0; y < Y; ++y) {
      if (!plan.gen_built[n][y]) continue;
      if (!catalog.gen_may_exist(system, static_cast<int>(n), y)) {
        return what + " in service before it can be built";
      }
      if (g.slot > 0) {
        bool prev = false;
        for (std::size_t o = 0; o < catalog.new_gens.size(); ++o) {
          const NewGenUnit& q = catalog.new_gens[o];
          if (q.bus == g.bus && q.slot == g.slot - 1 && q.type == g.type && plan.gen_built[o][y]) {
            prev = true;
          }
        }
        if (!prev) return what + " built out of sequence";
      }
    }
  }
  for (int y = 0; y < Y; ++y) {
    for (int b = 0; b < static_cast<int>(system.buses.size()); ++b) {
      int count = 0;
      std::vector<int> per_slot(static_cast<std::size_t>(system.buses[b].max_new_generators), 0);
      for (std::size_t n = 0; n < catalog.new_gens.size(); ++n) {
        const NewGenUnit& g = catalog.new_gens[n];
        if (g.bus != b || !plan.gen_built[n][y]) continue;
        ++count;
        if (++per_slot[g.slot] > 1) return "more than one generator type in one slot";
      }
      if (count > system.buses[b].max_new_generators) {
        return "bus " + system.buses[b].id + " exceeds its new generator limit";
      }
    }
  }
  constexpr double kTol = 1e-6;
  for (std::size_t u = 0; u < catalog.units.size(); ++u) {
    const GenUnit& g = catalog.units[u];
    if (plan.status[u].size() != static_cast<std::size_t>(Y * H) ||
        plan.dispatch[u].size() != static_cast<std::size_t>(Y * H)) {
      return "unit " + g.label + " has the wrong number of slots";
    }
    for (int y = 0; y < Y; ++y) {
      for (int h = 0; h < H; ++h) {
        const int c = plan.cell(y, h);
        const bool on = plan.status[u][c] != 0;
        if (on && g.new_index >= 0 && !plan.gen_built[g.new_index][y]) {
          return "unit " + g.label + " committed before it is built";
        }
        const double p = plan.dispatch[u][c];
        const double scale = std::max(1.0, g.p_max);
        const double lo = on ? g.p_min : 0.0;
        const double hi = on ? g.p_max : 0.0;
        if (p < lo - kTol * scale || p > hi + kTol * scale) {
          return "unit " + g.label + " dispatched outside its limits";
        }
      }
    }
  }
  return {};
}

CostBreakdown cost_of(const PlanningSystem& system, const AssetCatalog& catalog, const Plan& plan,
                      const std::vector<int>& slot_durations) {
  const Horizon& hz = system.horizon;
  CostBreakdown cost;
  for (std::size_t i = 0; i < catalog.lines.size(); ++i) {
    if (catalog.lines[i].existing) continue;
    const double c = system.corridors[catalog.lines[i].corridor].line_cost;
    for (int y = 0; y < plan.num_years; ++y) {
      const int prev = y > 0 ? plan.line_built[i][y - 1] : 0;
      if (plan.line_built[i][y] && !prev) cost.line_invest += c * hz.discount(y - hz.line_lead_years);
    }
  }
  for (std::size_t f = 0; f < catalog.facts.size(); ++f) {
    const double c = system.facts_types[catalog.facts[f].type].invest_cost;
    for (int y = 0; y < plan.num_years; ++y) {
      const int prev = y > 0 ? plan.facts_built[f][y - 1] : 0;
      if (plan.facts_built[f][y] && !prev) cost.facts_invest += c * hz.discount(y);
    }
  }
  for (std::size_t n = 0; n < catalog.new_gens.size(); ++n) {
    const double c = system.generator_types[catalog.new_gens[n].type].invest_cost;
    for (int y = 0; y < plan.num_years; ++y) {
      const int prev = y > 0 ? plan.gen_built[n][y - 1] : 0;
      if (plan.gen_built[n][y] && !prev) cost.gen_invest += c * hz.discount(y - hz.gen_lead_years);
    }
  }
  for (std::size_t u = 0; u < catalog.units.size(); ++u) {
    const GenUnit& g = catalog.units[u];
    for (int y = 0; y < plan.num_years; ++y) {
      const double disc = hz.discount(y - g.discount_offset);
      for (int h = 0; h < plan.num_slots; ++h) {
        const int c = plan.cell(y, h);
        cost.base_operation += slot_durations[h] *
                               (g.cost_fixed * plan.status[u][c] + g.cost_marginal * plan.dispatch[u][c]) *
                               disc;
      }
    }
  }
  cost.total = cost.investment() + cost.base_operation;
  return cost;
}

}  // namespace rtep
