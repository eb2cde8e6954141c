#include "rtep/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "rtep/error.hpp"

namespace rtep {
namespace {

template <typename T>
std::optional<int> find_by_id(const std::vector<T>& items, const std::string& id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool finite(double v) { return std::isfinite(v); }

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void require(bool ok, const std::string& entity, const std::string& message) {
    if (!ok) report_.violations.push_back({entity, message});
  }

 private:
  ValidationReport& report_;
};

template <typename T>
void check_unique_ids(const std::vector<T>& items, const std::string& kind, Checker& check) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    check.require(!item.id.empty(), kind, "empty id");
    check.require(seen.insert(item.id).second, kind + " " + item.id, "duplicate " + kind + " id");
  }
}

// Union-find over buses joined by corridors with at least one existing line.
void check_connectivity(const PlanningSystem& system, ValidationReport& report) {
  const std::size_t n = system.buses.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& c : system.corridors) {
    if (c.min_lines < 1) continue;
    const auto a = system.bus_index(c.from_bus);
    const auto b = system.bus_index(c.to_bus);
    if (!a || !b) continue;
    parent[find(static_cast<std::size_t>(*a))] = find(static_cast<std::size_t>(*b));
  }
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < n; ++i) {
    if (!system.buses[i].has_load) continue;
    const std::size_t r = find(i);
    if (!root) {
      root = r;
    } else if (*root != r) {
      report.warnings.push_back("load bus " + system.buses[i].id +
                                " is not connected to the other load buses by existing lines");
    }
  }
}

}  // namespace

std::optional<int> PlanningSystem::bus_index(const std::string& id) const {
  return find_by_id(buses, id);
}
std::optional<int> PlanningSystem::corridor_index(const std::string& id) const {
  return find_by_id(corridors, id);
}
std::optional<int> PlanningSystem::generator_type_index(const std::string& id) const {
  return find_by_id(generator_types, id);
}
std::optional<int> PlanningSystem::facts_type_index(const std::string& id) const {
  return find_by_id(facts_types, id);
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.entity << ": " << v.message << "\n";
  return out.str();
}

ValidationReport validate(const PlanningSystem& system) {
  ValidationReport report;
  Checker check(report);

  check.require(finite(system.base_mva) && system.base_mva > 0.0, "system", "base_mva must be > 0");

  check_unique_ids(system.buses, "bus", check);
  check_unique_ids(system.corridors, "corridor", check);
  check_unique_ids(system.existing_generators, "generator", check);
  check_unique_ids(system.generator_types, "generator type", check);
  check_unique_ids(system.facts_types, "FACTS type", check);

  for (const auto& b : system.buses) {
    check.require(b.max_new_generators >= 0, "bus " + b.id, "max_new_generators < 0");
  }

  for (const auto& c : system.corridors) {
    const std::string entity = "corridor " + c.id;
    check.require(c.from_bus != c.to_bus, entity, "from_bus == to_bus");
    check.require(system.bus_index(c.from_bus).has_value(), entity,
                  "unresolved reference: from_bus " + c.from_bus);
    check.require(system.bus_index(c.to_bus).has_value(), entity,
                  "unresolved reference: to_bus " + c.to_bus);
    check.require(c.min_lines >= 0, entity, "min_lines < 0");
    check.require(c.min_lines <= c.max_lines, entity, "min_lines > max_lines");
    check.require(finite(c.reactance) && c.reactance > 0.0, entity, "reactance must be > 0");
    check.require(finite(c.line_capacity) && c.line_capacity > 0.0, entity,
                  "line_capacity must be > 0");
    check.require(finite(c.line_cost) && c.line_cost >= 0.0, entity, "line_cost must be >= 0");
  }

  for (const auto& g : system.existing_generators) {
    const std::string entity = "generator " + g.id;
    check.require(system.bus_index(g.bus).has_value(), entity, "unresolved reference: bus " + g.bus);
    check.require(finite(g.p_min) && finite(g.p_max) && 0.0 <= g.p_min && g.p_min <= g.p_max,
                  entity, "requires 0 <= p_min <= p_max");
    check.require(g.ramp_up >= 0.0 && g.ramp_down >= 0.0, entity, "ramp limits must be >= 0");
    check.require(finite(g.cost_fixed) && finite(g.cost_marginal), entity, "costs must be finite");
  }

  for (const auto& w : system.generator_types) {
    const std::string entity = "generator type " + w.id;
    check.require(finite(w.p_min) && finite(w.p_max) && 0.0 <= w.p_min && w.p_min <= w.p_max,
                  entity, "requires 0 <= p_min <= p_max");
    check.require(w.ramp_up >= 0.0 && w.ramp_down >= 0.0, entity, "ramp limits must be >= 0");
    check.require(finite(w.invest_cost) && w.invest_cost >= 0.0, entity, "invest_cost must be >= 0");
    check.require(finite(w.cost_fixed) && finite(w.cost_marginal), entity, "costs must be finite");
  }

  for (const auto& m : system.facts_types) {
    const std::string entity = "FACTS type " + m.id;
    check.require(finite(m.capacity) && m.capacity > 0.0, entity, "capacity must be > 0");
    check.require(finite(m.invest_cost) && m.invest_cost >= 0.0, entity,
                  "invest_cost must be >= 0");
  }

  for (const auto& id : system.candidate_gen_buses) {
    check.require(system.bus_index(id).has_value(), "candidate_gen_buses",
                  "unresolved reference: bus " + id);
  }
  for (const auto& id : system.candidate_line_corridors) {
    check.require(system.corridor_index(id).has_value(), "candidate_line_corridors",
                  "unresolved reference: corridor " + id);
  }
  for (const auto& id : system.candidate_facts_corridors) {
    check.require(system.corridor_index(id).has_value(), "candidate_facts_corridors",
                  "unresolved reference: corridor " + id);
  }

  const Horizon& h = system.horizon;
  check.require(h.num_years >= 1, "horizon", "num_years must be >= 1");
  check.require(finite(h.discount_rate) && h.discount_rate >= 0.0, "horizon",
                "discount_rate must be >= 0");
  check.require(h.line_lead_years >= 0 && h.gen_lead_years >= 0, "horizon",
                "lead years must be >= 0");
  check.require(finite(h.theta_max) && h.theta_max > 0.0, "horizon", "theta_max must be > 0");
  check.require(!std::isnan(h.recourse_budget) && h.recourse_budget >= 0.0, "horizon",
                "recourse_budget must be >= 0");

  check_connectivity(system, report);
  return report;
}

void require_valid(const PlanningSystem& system) {
  const ValidationReport report = validate(system);
  if (!report.ok()) throw Error(ErrorCode::kValidation, "invalid system:\n" + report.to_string());
}

}  // namespace rtep
