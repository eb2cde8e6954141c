#include "rtep/network.hpp"

#include <string>

#include "rtep/error.hpp"

namespace rtep {
namespace {

struct Terms {
  std::vector<int> index;
  std::vector<double> value;
  void add(int col, double coef) {
    index.push_back(col);
    value.push_back(coef);
  }
};

}  // namespace

BlockIndex add_operating_block(LinearModel& model, const BlockSpec& spec) {
  const int nb = spec.num_buses;
  if (static_cast<int>(spec.load.size()) != nb) {
    throw Error(ErrorCode::kModelConstruction, "block " + spec.tag + ": load vector size mismatch");
  }
  const std::string& t = spec.tag;
  BlockIndex idx;
  std::vector<Terms> balance(static_cast<std::size_t>(nb));

  idx.theta.resize(nb);
  for (int b = 0; b < nb; ++b) {
    idx.theta[b] = model.add_variable(-spec.theta_max, spec.theta_max, 0.0, false,
                                      t + "theta_" + std::to_string(b));
  }

  idx.dispatch.assign(spec.units.size(), -1);
  for (std::size_t u = 0; u < spec.units.size(); ++u) {
    const BlockUnit& g = spec.units[u];
    if (g.status.is_off()) continue;
    const std::string name = t + "p_" + std::to_string(u);
    int col;
    if (g.status.is_column()) {
      col = model.add_variable(0.0, g.p_max, g.cost, false, name);
      model.add_row({{col, 1.0}, {g.status.col, -g.p_max}}, RowSense::kLe, 0.0, name + "_max");
      if (g.p_min > 0.0) {
        model.add_row({{col, 1.0}, {g.status.col, -g.p_min}}, RowSense::kGe, 0.0, name + "_min");
      }
    } else {
      const double lo = g.tethered ? g.lower : g.p_min;
      const double hi = g.tethered ? g.upper : g.p_max;
      if (lo > hi) {
        throw Error(ErrorCode::kModelConstruction, "block " + t + ": empty dispatch range");
      }
      col = model.add_variable(lo, hi, g.cost, false, name);
    }
    idx.dispatch[u] = col;
    balance[g.bus].add(col, -1.0);
  }

  // FACTS devices grouped by line, for the capacity offset.
  std::vector<Terms> line_facts(spec.lines.size());
  idx.injection.assign(spec.facts.size(), -1);
  for (std::size_t f = 0; f < spec.facts.size(); ++f) {
    const BlockFacts& d = spec.facts[f];
    if (d.built.is_off() || spec.lines[d.line].built.is_off()) continue;
    const std::string name = t + "pf_" + std::to_string(f);
    int col;
    if (d.built.is_column()) {
      col = model.add_variable(-kInfinity, kInfinity, 0.0, false, name);
      model.add_row({{col, 1.0}, {d.built.col, -d.capacity}}, RowSense::kLe, 0.0, name + "_max");
      model.add_row({{col, 1.0}, {d.built.col, d.capacity}}, RowSense::kGe, 0.0, name + "_min");
    } else {
      col = model.add_variable(-d.capacity, d.capacity, 0.0, false, name);
    }
    idx.injection[f] = col;
    const BlockLine& l = spec.lines[d.line];
    // Equal and opposite injections at the two ends of the corridor.
    balance[l.from].add(col, -1.0);
    balance[l.to].add(col, 1.0);
    line_facts[d.line].add(col, -1.0);
  }

  idx.flow.assign(spec.lines.size(), -1);
  const double big_m = 2.0 * spec.theta_max;
  for (std::size_t i = 0; i < spec.lines.size(); ++i) {
    const BlockLine& l = spec.lines[i];
    if (l.built.is_off()) continue;
    const std::string name = t + "pl_" + std::to_string(i);
    const bool has_facts = !line_facts[i].index.empty();
    int col;
    if (!l.built.is_column() && !has_facts) {
      col = model.add_variable(-l.capacity, l.capacity, 0.0, false, name);
    } else {
      col = model.add_variable(-kInfinity, kInfinity, 0.0, false, name);
      Terms cap = line_facts[i];
      cap.add(col, 1.0);
      if (l.built.is_column()) {
        cap.add(l.built.col, -l.capacity);
        model.add_row(cap.index, cap.value, RowSense::kLe, 0.0, name + "_cap_hi");
        cap.value.back() = l.capacity;
        model.add_row(cap.index, cap.value, RowSense::kGe, 0.0, name + "_cap_lo");
      } else {
        model.add_row(cap.index, cap.value, RowSense::kLe, l.capacity, name + "_cap_hi");
        model.add_row(cap.index, cap.value, RowSense::kGe, -l.capacity, name + "_cap_lo");
      }
    }
    idx.flow[i] = col;
    balance[l.from].add(col, 1.0);
    balance[l.to].add(col, -1.0);

    // theta_from - theta_to - X * p = 0 when the line is in service.
    Terms dc;
    dc.add(idx.theta[l.from], 1.0);
    dc.add(idx.theta[l.to], -1.0);
    dc.add(col, -l.reactance_pu);
    if (l.built.is_column()) {
      dc.add(l.built.col, big_m);
      model.add_row(dc.index, dc.value, RowSense::kLe, big_m, name + "_dc_hi");
      dc.value.back() = -big_m;
      model.add_row(dc.index, dc.value, RowSense::kGe, -big_m, name + "_dc_lo");
    } else {
      model.add_row(dc.index, dc.value, RowSense::kEq, 0.0, name + "_dc");
    }
  }

  if (spec.slacks) {
    idx.slack_up.resize(nb);
    idx.slack_down.resize(nb);
    for (int b = 0; b < nb; ++b) {
      idx.slack_up[b] = model.add_variable(0.0, kInfinity, 1.0, false, t + "sp_" + std::to_string(b));
      idx.slack_down[b] =
          model.add_variable(0.0, kInfinity, 1.0, false, t + "sm_" + std::to_string(b));
      balance[b].add(idx.slack_up[b], 1.0);
      balance[b].add(idx.slack_down[b], -1.0);
    }
  }

  idx.balance_row.assign(nb, -1);
  for (int b = 0; b < nb; ++b) {
    if (balance[b].index.empty() && spec.load[b] == 0.0 && !spec.all_balance_rows) continue;
    idx.balance_row[b] = model.add_row(balance[b].index, balance[b].value, RowSense::kEq,
                                       -spec.load[b], t + "bal_" + std::to_string(b));
  }
  return idx;
}

}  // namespace rtep
