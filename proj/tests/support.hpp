#pragma once

// Small hand-checkable instances shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rtep/ccg.hpp"
#include "rtep/oracle.hpp"
#include "rtep/subproblems.hpp"
#include "rtep/uncertainty.hpp"

namespace rtep::testing {

inline constexpr double kHalfPi = 1.5707963267948966;

inline SlotUnit slot_unit(int unit, int bus, double p_min, double p_max, double ramp_up,
                          double ramp_down, double base, double weight) {
  SlotUnit u;
  u.unit = unit;
  u.bus = bus;
  u.p_min = p_min;
  u.p_max = p_max;
  u.ramp_up = ramp_up;
  u.ramp_down = ramp_down;
  u.base = base;
  u.weight = weight;
  return u;
}

// Generator at bus 0 (cap 100), load 50 at bus 1, one line of capacity
// `line_cap`, u^d = 20 at bus 1, budget 1.
inline SlotContext two_bus_slot(double line_cap) {
  SlotContext s;
  s.num_buses = 2;
  s.duration = 1.0;
  s.theta_max = kHalfPi;
  s.lines = {{0, 1, 0.001, line_cap, 0.0}};
  s.units = {slot_unit(0, 0, 0.0, 100.0, 100.0, 100.0, 50.0, 1.0)};
  s.load = {0.0, 50.0};
  s.ldcu_halfwidth = {0.0, 20.0};
  s.budget = 1;
  s.hlru_lower = {0.0, 0.0};
  s.hlru_upper = {0.0, 0.0};
  return s;
}

// One bus, base dispatch 50 serving load 50, ramp-up 10, HLRU [-30, +15].
inline SlotContext one_bus_ramp_slot() {
  SlotContext s;
  s.num_buses = 1;
  s.duration = 1.0;
  s.theta_max = kHalfPi;
  s.units = {slot_unit(0, 0, 0.0, 200.0, 10.0, 100.0, 50.0, 1.0)};
  s.load = {50.0};
  s.ldcu_halfwidth = {0.0};
  s.budget = 0;
  s.hlru_lower = {-30.0};
  s.hlru_upper = {15.0};
  return s;
}

// One bus, marginal cost 10 per MWh over 100 h undiscounted, u^d = 2, budget 1.
inline SlotContext one_bus_recourse_slot() {
  SlotContext s;
  s.num_buses = 1;
  s.duration = 100.0;
  s.theta_max = kHalfPi;
  s.units = {slot_unit(0, 0, 0.0, 200.0, 200.0, 200.0, 50.0, 10.0 * 100.0)};
  s.load = {50.0};
  s.ldcu_halfwidth = {2.0};
  s.budget = 1;
  s.hlru_lower = {0.0};
  s.hlru_upper = {0.0};
  return s;
}

// Random slot over <= 3 buses. Line and unit data are drawn so that the
// base case is usually but not always servable.
inline SlotContext random_slot(std::mt19937_64& rng, int year, int slot, int budget) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> nb_dist(1, 3);
  SlotContext s;
  s.year = year;
  s.slot = slot;
  s.num_buses = nb_dist(rng);
  s.duration = 1.0 + std::floor(u01(rng) * 10.0);
  s.theta_max = kHalfPi;
  const int nb = s.num_buses;
  s.load.resize(nb);
  s.ldcu_halfwidth.resize(nb);
  s.hlru_lower.resize(nb);
  s.hlru_upper.resize(nb);
  double total = 0.0;
  for (int b = 0; b < nb; ++b) {
    s.load[b] = u01(rng) < 0.2 ? 0.0 : 10.0 + 60.0 * u01(rng);
    total += s.load[b];
    s.ldcu_halfwidth[b] = s.load[b] > 0.0 && u01(rng) < 0.85 ? 0.05 * s.load[b] + 15.0 * u01(rng) : 0.0;
    s.hlru_lower[b] = u01(rng) < 0.8 ? -20.0 * u01(rng) : 0.0;
    s.hlru_upper[b] = u01(rng) < 0.8 ? 20.0 * u01(rng) : 0.0;
  }
  for (int a = 0; a < nb; ++a) {
    for (int b = a + 1; b < nb; ++b) {
      if (u01(rng) < 0.8) s.lines.push_back({a, b, 0.0005 + 0.002 * u01(rng), 20.0 + 60.0 * u01(rng),
                                             u01(rng) < 0.3 ? 10.0 * u01(rng) : 0.0});
    }
  }
  // Base dispatch: split the load over the units, clipped to limits.
  const int units = 1 + static_cast<int>(u01(rng) * 3.0);
  double left = total;
  for (int k = 0; k < units; ++k) {
    const int bus = static_cast<int>(u01(rng) * nb);
    const double p_max = 30.0 + 100.0 * u01(rng);
    const double p_min = u01(rng) < 0.5 ? 0.0 : 0.1 * p_max;
    const double base = std::clamp(k + 1 == units ? left : left * u01(rng), p_min, p_max);
    left -= base;
    s.units.push_back(slot_unit(k, bus, p_min, p_max, 5.0 + 30.0 * u01(rng), 5.0 + 30.0 * u01(rng), base,
                                s.duration * (0.5 + 2.0 * u01(rng))));
  }
  s.budget = budget;
  return s;
}

// A one-year, one-slot, two-bus planning system whose single existing line
// (capacity 60) cannot carry load 50 + 20; a second parallel line can.
inline PlanningSystem two_bus_system() {
  PlanningSystem s;
  s.name = "toy2";
  s.buses = {{"1", false, 0}, {"2", true, 0}};
  s.corridors = {{"1-2", "1", "2", 0.1, 60.0, 1, 2, 1.0}};
  s.existing_generators = {{"G", "1", 0.0, 100.0, 100.0, 100.0, 0.0, 0.01}};
  s.candidate_line_corridors = {"1-2"};
  s.horizon.num_years = 1;
  s.horizon.discount_rate = 0.0;
  return s;
}

inline SlottedLoadModel flat_loads(const PlanningSystem& s, const std::vector<double>& level, int hours,
                                   int slots, double growth = 0.0) {
  std::vector<std::vector<double>> curves(s.buses.size());
  for (std::size_t b = 0; b < s.buses.size(); ++b) {
    if (s.buses[b].has_load) curves[b].assign(hours, level[b]);
  }
  return build_load_model(curves, s.horizon.num_years, growth, equal_slot_durations(hours, slots));
}

}  // namespace rtep::testing
