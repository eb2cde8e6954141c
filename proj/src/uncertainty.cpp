#include "rtep/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rtep/error.hpp"
#include "rtep/kernels.hpp"

namespace rtep {
namespace {

void require_curve(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "hourly curve needs at least 2 hours, got " +
                                              std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, "hourly curve has non-finite value");
  }
}

SlotFragment fragment_from_values(std::span<const double> values,
                                  std::span<const int> slot_durations) {
  HourlyCurve curve;
  curve.values.assign(values.begin(), values.end());
  return discretize(build_duration_curve(curve), slot_durations);
}

void check_shape(const UncertaintyModel& model, int year, int slot) {
  if (year < 0 || year >= model.num_years() || slot < 0 || slot >= model.num_slots()) {
    throw Error(ErrorCode::kInvalidInput, "slot (" + std::to_string(year) + ", " +
                                              std::to_string(slot) + ") out of range");
  }
}

bool within(double value, double lo, double hi) {
  const double tol = kMembershipTolerance * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return value >= lo - tol && value <= hi + tol;
}

std::size_t binomial_saturating(std::size_t n, std::size_t k) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t result = 1;
  k = std::min(k, n - k);
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    if (result > kMax / num) return kMax;
    result = result * num / i;
  }
  return result;
}

std::size_t times_pow2_saturating(std::size_t value, std::size_t exponent) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < exponent; ++i) {
    if (value > kMax / 2) return kMax;
    value *= 2;
  }
  return value;
}

}  // namespace

std::string_view to_string(SetKind kind) { return kind == SetKind::kLdcu ? "LDCU" : "HLRU"; }

std::vector<RampEvent> extract_ramp_events(const HourlyCurve& curve) {
  require_curve(curve.values);
  std::vector<double> deltas(curve.values.size() - 1);
  kernels::adjacent_differences(curve.values, deltas);
  std::vector<RampEvent> events(deltas.size());
  for (std::size_t t = 0; t < deltas.size(); ++t) events[t] = {curve.values[t], deltas[t]};
  return events;
}

DurationCurve build_duration_curve(const HourlyCurve& curve) {
  require_curve(curve.values);
  const auto& values = curve.values;
  const std::size_t n = values.size();
  std::vector<double> deltas(n - 1);
  kernels::adjacent_differences(values, deltas);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });

  DurationCurve out;
  out.levels.reserve(n);
  out.deltas.reserve(n);
  out.hours = order;
  for (int hour : order) {
    out.levels.push_back(values[hour]);
    if (static_cast<std::size_t>(hour) + 1 < n) {
      out.deltas.emplace_back(deltas[hour]);
    } else {
      out.deltas.emplace_back(std::nullopt);
    }
  }
  return out;
}

SlotFragment discretize(const DurationCurve& curve, std::span<const int> slot_durations) {
  long total = 0;
  for (int d : slot_durations) {
    if (d < 1) throw Error(ErrorCode::kInvalidInput, "slot durations must be >= 1 hour");
    total += d;
  }
  if (slot_durations.empty() || total != static_cast<long>(curve.levels.size())) {
    throw Error(ErrorCode::kInvalidInput,
                "slot durations sum to " + std::to_string(total) + " but the curve has " +
                    std::to_string(curve.levels.size()) + " hours");
  }

  SlotFragment out;
  out.levels.reserve(slot_durations.size());
  out.events.reserve(slot_durations.size());
  std::size_t begin = 0;
  for (int d : slot_durations) {
    const std::span<const double> members(curve.levels.data() + begin, static_cast<std::size_t>(d));
    out.levels.push_back(kernels::sum(members) / d);
    std::vector<double> events;
    for (std::size_t t = begin; t < begin + static_cast<std::size_t>(d); ++t) {
      if (curve.deltas[t]) events.push_back(*curve.deltas[t]);
    }
    out.events.push_back(std::move(events));
    begin += static_cast<std::size_t>(d);
  }
  return out;
}

std::vector<int> equal_slot_durations(int hours, int slots) {
  if (slots < 1 || hours < slots) {
    throw Error(ErrorCode::kInvalidInput, "cannot split " + std::to_string(hours) + " hours into " +
                                              std::to_string(slots) + " slots");
  }
  std::vector<int> out(static_cast<std::size_t>(slots), hours / slots);
  for (int i = 0; i < hours % slots; ++i) ++out[static_cast<std::size_t>(i)];
  return out;
}

SlottedLoadModel build_load_model(const std::vector<std::vector<double>>& base_curves,
                                  int num_years, double growth_rate,
                                  std::span<const int> slot_durations) {
  if (num_years < 1) throw Error(ErrorCode::kInvalidInput, "num_years must be >= 1");
  if (!std::isfinite(growth_rate) || growth_rate <= -1.0) {
    throw Error(ErrorCode::kInvalidInput, "growth rate must be > -1");
  }
  const int buses = static_cast<int>(base_curves.size());
  const int slots = static_cast<int>(slot_durations.size());

  SlottedLoadModel model;
  model.slot_durations.assign(slot_durations.begin(), slot_durations.end());
  model.levels = SlotTensor<double>(buses, num_years, slots, 0.0);
  model.ramp_events = SlotTensor<std::vector<double>>(buses, num_years, slots);

  for (int b = 0; b < buses; ++b) {
    if (base_curves[b].empty()) continue;
    const SlotFragment base = fragment_from_values(base_curves[b], slot_durations);
    for (int y = 0; y < num_years; ++y) {
      const double factor = std::pow(1.0 + growth_rate, y);
      std::vector<double> levels(base.levels.size());
      kernels::scale(base.levels, factor, levels);
      for (int h = 0; h < slots; ++h) {
        model.levels(b, y, h) = levels[h];
        auto& events = model.ramp_events(b, y, h);
        events.resize(base.events[h].size());
        kernels::scale(base.events[h], factor, events);
      }
    }
  }
  return model;
}

SlottedLoadModel build_load_model_per_year(
    const std::vector<std::vector<std::vector<double>>>& curves,
    std::span<const int> slot_durations) {
  if (curves.empty()) throw Error(ErrorCode::kInvalidInput, "no yearly curves given");
  const int years = static_cast<int>(curves.size());
  const int buses = static_cast<int>(curves.front().size());
  const int slots = static_cast<int>(slot_durations.size());

  SlottedLoadModel model;
  model.slot_durations.assign(slot_durations.begin(), slot_durations.end());
  model.levels = SlotTensor<double>(buses, years, slots, 0.0);
  model.ramp_events = SlotTensor<std::vector<double>>(buses, years, slots);
  for (int y = 0; y < years; ++y) {
    if (static_cast<int>(curves[y].size()) != buses) {
      throw Error(ErrorCode::kInvalidInput, "every year needs the same number of bus curves");
    }
    for (int b = 0; b < buses; ++b) {
      if (curves[y][b].empty()) continue;
      SlotFragment f = fragment_from_values(curves[y][b], slot_durations);
      for (int h = 0; h < slots; ++h) {
        model.levels(b, y, h) = f.levels[h];
        model.ramp_events(b, y, h) = std::move(f.events[h]);
      }
    }
  }
  return model;
}

LdcuSet build_ldcu(const SlottedLoadModel& model, double error_fraction,
                   std::span<const double> budgets) {
  if (!std::isfinite(error_fraction) || error_fraction < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "error fraction must be >= 0");
  }
  const int years = model.num_years();
  const int slots = model.num_slots();
  const std::size_t cells = static_cast<std::size_t>(years) * slots;
  if (budgets.size() != 1 && budgets.size() != cells) {
    throw Error(ErrorCode::kInvalidInput, "budgets must be a scalar or one value per (year, slot)");
  }

  LdcuSet set;
  set.budget.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double b = budgets.size() == 1 ? budgets[0] : budgets[i];
    if (!std::isfinite(b) || b < 0.0 || std::floor(b) != b) {
      throw Error(ErrorCode::kInvalidInput,
                  "budget of uncertainty must be a non-negative integer, got " + std::to_string(b));
    }
    set.budget[i] = static_cast<int>(b);
  }
  set.halfwidth = SlotTensor<double>(model.num_buses(), years, slots, 0.0);
  for (std::size_t i = 0; i < set.halfwidth.data().size(); ++i) {
    set.halfwidth.data()[i] = error_fraction * std::abs(model.levels.data()[i]);
  }
  return set;
}

HlruSet build_hlru(const SlottedLoadModel& model) {
  HlruSet set;
  set.lower = SlotTensor<double>(model.num_buses(), model.num_years(), model.num_slots(), 0.0);
  set.upper = set.lower;
  for (std::size_t i = 0; i < model.ramp_events.data().size(); ++i) {
    const auto& events = model.ramp_events.data()[i];
    if (events.empty()) continue;
    const auto [lo, hi] = kernels::min_max(events);
    set.lower.data()[i] = std::min(0.0, lo);
    set.upper.data()[i] = std::max(0.0, hi);
  }
  return set;
}

UncertaintyModel build_uncertainty(const SlottedLoadModel& model, double error_fraction,
                                   std::span<const double> budgets) {
  return UncertaintyModel{build_ldcu(model, error_fraction, budgets), build_hlru(model)};
}

UncertaintyModel zero_uncertainty(const SlottedLoadModel& model) {
  const double zero = 0.0;
  UncertaintyModel u = build_uncertainty(model, 0.0, std::span<const double>(&zero, 1));
  for (auto& v : u.hlru.lower.data()) v = 0.0;
  for (auto& v : u.hlru.upper.data()) v = 0.0;
  return u;
}

std::vector<int> uncertain_buses(const UncertaintyModel& model, SetKind kind, int year, int slot) {
  check_shape(model, year, slot);
  std::vector<int> out;
  for (int b = 0; b < model.num_buses(); ++b) {
    const bool varies = kind == SetKind::kLdcu
                            ? model.ldcu.halfwidth(b, year, slot) > 0.0
                            : model.hlru.upper(b, year, slot) > model.hlru.lower(b, year, slot);
    if (varies) out.push_back(b);
  }
  return out;
}

int effective_budget(const UncertaintyModel& model, int year, int slot) {
  const int n = static_cast<int>(uncertain_buses(model, SetKind::kLdcu, year, slot).size());
  return std::min(model.budget(year, slot), n);
}

bool contains_slot(const UncertaintyModel& model, SetKind kind, int year, int slot,
                   std::span<const double> epsilon) {
  check_shape(model, year, slot);
  if (static_cast<int>(epsilon.size()) != model.num_buses()) {
    throw Error(ErrorCode::kInvalidInput, "deviation vector has wrong dimension");
  }
  if (kind == SetKind::kHlru) {
    for (int b = 0; b < model.num_buses(); ++b) {
      if (!within(epsilon[b], model.hlru.lower(b, year, slot), model.hlru.upper(b, year, slot))) {
        return false;
      }
    }
    return true;
  }
  double used = 0.0;
  for (int b = 0; b < model.num_buses(); ++b) {
    const double u = model.ldcu.halfwidth(b, year, slot);
    if (!within(epsilon[b], -u, u)) return false;
    if (u > 0.0) used += std::abs(epsilon[b]) / u;
  }
  return used <= model.budget(year, slot) + kMembershipTolerance * std::max(1.0, used);
}

bool contains(const UncertaintyModel& model, const UncertainPoint& point) {
  if (!point.epsilon.same_shape(model.num_buses(), model.num_years(), model.num_slots())) {
    throw Error(ErrorCode::kInvalidInput, "uncertain point has wrong dimensions");
  }
  std::vector<double> eps(static_cast<std::size_t>(model.num_buses()));
  for (int y = 0; y < model.num_years(); ++y) {
    for (int h = 0; h < model.num_slots(); ++h) {
      for (int b = 0; b < model.num_buses(); ++b) eps[b] = point.epsilon(b, y, h);
      if (!contains_slot(model, point.kind, y, h, eps)) return false;
    }
  }
  return true;
}

std::size_t count_extreme_points(const UncertaintyModel& model, SetKind kind, int year, int slot) {
  const std::size_t n = uncertain_buses(model, kind, year, slot).size();
  if (kind == SetKind::kHlru) return times_pow2_saturating(1, n);
  const std::size_t k = static_cast<std::size_t>(effective_budget(model, year, slot));
  return times_pow2_saturating(binomial_saturating(n, k), k);
}

std::vector<SlotPoint> enumerate_extreme_points(const UncertaintyModel& model, SetKind kind,
                                                int year, int slot, std::size_t cap) {
  const std::size_t count = count_extreme_points(model, kind, year, slot);
  if (count > cap) {
    throw Error(ErrorCode::kEnumerationTooLarge,
                std::string(to_string(kind)) + " slot (" + std::to_string(year) + ", " +
                    std::to_string(slot) + ") has more extreme points than the cap of " +
                    std::to_string(cap));
  }
  const std::vector<int> buses = uncertain_buses(model, kind, year, slot);
  const std::size_t n = buses.size();
  const SlotPoint zero(static_cast<std::size_t>(model.num_buses()), 0.0);
  std::vector<SlotPoint> points;
  points.reserve(count);

  if (kind == SetKind::kHlru) {
    for (std::size_t mask = 0; mask < count; ++mask) {
      SlotPoint p = zero;
      for (std::size_t i = 0; i < n; ++i) {
        const int b = buses[i];
        p[b] = (mask >> i) & 1U ? model.hlru.upper(b, year, slot) : model.hlru.lower(b, year, slot);
      }
      points.push_back(std::move(p));
    }
    return points;
  }

  const std::size_t k = static_cast<std::size_t>(effective_budget(model, year, slot));
  if (k == 0) {
    points.push_back(zero);
    return points;
  }
  // Lexicographic k-combinations of the uncertain buses, each with all sign
  // patterns (+ before -).
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    for (std::size_t signs = 0; signs < (std::size_t{1} << k); ++signs) {
      SlotPoint p = zero;
      for (std::size_t j = 0; j < k; ++j) {
        const int b = buses[pick[j]];
        const double u = model.ldcu.halfwidth(b, year, slot);
        p[b] = (signs >> j) & 1U ? -u : u;
      }
      points.push_back(std::move(p));
    }
    std::size_t j = k;
    while (j > 0 && pick[j - 1] == n - k + (j - 1)) --j;
    if (j == 0) break;
    ++pick[j - 1];
    for (std::size_t i = j; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
  return points;
}

UncertainPoint embed(const UncertaintyModel& model, SetKind kind, int year, int slot,
                     std::span<const double> epsilon) {
  check_shape(model, year, slot);
  if (static_cast<int>(epsilon.size()) != model.num_buses()) {
    throw Error(ErrorCode::kInvalidInput, "deviation vector has wrong dimension");
  }
  UncertainPoint p{kind, SlotTensor<double>(model.num_buses(), model.num_years(),
                                            model.num_slots(), 0.0)};
  for (int b = 0; b < model.num_buses(); ++b) p.epsilon(b, year, slot) = epsilon[b];
  return p;
}

}  // namespace rtep
