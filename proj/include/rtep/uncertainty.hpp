#pragma once

// Hourly net-load curves -> stepwise duration-curve model -> the two
// uncertainty sets: the budgeted load-duration set (LDCU) and the per-slot
// ramping box (HLRU).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rtep {

// Dense (bus, year, slot) array.
template <typename T>
class SlotTensor {
 public:
  SlotTensor() = default;
  SlotTensor(int buses, int years, int slots, T fill = T{})
      : buses_(buses),
        years_(years),
        slots_(slots),
        data_(static_cast<std::size_t>(buses) * years * slots, fill) {}

  int buses() const { return buses_; }
  int years() const { return years_; }
  int slots() const { return slots_; }
  bool same_shape(int buses, int years, int slots) const {
    return buses_ == buses && years_ == years && slots_ == slots;
  }
  template <typename U>
  bool same_shape(const SlotTensor<U>& other) const {
    return same_shape(other.buses(), other.years(), other.slots());
  }

  T& operator()(int bus, int year, int slot) { return data_[index(bus, year, slot)]; }
  const T& operator()(int bus, int year, int slot) const { return data_[index(bus, year, slot)]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t index(int bus, int year, int slot) const {
    return (static_cast<std::size_t>(bus) * years_ + year) * slots_ + slot;
  }

  int buses_ = 0;
  int years_ = 0;
  int slots_ = 0;
  std::vector<T> data_;
};

struct HourlyCurve {
  std::string bus;
  int year = 0;
  std::vector<double> values;  // MW, one per hour
};

struct RampEvent {
  double start_level = 0.0;
  double delta = 0.0;  // level[t + 1] - level[t]
};

// One entry per hour; event t starts at values[t]. The final hour has none.
std::vector<RampEvent> extract_ramp_events(const HourlyCurve& curve);

// Levels sorted non-increasing, each carrying the ramp delta that starts at
// that hour (empty for the final hour of the curve).
struct DurationCurve {
  std::vector<double> levels;
  std::vector<std::optional<double>> deltas;
  std::vector<int> hours;  // original hour index of each level
};

DurationCurve build_duration_curve(const HourlyCurve& curve);

struct SlotFragment {
  std::vector<double> levels;               // mean level per slot
  std::vector<std::vector<double>> events;  // ramp deltas attached to each slot
};

SlotFragment discretize(const DurationCurve& curve, std::span<const int> slot_durations);

// Equal-duration split of `hours` into `slots` slots; the first hours % slots
// slots get one extra hour.
std::vector<int> equal_slot_durations(int hours, int slots);

struct SlottedLoadModel {
  std::vector<int> slot_durations;  // d_h, hours
  SlotTensor<double> levels;        // MW per (bus, year, slot)
  SlotTensor<std::vector<double>> ramp_events;

  int num_buses() const { return levels.buses(); }
  int num_years() const { return levels.years(); }
  int num_slots() const { return levels.slots(); }
  double duration(int slot) const { return static_cast<double>(slot_durations[slot]); }
};

// base_curves[b] is bus b's hourly curve for the first planning year (empty
// for buses without load). Later years scale levels and ramp deltas by
// (1 + growth_rate)^year.
SlottedLoadModel build_load_model(const std::vector<std::vector<double>>& base_curves,
                                  int num_years, double growth_rate,
                                  std::span<const int> slot_durations);

// curves[y][b]: one curve per bus per year, all of equal length.
SlottedLoadModel build_load_model_per_year(
    const std::vector<std::vector<std::vector<double>>>& curves,
    std::span<const int> slot_durations);

enum class SetKind { kLdcu, kHlru };

std::string_view to_string(SetKind kind);

struct LdcuSet {
  SlotTensor<double> halfwidth;  // u^d >= 0
  std::vector<int> budget;       // Lambda per (year * slots + slot)
};

struct HlruSet {
  SlotTensor<double> lower;  // <= 0
  SlotTensor<double> upper;  // >= 0
};

struct UncertaintyModel {
  LdcuSet ldcu;
  HlruSet hlru;

  int num_buses() const { return ldcu.halfwidth.buses(); }
  int num_years() const { return ldcu.halfwidth.years(); }
  int num_slots() const { return ldcu.halfwidth.slots(); }
  int budget(int year, int slot) const { return ldcu.budget[year * num_slots() + slot]; }
};

// Half-width = error_fraction * |level|. `budgets` holds either one value
// (broadcast) or one per (year, slot); values must be non-negative integers.
LdcuSet build_ldcu(const SlottedLoadModel& model, double error_fraction,
                   std::span<const double> budgets);

// Per slot: upper = max(0, largest attached delta), lower = min(0, smallest).
HlruSet build_hlru(const SlottedLoadModel& model);

UncertaintyModel build_uncertainty(const SlottedLoadModel& model, double error_fraction,
                                   std::span<const double> budgets);

// Sets with all bounds zero, for deterministic runs.
UncertaintyModel zero_uncertainty(const SlottedLoadModel& model);

struct UncertainPoint {
  SetKind kind = SetKind::kLdcu;
  SlotTensor<double> epsilon;
};

// Deviation vector over buses for a single (year, slot).
using SlotPoint = std::vector<double>;

inline constexpr double kMembershipTolerance = 1e-9;

bool contains(const UncertaintyModel& model, const UncertainPoint& point);
bool contains_slot(const UncertaintyModel& model, SetKind kind, int year, int slot,
                   std::span<const double> epsilon);

// Buses whose deviation can be non-zero in the given slot.
std::vector<int> uncertain_buses(const UncertaintyModel& model, SetKind kind, int year, int slot);

// min(Lambda, number of uncertain buses)
int effective_budget(const UncertaintyModel& model, int year, int slot);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// Number of extreme points without materialising them (saturates at SIZE_MAX).
std::size_t count_extreme_points(const UncertaintyModel& model, SetKind kind, int year, int slot);

// LDCU: every vector with exactly min(Lambda, n) components at +/-u^d (the
// zero vector when that number is 0). HLRU: every corner of the box.
std::vector<SlotPoint> enumerate_extreme_points(const UncertaintyModel& model, SetKind kind,
                                                int year, int slot,
                                                std::size_t cap = kDefaultEnumerationCap);

// Full-horizon point that is zero outside (year, slot).
UncertainPoint embed(const UncertaintyModel& model, SetKind kind, int year, int slot,
                     std::span<const double> epsilon);

}  // namespace rtep
