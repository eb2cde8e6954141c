#pragma once

// Brute-force reference for the subproblems: enumerate every extreme point
// of a slot's uncertainty set and solve the inner LP at each one.

#include <cstddef>
#include <functional>

#include "rtep/subproblems.hpp"

namespace rtep {

struct OracleVerdict {
  double violation = 0.0;
  UncertainPoint point;  // achieving point (whole horizon for certify_plan)
  std::size_t points = 0;
  bool evaluated = true;
};

struct OracleOptions {
  std::size_t cap = kDefaultEnumerationCap;
  // Called with (points done, points total) every `progress_every` points.
  std::function<void(std::size_t, std::size_t)> progress;
  std::size_t progress_every = 100000;
};

// Max of the inner optimum over the slot's extreme points. The point is
// shaped (buses, 1, 1). Ties keep the first point in enumeration order.
OracleVerdict brute_force(const SlotContext& slot, SetKind kind, ObjectiveKind objective,
                          const OracleOptions& options = {});

struct PlanCertificate {
  OracleVerdict spd1;  // max slack over slots, LDCU
  OracleVerdict spd2;  // summed worst re-dispatch cost minus the budget
  OracleVerdict spr;   // max slack over slots, HLRU with ramp tethers
};

// spd2 is skipped (evaluated = false) when the budget is unlimited or when
// spd1 shows a physical violation above `tolerance`.
PlanCertificate certify_plan(const Plan& plan, const PlanningSystem& system,
                             const AssetCatalog& catalog, const SlottedLoadModel& loads,
                             const UncertaintyModel& uncertainty, double recourse_budget,
                             double tolerance = 1e-3, const OracleOptions& options = {});

}  // namespace rtep
