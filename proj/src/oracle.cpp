#include "rtep/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "rtep/error.hpp"

namespace rtep {
namespace {

// The slot's sets as a one-year, one-slot uncertainty model so the shared
// enumerator can be reused.
UncertaintyModel single_slot_model(const SlotContext& slot) {
  UncertaintyModel m;
  const int nb = slot.num_buses;
  m.ldcu.halfwidth = SlotTensor<double>(nb, 1, 1, 0.0);
  m.hlru.lower = SlotTensor<double>(nb, 1, 1, 0.0);
  m.hlru.upper = SlotTensor<double>(nb, 1, 1, 0.0);
  for (int b = 0; b < nb; ++b) {
    m.ldcu.halfwidth(b, 0, 0) = slot.ldcu_halfwidth[b];
    m.hlru.lower(b, 0, 0) = slot.hlru_lower[b];
    m.hlru.upper(b, 0, 0) = slot.hlru_upper[b];
  }
  m.ldcu.budget = {slot.budget};
  return m;
}

double solve_at(LpSession& session, const InnerProblem& inner, const SlotPoint& eps) {
  for (std::size_t b = 0; b < eps.size(); ++b) {
    if (inner.balance_row[b] >= 0) session.set_rhs(inner.balance_row[b], -inner.load[b] - eps[b]);
  }
  const SolveResult r = session.solve();
  if (r.status == SolveStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "inner problem is infeasible at an extreme point");
  }
  if (r.status == SolveStatus::kUnbounded) {
    throw Error(ErrorCode::kModelConstruction, "inner problem is unbounded");
  }
  if (r.status != SolveStatus::kOptimal) throw Error(ErrorCode::kBackend, "inner LP did not solve");
  return r.objective;
}

}  // namespace

OracleVerdict brute_force(const SlotContext& slot, SetKind kind, ObjectiveKind objective,
                          const OracleOptions& options) {
  const UncertaintyModel model = single_slot_model(slot);
  const std::vector<SlotPoint> points = enumerate_extreme_points(model, kind, 0, 0, options.cap);
  const InnerProblem inner = build_inner(slot, kind, objective);
  SolveParams params;
  params.feasibility_tol = 1e-9;
  LpSession session(inner.model, params);

  OracleVerdict out;
  out.point = UncertainPoint{kind, SlotTensor<double>(slot.num_buses, 1, 1, 0.0)};
  out.violation = -kInfinity;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = solve_at(session, inner, points[i]);
    if (v > out.violation) {
      out.violation = v;
      for (int b = 0; b < slot.num_buses; ++b) out.point.epsilon(b, 0, 0) = points[i][b];
    }
    if (options.progress && (i + 1) % options.progress_every == 0) options.progress(i + 1, points.size());
  }
  out.points = points.size();
  return out;
}

PlanCertificate certify_plan(const Plan& plan, const PlanningSystem& system,
                             const AssetCatalog& catalog, const SlottedLoadModel& loads,
                             const UncertaintyModel& uncertainty, double recourse_budget,
                             double tolerance, const OracleOptions& options) {
  const int nb = static_cast<int>(system.buses.size());
  const int Y = loads.num_years();
  const int H = loads.num_slots();
  const std::vector<SlotContext> slots = make_slot_contexts(system, catalog, plan, loads, uncertainty);

  PlanCertificate cert;
  auto reset = [&](OracleVerdict& v, SetKind kind) {
    v.point = UncertainPoint{kind, SlotTensor<double>(nb, Y, H, 0.0)};
    v.violation = 0.0;
    v.points = 0;
  };
  reset(cert.spd1, SetKind::kLdcu);
  reset(cert.spd2, SetKind::kLdcu);
  reset(cert.spr, SetKind::kHlru);

  // Max-aggregated checks keep the point of the worst slot only.
  auto max_over_slots = [&](OracleVerdict& agg, SetKind kind) {
    double best = -kInfinity;
    for (const SlotContext& s : slots) {
      const OracleVerdict v = brute_force(s, kind, ObjectiveKind::kSlack, options);
      agg.points += v.points;
      if (v.violation > best) {
        best = v.violation;
        std::fill(agg.point.epsilon.data().begin(), agg.point.epsilon.data().end(), 0.0);
        for (int b = 0; b < nb; ++b) agg.point.epsilon(b, s.year, s.slot) = v.point.epsilon(b, 0, 0);
      }
    }
    agg.violation = std::max(0.0, best);
  };
  max_over_slots(cert.spd1, SetKind::kLdcu);
  max_over_slots(cert.spr, SetKind::kHlru);

  if (!std::isfinite(recourse_budget) || cert.spd1.violation > tolerance) {
    cert.spd2.evaluated = false;
    return cert;
  }
  double total = 0.0;
  for (const SlotContext& s : slots) {
    const OracleVerdict v = brute_force(s, SetKind::kLdcu, ObjectiveKind::kRecourse, options);
    cert.spd2.points += v.points;
    total += v.violation;
    for (int b = 0; b < nb; ++b) cert.spd2.point.epsilon(b, s.year, s.slot) = v.point.epsilon(b, 0, 0);
  }
  cert.spd2.violation = std::max(0.0, total - recourse_budget);
  return cert;
}

}  // namespace rtep
