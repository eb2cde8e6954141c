#include "rtep/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rtep/error.hpp"
#include "rtep/network.hpp"

namespace rtep {

std::mt19937_64 scenario_rng(std::uint64_t seed, int scenario, SetKind kind) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(scenario),
                    static_cast<std::uint32_t>(kind == SetKind::kLdcu ? 1 : 2)};
  return std::mt19937_64(seq);
}

double sample_truncated_normal(std::mt19937_64& rng, double sd, double bound) {
  if (!(sd > 0.0) || !(bound > 0.0)) return 0.0;
  std::normal_distribution<double> dist(0.0, sd);
  for (;;) {
    const double x = dist(rng);
    if (std::abs(x) <= bound) return x;
  }
}

UncertainPoint sample_ldcu_point(const UncertaintyModel& model, std::mt19937_64& rng,
                                 int max_redraws) {
  const int nb = model.num_buses();
  const int Y = model.num_years();
  const int H = model.num_slots();
  UncertainPoint p{SetKind::kLdcu, SlotTensor<double>(nb, Y, H, 0.0)};
  std::vector<double> z(static_cast<std::size_t>(nb));
  for (int y = 0; y < Y; ++y) {
    for (int h = 0; h < H; ++h) {
      const std::vector<int> buses = uncertain_buses(model, SetKind::kLdcu, y, h);
      const int k = effective_budget(model, y, h);
      if (buses.empty() || k == 0) continue;
      double used = 0.0;
      for (int attempt = 0;; ++attempt) {
        used = 0.0;
        for (int b : buses) {
          // Standard deviation equals the half-width, so z is N(0,1) cut to [-1, 1].
          z[b] = sample_truncated_normal(rng, 1.0, 1.0);
          used += std::abs(z[b]);
        }
        if (used <= k || attempt + 1 >= max_redraws) break;
      }
      const double shrink = used > k ? k / used : 1.0;
      for (int b : buses) p.epsilon(b, y, h) = z[b] * shrink * model.ldcu.halfwidth(b, y, h);
    }
  }
  return p;
}

UncertainPoint sample_hlru_point(const UncertaintyModel& model, std::mt19937_64& rng) {
  const int nb = model.num_buses();
  const int Y = model.num_years();
  const int H = model.num_slots();
  UncertainPoint p{SetKind::kHlru, SlotTensor<double>(nb, Y, H, 0.0)};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int b = 0; b < nb; ++b) {
    for (int y = 0; y < Y; ++y) {
      for (int h = 0; h < H; ++h) {
        const double lo = model.hlru.lower(b, y, h);
        const double hi = model.hlru.upper(b, y, h);
        if (hi > lo) p.epsilon(b, y, h) = std::clamp(lo + (hi - lo) * unit(rng), lo, hi);
      }
    }
  }
  return p;
}

std::vector<UncertainPoint> sample_ldcu(const UncertaintyModel& model, const ScenarioConfig& config) {
  std::vector<UncertainPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(config.count, 0)));
  for (int s = 0; s < config.count; ++s) {
    auto rng = scenario_rng(config.seed, s, SetKind::kLdcu);
    out.push_back(sample_ldcu_point(model, rng, config.max_redraws));
  }
  return out;
}

std::vector<UncertainPoint> sample_hlru(const UncertaintyModel& model, const ScenarioConfig& config) {
  std::vector<UncertainPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(config.count, 0)));
  for (int s = 0; s < config.count; ++s) {
    auto rng = scenario_rng(config.seed, s, SetKind::kHlru);
    out.push_back(sample_hlru_point(model, rng));
  }
  return out;
}

struct SlotDispatcher::Impl {
  LinearModel model;
  std::unique_ptr<LpSession> session;
  std::vector<double> load;
  std::vector<int> rows1, rows2;
  std::vector<int> shed1, spill1, shed2, spill2;
  std::vector<int> dispatch1;
  std::vector<double> weight;
  double fixed_cost = 0.0;
  double shed_weight = 0.0;  // M$ per MW over the slot
  bool two_stage = true;
};

SlotDispatcher::SlotDispatcher(const PlanningSystem& system, const AssetCatalog& catalog,
                               const SlotContext& slot, const ScenarioConfig& config)
    : impl_(std::make_unique<Impl>()) {
  if (!(config.shedding_price > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "shedding price must be positive");
  }
  Impl& m = *impl_;
  const Horizon& hz = system.horizon;
  m.two_stage = config.include_hlru;
  m.load = slot.load;
  m.shed_weight = config.shedding_price * 1e-6 * slot.duration * hz.discount(slot.year);

  auto spec_for = [&](const std::string& tag, bool tethered) {
    BlockSpec spec;
    spec.tag = tag;
    spec.num_buses = slot.num_buses;
    spec.theta_max = slot.theta_max;
    spec.load = slot.load;
    spec.slacks = true;
    spec.all_balance_rows = true;
    for (std::size_t i = 0; i < slot.lines.size(); ++i) {
      const SlotLine& l = slot.lines[i];
      spec.lines.push_back({l.from, l.to, l.reactance_pu, l.capacity, Indicator::fixed(1.0)});
      if (l.facts_capacity > 0.0) {
        spec.facts.push_back({static_cast<int>(i), l.facts_capacity, Indicator::fixed(1.0)});
      }
    }
    for (const SlotUnit& u : slot.units) {
      BlockUnit bu;
      bu.bus = u.bus;
      bu.p_min = u.p_min;
      bu.p_max = u.p_max;
      bu.status = Indicator::fixed(1.0);
      if (tethered) {
        bu.tethered = true;
        bu.lower = std::max(u.p_min, u.base - u.ramp_down);
        bu.upper = std::min(u.p_max, u.base + u.ramp_up);
        if (bu.lower > bu.upper) bu.lower = bu.upper;
      }
      spec.units.push_back(bu);
    }
    return spec;
  };

  const BlockIndex b1 = add_operating_block(m.model, spec_for("s1_", false));
  m.rows1 = b1.balance_row;
  m.shed1 = b1.slack_down;
  m.spill1 = b1.slack_up;
  m.dispatch1 = b1.dispatch;
  for (std::size_t i = 0; i < slot.units.size(); ++i) {
    const SlotUnit& u = slot.units[i];
    const GenUnit& g = catalog.units[u.unit];
    m.weight.push_back(u.weight);
    m.model.set_cost(m.dispatch1[i], u.weight);
    m.fixed_cost += slot.duration * g.cost_fixed * hz.discount(slot.year - g.discount_offset);
  }
  for (int b = 0; b < slot.num_buses; ++b) {
    m.model.set_cost(m.shed1[b], m.shed_weight);
    m.model.set_cost(m.spill1[b], m.shed_weight);
  }
  if (m.two_stage) {
    const bool from_base = config.ramp_reference == RampReference::kBase;
    const BlockIndex b2 = add_operating_block(m.model, spec_for("s2_", from_base));
    m.rows2 = b2.balance_row;
    m.shed2 = b2.slack_down;
    m.spill2 = b2.slack_up;
    for (int b = 0; b < slot.num_buses; ++b) {
      m.model.set_cost(m.shed2[b], m.shed_weight);
      m.model.set_cost(m.spill2[b], m.shed_weight);
    }
    for (std::size_t i = 0; i < slot.units.size(); ++i) {
      m.model.set_cost(b2.dispatch[i], 0.0);
      if (from_base) continue;
      const SlotUnit& u = slot.units[i];
      const std::string n = std::to_string(i);
      m.model.add_row({{b2.dispatch[i], 1.0}, {m.dispatch1[i], -1.0}}, RowSense::kLe, u.ramp_up,
                      "ru_" + n);
      m.model.add_row({{b2.dispatch[i], 1.0}, {m.dispatch1[i], -1.0}}, RowSense::kGe, -u.ramp_down,
                      "rd_" + n);
    }
  }
  SolveParams params;
  params.feasibility_tol = 1e-9;
  m.session = std::make_unique<LpSession>(m.model, params);
}

SlotDispatcher::~SlotDispatcher() = default;
SlotDispatcher::SlotDispatcher(SlotDispatcher&&) noexcept = default;
SlotDispatcher& SlotDispatcher::operator=(SlotDispatcher&&) noexcept = default;

SlotOutcome SlotDispatcher::run(std::span<const double> ldcu, std::span<const double> hlru) {
  Impl& m = *impl_;
  const std::size_t nb = m.load.size();
  if (ldcu.size() != nb || (m.two_stage && hlru.size() != nb)) {
    throw Error(ErrorCode::kInvalidInput, "scenario vector has wrong dimension");
  }
  for (std::size_t b = 0; b < nb; ++b) {
    m.session->set_rhs(m.rows1[b], -m.load[b] - ldcu[b]);
    if (m.two_stage) m.session->set_rhs(m.rows2[b], -m.load[b] - hlru[b]);
  }
  const SolveResult r = m.session->solve();
  if (r.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kBackend, "dispatch LP ended with status " + std::string(to_string(r.status)));
  }
  SlotOutcome out;
  out.fuel_cost = m.fixed_cost;
  for (std::size_t i = 0; i < m.dispatch1.size(); ++i) out.fuel_cost += m.weight[i] * r.primal[m.dispatch1[i]];
  for (std::size_t b = 0; b < nb; ++b) {
    out.shed_mw += r.primal[m.shed1[b]];
    out.spill_mw += r.primal[m.spill1[b]];
    if (m.two_stage) {
      out.shed_mw += r.primal[m.shed2[b]];
      out.spill_mw += r.primal[m.spill2[b]];
    }
  }
  out.shed_cost = m.shed_weight * out.shed_mw;
  return out;
}

SimulationMetrics evaluate(const Plan& plan, const PlanningSystem& system,
                           const AssetCatalog& catalog, const SlottedLoadModel& loads,
                           const UncertaintyModel& uncertainty, const ScenarioConfig& config) {
  if (config.count < 1) throw Error(ErrorCode::kInvalidInput, "scenario count must be >= 1");
  const int nb = loads.num_buses();
  const int Y = loads.num_years();
  const std::vector<SlotContext> slots = make_slot_contexts(system, catalog, plan, loads, uncertainty);
  const std::vector<UncertainPoint> ld = sample_ldcu(uncertainty, config);
  std::vector<UncertainPoint> hl;
  if (config.include_hlru) hl = sample_hlru(uncertainty, config);

  const std::size_t S = static_cast<std::size_t>(config.count);
  std::vector<std::vector<SlotOutcome>> outcome(slots.size(), std::vector<SlotOutcome>(S));
  auto work = [&](std::size_t c) {
    const SlotContext& ctx = slots[c];
    SlotDispatcher d(system, catalog, ctx, config);
    std::vector<double> e1(nb), e2(nb);
    for (std::size_t s = 0; s < S; ++s) {
      for (int b = 0; b < nb; ++b) {
        e1[b] = ld[s].epsilon(b, ctx.year, ctx.slot);
        e2[b] = config.include_hlru ? hl[s].epsilon(b, ctx.year, ctx.slot) : 0.0;
      }
      outcome[c][s] = d.run(e1, e2);
    }
  };
  const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(slots.size())));
  if (threads == 1) {
    for (std::size_t c = 0; c < slots.size(); ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(slots.size());
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < slots.size(); c += threads) {
          try {
            work(c);
          } catch (...) {
            errors[c] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SimulationMetrics m;
  m.years.resize(Y);
  for (int y = 0; y < Y; ++y) m.years[y].year = y;
  const double inv_s = 1.0 / static_cast<double>(S);
  for (std::size_t s = 0; s < S; ++s) {
    ScenarioResult r;
    r.index = static_cast<int>(s);
    for (std::size_t c = 0; c < slots.size(); ++c) {
      const SlotOutcome& o = outcome[c][s];
      const double d = slots[c].duration;
      const bool shed = o.shed_mw > kShedThreshold;
      r.operation_cost += o.fuel_cost;
      r.shedding_cost += o.shed_cost;
      r.shed_energy += d * o.shed_mw;
      r.spill_energy += d * o.spill_mw;
      if (shed) r.loss_of_load_hours += d;
      m.max_shed_mw = std::max(m.max_shed_mw, o.shed_mw);
      YearMetrics& ym = m.years[slots[c].year];
      ym.eoc += o.fuel_cost * inv_s;
      ym.elc += o.shed_cost * inv_s;
      ym.eens += d * o.shed_mw * inv_s;
      if (shed) ym.lolh += d * inv_s;
    }
    r.shed_energy /= Y;
    r.spill_energy /= Y;
    r.loss_of_load_hours /= Y;
    m.eoc += r.operation_cost * inv_s;
    m.elc += r.shedding_cost * inv_s;
    m.eens += r.shed_energy * inv_s;
    m.lolh += r.loss_of_load_hours * inv_s;
    m.hlc = std::max(m.hlc, r.shedding_cost);
    m.scenarios.push_back(r);
  }
  m.etc = m.eoc + m.elc;
  return m;
}

}  // namespace rtep
