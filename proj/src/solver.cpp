#include "rtep/solver.hpp"

#include <Highs.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "rtep/error.hpp"

namespace rtep {
namespace {

std::string number(double v) {
  if (v == kInfinity) return "+inf";
  if (v == -kInfinity) return "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

HighsLp to_highs(const LinearModel& model) {
  HighsLp lp;
  const int nv = model.num_variables();
  const int nr = model.num_rows();
  lp.num_col_ = nv;
  lp.num_row_ = nr;
  lp.sense_ = model.sense() == ObjectiveSense::kMinimize ? ObjSense::kMinimize : ObjSense::kMaximize;
  lp.offset_ = model.offset();
  lp.col_cost_.resize(nv);
  lp.col_lower_.resize(nv);
  lp.col_upper_.resize(nv);
  bool any_integer = false;
  for (int j = 0; j < nv; ++j) {
    const Variable& v = model.variable(j);
    lp.col_cost_[j] = v.cost;
    lp.col_lower_[j] = v.lower;
    lp.col_upper_[j] = v.upper;
    any_integer = any_integer || v.integer;
  }
  if (any_integer) {
    lp.integrality_.resize(nv);
    for (int j = 0; j < nv; ++j) {
      lp.integrality_[j] = model.variable(j).integer ? HighsVarType::kInteger
                                                     : HighsVarType::kContinuous;
    }
  }
  lp.row_lower_.resize(nr);
  lp.row_upper_.resize(nr);
  std::vector<int> count(nv + 1, 0);
  for (int i = 0; i < nr; ++i) {
    const Row& r = model.row(i);
    lp.row_lower_[i] = r.sense == RowSense::kLe ? -kHighsInf : r.rhs;
    lp.row_upper_[i] = r.sense == RowSense::kGe ? kHighsInf : r.rhs;
    for (int j : r.index) ++count[j + 1];
  }
  for (int j = 0; j < nv; ++j) count[j + 1] += count[j];
  auto& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kColwise;
  a.num_col_ = nv;
  a.num_row_ = nr;
  a.start_.assign(count.begin(), count.end());
  a.index_.resize(count[nv]);
  a.value_.resize(count[nv]);
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (int i = 0; i < nr; ++i) {
    const Row& r = model.row(i);
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      const int pos = fill[r.index[k]]++;
      a.index_[pos] = i;
      a.value_[pos] = r.value[k];
    }
  }
  return lp;
}

void configure(Highs& h, const SolveParams& params) {
  // RTEP_SOLVER_LOG=1 shows the backend log, for debugging slow solves.
  const char* log = std::getenv("RTEP_SOLVER_LOG");
  h.setOptionValue("output_flag", log != nullptr && log[0] == '1');
  h.setOptionValue("random_seed", 0);
  if (params.threads > 0) h.setOptionValue("threads", params.threads);
  if (std::isfinite(params.time_limit)) h.setOptionValue("time_limit", params.time_limit);
  h.setOptionValue("mip_rel_gap", params.rel_gap);
  h.setOptionValue("mip_abs_gap", params.abs_gap);
  h.setOptionValue("primal_feasibility_tolerance", params.feasibility_tol);
  h.setOptionValue("dual_feasibility_tolerance", params.feasibility_tol);
  h.setOptionValue("mip_feasibility_tolerance", params.integrality_tol);
}

SolveResult collect(Highs& h, bool is_mip, double seconds) {
  SolveResult out;
  out.wall_seconds = seconds;
  HighsModelStatus status = h.getModelStatus();
  if (status == HighsModelStatus::kUnboundedOrInfeasible) {
    // Presolve could not tell which; the simplex without presolve can.
    h.setOptionValue("presolve", "off");
    h.setOptionValue("solver", "simplex");
    h.run();
    status = h.getModelStatus();
    h.setOptionValue("presolve", "choose");
    h.setOptionValue("solver", "choose");
  }
  const HighsInfo& info = h.getInfo();
  switch (status) {
    case HighsModelStatus::kOptimal:
    case HighsModelStatus::kModelEmpty:
      out.status = SolveStatus::kOptimal;
      break;
    case HighsModelStatus::kInfeasible:
      out.status = SolveStatus::kInfeasible;
      return out;
    case HighsModelStatus::kUnbounded:
    case HighsModelStatus::kUnboundedOrInfeasible:
      out.status = SolveStatus::kUnbounded;
      return out;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt:
    case HighsModelStatus::kObjectiveBound:
    case HighsModelStatus::kObjectiveTarget:
      out.status = SolveStatus::kLimit;
      break;
    case HighsModelStatus::kModelError:
      throw Error(ErrorCode::kInvalidInput, "solver rejected the model");
    default:
      throw Error(ErrorCode::kBackend,
                  "solver failed with status " + h.modelStatusToString(status));
  }
  const HighsSolution& sol = h.getSolution();
  if (info.primal_solution_status == kSolutionStatusFeasible || status == HighsModelStatus::kOptimal ||
      status == HighsModelStatus::kModelEmpty) {
    out.primal = sol.col_value;
    out.objective = info.objective_function_value;
    if (status == HighsModelStatus::kModelEmpty) out.objective = h.getLp().offset_;
  }
  if (!is_mip && sol.dual_valid) {
    out.row_dual = sol.row_dual;
    out.reduced_cost = sol.col_dual;
  }
  out.gap = is_mip ? info.mip_gap : 0.0;
  return out;
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimit: return "limit";
  }
  return "unknown";
}

int LinearModel::add_variable(double lower, double upper, double cost, bool integer,
                              std::string name) {
  if (name.empty()) name = "x" + std::to_string(vars_.size());
  vars_.push_back({lower, upper, cost, integer, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int LinearModel::add_row(std::span<const int> index, std::span<const double> value,
                         RowSense sense, double rhs, std::string name) {
  if (index.size() != value.size()) {
    throw Error(ErrorCode::kInvalidInput, "row index/value length mismatch");
  }
  // Merge repeated columns so every row is a proper sparse vector.
  std::map<int, double> merged;
  for (std::size_t k = 0; k < index.size(); ++k) merged[index[k]] += value[k];
  Row r;
  r.sense = sense;
  r.rhs = rhs;
  r.name = name.empty() ? "r" + std::to_string(rows_.size()) : std::move(name);
  for (const auto& [j, v] : merged) {
    if (v == 0.0) continue;
    r.index.push_back(j);
    r.value.push_back(v);
  }
  rows_.push_back(std::move(r));
  return static_cast<int>(rows_.size()) - 1;
}

int LinearModel::add_row(std::initializer_list<std::pair<int, double>> terms, RowSense sense,
                         double rhs, std::string name) {
  std::vector<int> index;
  std::vector<double> value;
  for (const auto& [j, v] : terms) {
    index.push_back(j);
    value.push_back(v);
  }
  return add_row(index, value, sense, rhs, std::move(name));
}

void LinearModel::set_bounds(int var, double lower, double upper) {
  Variable& v = vars_.at(var);
  v.lower = lower;
  v.upper = upper;
}

int LinearModel::num_integer() const {
  int n = 0;
  for (const auto& v : vars_) n += v.integer ? 1 : 0;
  return n;
}

void LinearModel::validate() const {
  std::unordered_set<std::string> names;
  for (const auto& v : vars_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower == kInfinity ||
        v.upper == -kInfinity || v.lower > v.upper) {
      throw Error(ErrorCode::kInvalidInput, "variable " + v.name + " has invalid bounds");
    }
    if (!std::isfinite(v.cost)) {
      throw Error(ErrorCode::kInvalidInput, "variable " + v.name + " has non-finite cost");
    }
    if (!names.insert(v.name).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate variable name " + v.name);
    }
  }
  names.clear();
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) {
      throw Error(ErrorCode::kInvalidInput, "row " + r.name + " has non-finite rhs");
    }
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      if (r.index[k] < 0 || r.index[k] >= num_variables()) {
        throw Error(ErrorCode::kInvalidInput, "row " + r.name + " references a missing variable");
      }
      if (!std::isfinite(r.value[k])) {
        throw Error(ErrorCode::kInvalidInput, "row " + r.name + " has a non-finite coefficient");
      }
    }
    if (!names.insert(r.name).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate row name " + r.name);
    }
  }
  if (!std::isfinite(offset_)) throw Error(ErrorCode::kInvalidInput, "non-finite objective offset");
}

SolveResult solve(const LinearModel& model, const SolveParams& params) {
  model.validate();
  Highs h;
  configure(h, params);
  const auto start = std::chrono::steady_clock::now();
  if (h.passModel(to_highs(model)) == HighsStatus::kError) {
    throw Error(ErrorCode::kInvalidInput, "solver rejected the model");
  }
  if (h.run() == HighsStatus::kError && h.getModelStatus() == HighsModelStatus::kNotset) {
    throw Error(ErrorCode::kBackend, "solver run failed");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return collect(h, model.num_integer() > 0, seconds);
}

std::string to_lp_string(const LinearModel& model) {
  std::ostringstream out;
  out << (model.sense() == ObjectiveSense::kMinimize ? "Minimize\n" : "Maximize\n");
  out << " obj:";
  // Every column appears in the objective so that a reader sees them in order.
  for (const auto& v : model.variables()) {
    out << (v.cost < 0 ? " - " : " + ") << number(std::abs(v.cost)) << ' ' << v.name;
  }
  if (model.offset() != 0.0) {
    out << (model.offset() < 0 ? " - " : " + ") << number(std::abs(model.offset()));
  }
  out << "\nSubject To\n";
  for (const auto& r : model.rows()) {
    out << ' ' << r.name << ':';
    if (r.index.empty()) out << " 0 " << model.variable(0).name;
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      const double c = r.value[k];
      out << (c < 0 ? " - " : " + ") << number(std::abs(c)) << ' '
          << model.variable(r.index[k]).name;
    }
    out << (r.sense == RowSense::kLe ? " <= " : r.sense == RowSense::kGe ? " >= " : " = ")
        << number(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.lower == v.upper) {
      out << ' ' << v.name << " = " << number(v.lower) << '\n';
    } else if (v.lower == -kInfinity && v.upper == kInfinity) {
      out << ' ' << v.name << " free\n";
    } else {
      out << ' ' << number(v.lower) << " <= " << v.name << " <= " << number(v.upper) << '\n';
    }
  }
  if (model.num_integer() > 0) {
    out << "General\n";
    for (const auto& v : model.variables()) {
      if (v.integer) out << ' ' << v.name << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

void write_lp(const LinearModel& model, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kInvalidInput, "cannot write " + path);
  f << to_lp_string(model);
}

LinearModel read_lp(const std::string& path) {
  Highs h;
  h.setOptionValue("output_flag", false);
  if (h.readModel(path) == HighsStatus::kError) {
    throw Error(ErrorCode::kParse, "cannot read LP file " + path);
  }
  const HighsLp& lp = h.getLp();
  LinearModel model;
  model.set_sense(lp.sense_ == ObjSense::kMinimize ? ObjectiveSense::kMinimize
                                                   : ObjectiveSense::kMaximize);
  model.set_offset(lp.offset_);
  for (int j = 0; j < lp.num_col_; ++j) {
    const bool integer = !lp.integrality_.empty() && lp.integrality_[j] == HighsVarType::kInteger;
    const std::string name = j < static_cast<int>(lp.col_names_.size()) ? lp.col_names_[j] : "";
    model.add_variable(lp.col_lower_[j], lp.col_upper_[j], lp.col_cost_[j], integer, name);
  }
  HighsSparseMatrix a = lp.a_matrix_;
  a.ensureRowwise();
  for (int i = 0; i < lp.num_row_; ++i) {
    const std::span<const int> idx(a.index_.data() + a.start_[i],
                                   static_cast<std::size_t>(a.start_[i + 1] - a.start_[i]));
    const std::span<const double> val(a.value_.data() + a.start_[i], idx.size());
    const std::string name = i < static_cast<int>(lp.row_names_.size()) ? lp.row_names_[i] : "";
    const double lo = lp.row_lower_[i];
    const double hi = lp.row_upper_[i];
    if (lo == hi) {
      model.add_row(idx, val, RowSense::kEq, lo, name);
    } else {
      if (lo > -kHighsInf) model.add_row(idx, val, RowSense::kGe, lo, hi < kHighsInf ? name + "_lo" : name);
      if (hi < kHighsInf) model.add_row(idx, val, RowSense::kLe, hi, lo > -kHighsInf ? name + "_hi" : name);
    }
  }
  return model;
}

struct LpSession::Impl {
  Highs highs;
  std::vector<RowSense> senses;
};

LpSession::LpSession(const LinearModel& model, const SolveParams& params)
    : impl_(std::make_unique<Impl>()) {
  model.validate();
  if (model.num_integer() > 0) {
    throw Error(ErrorCode::kInvalidInput, "LpSession needs a continuous model");
  }
  configure(impl_->highs, params);
  for (const auto& r : model.rows()) impl_->senses.push_back(r.sense);
  if (impl_->highs.passModel(to_highs(model)) == HighsStatus::kError) {
    throw Error(ErrorCode::kInvalidInput, "solver rejected the model");
  }
}

LpSession::~LpSession() = default;

void LpSession::set_rhs(int row, double rhs) {
  const RowSense s = impl_->senses.at(row);
  impl_->highs.changeRowBounds(row, s == RowSense::kLe ? -kHighsInf : rhs,
                               s == RowSense::kGe ? kHighsInf : rhs);
}

void LpSession::set_bounds(int var, double lower, double upper) {
  impl_->highs.changeColBounds(var, lower, upper);
}

SolveResult LpSession::solve() {
  const auto start = std::chrono::steady_clock::now();
  if (impl_->highs.run() == HighsStatus::kError &&
      impl_->highs.getModelStatus() == HighsModelStatus::kNotset) {
    throw Error(ErrorCode::kBackend, "solver run failed");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return collect(impl_->highs, false, seconds);
}

}  // namespace rtep
