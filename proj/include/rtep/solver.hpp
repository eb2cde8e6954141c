#pragma once

// Engine-neutral linear / mixed-integer model and solve entry points. The
// backend is chosen at build time; nothing outside solver.cpp names it.

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtep/system.hpp"

namespace rtep {

enum class RowSense { kLe, kEq, kGe };
enum class ObjectiveSense { kMinimize, kMaximize };

struct Variable {
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
  bool integer = false;
  std::string name;
};

struct Row {
  std::vector<int> index;
  std::vector<double> value;
  RowSense sense = RowSense::kLe;
  double rhs = 0.0;
  std::string name;
};

class LinearModel {
 public:
  // Empty names are replaced with "x<index>" / "r<index>".
  int add_variable(double lower, double upper, double cost = 0.0, bool integer = false,
                   std::string name = {});
  int add_binary(double cost = 0.0, std::string name = {}) {
    return add_variable(0.0, 1.0, cost, true, std::move(name));
  }
  int add_row(std::span<const int> index, std::span<const double> value, RowSense sense,
              double rhs, std::string name = {});
  int add_row(std::initializer_list<std::pair<int, double>> terms, RowSense sense, double rhs,
              std::string name = {});

  void set_sense(ObjectiveSense sense) { sense_ = sense; }
  void set_cost(int var, double cost) { vars_.at(var).cost = cost; }
  void add_cost(int var, double cost) { vars_.at(var).cost += cost; }
  void set_offset(double offset) { offset_ = offset; }
  void set_bounds(int var, double lower, double upper);
  void set_rhs(int row, double rhs) { rows_.at(row).rhs = rhs; }

  ObjectiveSense sense() const { return sense_; }
  double offset() const { return offset_; }
  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_integer() const;
  const Variable& variable(int i) const { return vars_.at(i); }
  const Row& row(int i) const { return rows_.at(i); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }

  // Throws Error(kInvalidInput) naming the first broken invariant.
  void validate() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  double offset_ = 0.0;
};

struct SolveParams {
  double time_limit = kInfinity;  // seconds
  double rel_gap = 1e-6;
  double abs_gap = 1e-9;
  int threads = 1;
  // Primal feasibility and integrality tolerances; tightened for the
  // dualized subproblems where big-M products amplify slop.
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kLimit };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kLimit;
  double objective = 0.0;
  std::vector<double> primal;    // empty when no solution is available
  std::vector<double> row_dual;  // continuous models only
  std::vector<double> reduced_cost;
  double wall_seconds = 0.0;
  double gap = 0.0;

  bool has_solution() const { return !primal.empty(); }
};

SolveResult solve(const LinearModel& model, const SolveParams& params = {});

// CPLEX-style LP text.
std::string to_lp_string(const LinearModel& model);
void write_lp(const LinearModel& model, const std::string& path);
LinearModel read_lp(const std::string& path);

// A continuous model kept loaded in the backend so that repeated solves
// after right-hand-side or bound changes can warm start.
class LpSession {
 public:
  explicit LpSession(const LinearModel& model, const SolveParams& params = {});
  ~LpSession();
  LpSession(const LpSession&) = delete;
  LpSession& operator=(const LpSession&) = delete;

  void set_rhs(int row, double rhs);
  void set_bounds(int var, double lower, double upper);
  SolveResult solve();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rtep
