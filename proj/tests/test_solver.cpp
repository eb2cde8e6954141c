#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "rtep/error.hpp"
#include "rtep/solver.hpp"

using namespace rtep;

TEST_CASE("minimise x subject to x >= 3") {
  LinearModel m;
  const int x = m.add_variable(0.0, kInfinity, 1.0, false, "x");
  m.add_row({{x, 1.0}}, RowSense::kGe, 3.0);
  const SolveResult r = solve(m);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(3.0));
  CHECK(r.primal[x] == doctest::Approx(3.0));
}

TEST_CASE("integer model") {
  LinearModel m;
  m.set_sense(ObjectiveSense::kMaximize);
  const int a = m.add_variable(0.0, 10.0, 1.0, true);
  const int b = m.add_variable(0.0, 10.0, 1.0, true);
  m.add_row({{a, 2.0}, {b, 2.0}}, RowSense::kLe, 7.0);
  const SolveResult r = solve(m);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(3.0));
}

TEST_CASE("integer infeasible") {
  LinearModel m;
  const int a = m.add_variable(0.0, 10.0, 0.0, true);
  m.add_row({{a, 2.0}}, RowSense::kEq, 3.0);
  CHECK(solve(m).status == SolveStatus::kInfeasible);
}

TEST_CASE("empty model and offset") {
  LinearModel m;
  m.set_offset(4.5);
  const SolveResult r = solve(m);
  CHECK(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(4.5));
}

TEST_CASE("validation") {
  LinearModel m;
  const int x = m.add_variable(2.0, 1.0);
  (void)x;
  CHECK_THROWS_AS(m.validate(), Error);
  LinearModel n;
  n.add_variable(0.0, 1.0);
  n.add_row({{3, 1.0}}, RowSense::kLe, 1.0);
  CHECK_THROWS_AS(n.validate(), Error);
}

TEST_CASE("LP text round trip") {
  LinearModel m;
  const int x = m.add_variable(0.0, 4.0, -1.0, false, "x");
  const int y = m.add_binary(-2.0, "y");
  m.add_row({{x, 1.0}, {y, 3.0}}, RowSense::kLe, 5.0, "cap");
  const std::string path = (std::filesystem::temp_directory_path() / "rtep_roundtrip.lp").string();
  write_lp(m, path);
  const LinearModel back = read_lp(path);
  std::remove(path.c_str());
  CHECK(back.num_variables() == 2);
  CHECK(back.num_rows() == 1);
  CHECK(back.num_integer() == 1);
  CHECK(solve(back).objective == doctest::Approx(solve(m).objective));
  CHECK(to_lp_string(m).find("cap") != std::string::npos);
}

TEST_CASE("solves are deterministic") {
  LinearModel m;
  for (int i = 0; i < 20; ++i) m.add_variable(0.0, 1.0, -(i % 7 + 1.0), true);
  std::vector<int> idx;
  std::vector<double> val;
  for (int i = 0; i < 20; ++i) {
    idx.push_back(i);
    val.push_back(1.0 + i % 5);
  }
  m.add_row(idx, val, RowSense::kLe, 17.0);
  const SolveResult a = solve(m);
  const SolveResult b = solve(m);
  CHECK(a.objective == b.objective);
  CHECK(a.primal == b.primal);
}

TEST_CASE("session warm start after rhs change") {
  LinearModel m;
  const int x = m.add_variable(0.0, kInfinity, 1.0);
  const int row = m.add_row({{x, 1.0}}, RowSense::kGe, 3.0);
  LpSession s(m);
  CHECK(s.solve().objective == doctest::Approx(3.0));
  s.set_rhs(row, 8.0);
  CHECK(s.solve().objective == doctest::Approx(8.0));
  s.set_bounds(x, 0.0, 5.0);
  CHECK(s.solve().status == SolveStatus::kInfeasible);
}
