#include <doctest.h>

#include "rtep/error.hpp"
#include "rtep/io.hpp"
#include "support.hpp"

using namespace rtep;
using namespace rtep::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidInput;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("system json round trip") {
  const PlanningSystem s = two_bus_system();
  const Json j = system_to_json(s);
  const PlanningSystem back = parse_system(j);
  CHECK(back.buses.size() == 2);
  CHECK(back.corridors[0].line_capacity == 60.0);
  CHECK(back.existing_generators[0].cost_marginal == 0.01);
  CHECK(back.horizon.recourse_budget == kInfinity);
  CHECK(system_to_json(back) == j);
}

TEST_CASE("system parse errors name the entity and field") {
  Json j = system_to_json(two_bus_system());
  j["corridors"][0].erase("reactance");
  CHECK(code_of([&] { parse_system(j); }) == ErrorCode::kParse);
  const std::string msg = message_of([&] { parse_system(j); });
  CHECK(msg.find("1-2") != std::string::npos);
  CHECK(msg.find("reactance") != std::string::npos);

  CHECK(code_of([] { parse_system_text("{ not json"); }) == ErrorCode::kParse);
  Json wrong = system_to_json(two_bus_system());
  wrong["buses"][0]["max_new_generators"] = "two";
  CHECK(code_of([&] { parse_system(wrong); }) == ErrorCode::kParse);
}

TEST_CASE("curves") {
  const CurveSet c = parse_curves("hour,bus_1,bus_2\n1,5,0\n2,3,1\n3,8,2\n");
  CHECK(c.buses == std::vector<std::string>{"1", "2"});
  CHECK(c.hours() == 3);
  CHECK(c.values[0] == std::vector<double>{5, 3, 8});
  CHECK(c.warnings.empty());

  CHECK(parse_curves("hour,bus_1\n1,-2\n2,3\n").warnings.size() == 1);
  CHECK(code_of([] { parse_curves("hour,bus_1\n1,5\n3,4\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_curves("hour,bus_1,bus_2\n1,5\n2,4,4\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_curves("hour,bus_1\n1,abc\n2,4\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_curves("time,bus_1\n1,5\n2,4\n"); }) == ErrorCode::kParse);
}

TEST_CASE("curves are matched to system buses") {
  const PlanningSystem s = two_bus_system();
  const auto ok = curves_for_system(s, parse_curves("hour,bus_2\n1,5\n2,6\n"));
  CHECK(ok[0].empty());
  CHECK(ok[1] == std::vector<double>{5, 6});
  CHECK(code_of([&] { curves_for_system(s, parse_curves("hour,bus_1\n1,5\n2,6\n")); }) ==
        ErrorCode::kValidation);
  CHECK(code_of([&] { curves_for_system(s, parse_curves("hour,bus_2,bus_9\n1,5,1\n2,6,1\n")); }) ==
        ErrorCode::kValidation);
}

TEST_CASE("run config") {
  const Json doc = Json::parse(R"({"system": "sys.json", "curves": "c.csv", "mode": "M2",
                                   "tolerance": 0.01, "budget": 2, "scenarios": {"count": 10}})");
  const RunConfig c = parse_run_config(doc, "/data");
  CHECK(c.system_path == "/data/sys.json");
  CHECK(c.mode == Mode::kM2);
  CHECK(c.tolerance == 0.01);
  CHECK(c.budget == std::vector<double>{2.0});
  CHECK(c.scenarios.count == 10);
  const RunConfig again = parse_run_config(run_config_to_json(c), "");
  CHECK(again.system_path == c.system_path);
  CHECK(again.tolerance == c.tolerance);

  Json bad = doc;
  bad["mode"] = "M9";
  CHECK(code_of([&] { parse_run_config(bad, ""); }) == ErrorCode::kParse);
}

TEST_CASE("plan round trip") {
  const PlanningSystem s = two_bus_system();
  const AssetCatalog c = AssetCatalog::build(s, {});
  Plan p = Plan::empty(c, 1, 2);
  p.line_built[1][0] = 1;
  p.status[0][0] = 1;
  p.dispatch[0][0] = 42.5;
  REQUIRE(check_plan(s, c, p).empty());
  const LoadedPlan back = plan_from_json(plan_to_json(p, c, s), s);
  CHECK(back.plan.line_built == p.line_built);
  CHECK(back.plan.status == p.status);
  CHECK(back.plan.dispatch == p.dispatch);

  Json wrapped;
  wrapped["plan"] = plan_to_json(p, c, s);
  CHECK(plan_from_json(wrapped, s).plan.line_built == p.line_built);

  Json broken = plan_to_json(p, c, s);
  broken["units"][0]["dispatch"][0] = 1000.0;
  CHECK(code_of([&] { plan_from_json(broken, s); }) == ErrorCode::kValidation);
}
