#include <doctest.h>

#include "rtep/error.hpp"
#include "rtep/plan.hpp"
#include "rtep/system.hpp"
#include "support.hpp"

using namespace rtep;

namespace {

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations) {
    if (v.entity.find(needle) != std::string::npos || v.message.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("toy system validates") {
  const PlanningSystem s = testing::two_bus_system();
  CHECK(validate(s).ok());
  CHECK_NOTHROW(require_valid(s));
}

TEST_CASE("broken systems are reported, not thrown") {
  PlanningSystem s = testing::two_bus_system();

  SUBCASE("unknown bus in corridor") {
    s.corridors[0].to_bus = "9";
    const auto r = validate(s);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r, "1-2"));
    CHECK_THROWS_AS(require_valid(s), Error);
  }
  SUBCASE("min above max lines") {
    s.corridors[0].min_lines = 3;
    CHECK_FALSE(validate(s).ok());
  }
  SUBCASE("non-positive reactance") {
    s.corridors[0].reactance = 0.0;
    CHECK_FALSE(validate(s).ok());
  }
  SUBCASE("p_min above p_max") {
    s.existing_generators[0].p_min = 200.0;
    CHECK_FALSE(validate(s).ok());
  }
  SUBCASE("duplicate bus id") {
    s.buses.push_back({"1", true, 0});
    CHECK_FALSE(validate(s).ok());
  }
  SUBCASE("negative discount rate") {
    s.horizon.discount_rate = -0.5;
    CHECK_FALSE(validate(s).ok());
  }
  SUBCASE("candidate corridor that does not exist") {
    s.candidate_line_corridors.push_back("7-8");
    CHECK_FALSE(validate(s).ok());
  }
}

TEST_CASE("lookups") {
  const PlanningSystem s = testing::two_bus_system();
  CHECK(s.bus_index("2") == 1);
  CHECK_FALSE(s.bus_index("3").has_value());
  CHECK(s.corridor_index("1-2") == 0);
}

TEST_CASE("discount factor") {
  Horizon h;
  h.discount_rate = 0.1;
  CHECK(100.0 * discount_factor(h, 1) == doctest::Approx(100.0 / 1.1));
  CHECK(discount_factor(h, 0) == 1.0);
  CHECK(h.discount(2) == doctest::Approx(1.0 / 1.21));
}

TEST_CASE("catalog layout") {
  PlanningSystem s = testing::two_bus_system();
  const AssetCatalog c = AssetCatalog::build(s, {});
  REQUIRE(c.lines.size() == 2);
  CHECK(c.lines[0].existing);
  CHECK_FALSE(c.lines[1].existing);
  CHECK(c.lines[1].candidate);
  CHECK(c.units.size() == 1);
  CHECK(c.line_index(0, 1) == 1);

  AssetOptions no_lines;
  no_lines.enable_lines = false;
  const AssetCatalog n = AssetCatalog::build(s, no_lines);
  for (const auto& l : n.lines) CHECK((l.existing || !l.candidate));
}

TEST_CASE("empty plan passes the build rules") {
  const PlanningSystem s = testing::two_bus_system();
  const AssetCatalog c = AssetCatalog::build(s, {});
  Plan p = Plan::empty(c, 1, 2);
  CHECK(check_plan(s, c, p).empty());
  p.dispatch[0][0] = 500.0;
  p.status[0][0] = 1;
  CHECK_FALSE(check_plan(s, c, p).empty());
}
