#pragma once

// One DC-power-flow operating block (dispatch, line flows, FACTS injections,
// angles, nodal balance) appended to a LinearModel. Shared by the master
// problem, the subproblem inner LPs and the simulator.

#include <string>
#include <vector>

#include "rtep/solver.hpp"

namespace rtep {

// A build or status flag: either a model column or a fixed 0/1.
struct Indicator {
  int col = -1;
  double value = 0.0;

  static Indicator fixed(double v) { return {-1, v}; }
  static Indicator column(int c) { return {c, 0.0}; }
  bool is_column() const { return col >= 0; }
  bool is_off() const { return col < 0 && value == 0.0; }
};

struct BlockLine {
  int from = 0;
  int to = 0;
  double reactance_pu = 0.0;  // X / base_mva, radians per MW
  double capacity = 0.0;
  Indicator built;
};

struct BlockFacts {
  int line = 0;  // index into BlockSpec::lines
  double capacity = 0.0;
  Indicator built;
};

struct BlockUnit {
  int bus = 0;
  double p_min = 0.0;
  double p_max = 0.0;
  Indicator status;
  double cost = 0.0;  // objective coefficient on the dispatch column
  // Tighter dispatch range used when the status is fixed on (ramp tethers).
  double lower = 0.0;
  double upper = 0.0;
  bool tethered = false;
};

struct BlockSpec {
  std::string tag;  // prefix for column and row names; must be unique per block
  int num_buses = 0;
  double theta_max = 0.0;
  std::vector<BlockLine> lines;
  std::vector<BlockFacts> facts;
  std::vector<BlockUnit> units;
  std::vector<double> load;  // MW per bus; balance rhs is -load
  bool slacks = false;       // s+ / s- per bus at unit cost
  bool all_balance_rows = false;  // keep rows for buses with no terms and no load
};

struct BlockIndex {
  std::vector<int> dispatch;     // per unit, -1 when the unit is off
  std::vector<int> flow;         // per line, -1 when the line is out
  std::vector<int> injection;    // per FACTS device, -1 when absent
  std::vector<int> theta;        // per bus
  std::vector<int> balance_row;  // per bus, -1 when the bus has no terms
  std::vector<int> slack_up;     // per bus when slacks are on
  std::vector<int> slack_down;
};

BlockIndex add_operating_block(LinearModel& model, const BlockSpec& spec);

}  // namespace rtep
