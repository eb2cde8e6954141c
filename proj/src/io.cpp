#include "rtep/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "rtep/error.hpp"

namespace rtep {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where + ": " + what);
}

// Typed field access that names the entity on failure.
class Fields {
 public:
  Fields(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) parse_fail(where_, "expected an object");
  }

  const std::string& where() const { return where_; }
  bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }
  const Json& raw(const char* key) const {
    if (!obj_.contains(key)) parse_fail(where_, std::string("missing field '") + key + "'");
    return obj_.at(key);
  }

  double num(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_number()) parse_fail(where_, std::string("field '") + key + "' must be a number");
    return v.get<double>();
  }
  double num(const char* key, double fallback) const { return has(key) ? num(key) : fallback; }

  int integer(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_number_integer()) parse_fail(where_, std::string("field '") + key + "' must be an integer");
    return v.get<int>();
  }
  int integer(const char* key, int fallback) const { return has(key) ? integer(key) : fallback; }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = obj_.at(key);
    if (!v.is_boolean()) parse_fail(where_, std::string("field '") + key + "' must be true or false");
    return v.get<bool>();
  }

  std::string str(const char* key) const {
    const Json& v = raw(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    parse_fail(where_, std::string("field '") + key + "' must be a string");
  }
  std::string str(const char* key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }

  std::vector<std::string> strings(const char* key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const Json& v = obj_.at(key);
    if (!v.is_array()) parse_fail(where_, std::string("field '") + key + "' must be an array");
    for (const Json& e : v) {
      if (e.is_string()) {
        out.push_back(e.get<std::string>());
      } else if (e.is_number_integer()) {
        out.push_back(std::to_string(e.get<long long>()));
      } else {
        parse_fail(where_, std::string("field '") + key + "' must hold ids");
      }
    }
    return out;
  }

  const Json& array(const char* key, bool required = true) const {
    static const Json empty = Json::array();
    if (!required && !has(key)) return empty;
    const Json& v = raw(key);
    if (!v.is_array()) parse_fail(where_, std::string("field '") + key + "' must be an array");
    return v;
  }

 private:
  const Json& obj_;
  std::string where_;
};

std::string entity_name(const Json& item, const char* kind, std::size_t i) {
  if (item.is_object() && item.contains("id")) {
    const Json& id = item.at("id");
    if (id.is_string()) return std::string(kind) + " '" + id.get<std::string>() + "'";
    if (id.is_number_integer()) return std::string(kind) + " '" + std::to_string(id.get<long long>()) + "'";
  }
  return std::string(kind) + " #" + std::to_string(i + 1);
}

Json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, source + ": " + e.what());
  }
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  if (p.empty() || base_dir.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

Json bits(const std::vector<std::uint8_t>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(static_cast<int>(x));
  return a;
}

std::vector<std::uint8_t> read_bits(const Json& a, std::size_t n, const std::string& where) {
  if (!a.is_array() || a.size() != n) parse_fail(where, "expected " + std::to_string(n) + " entries");
  std::vector<std::uint8_t> out;
  for (const Json& e : a) {
    if (!e.is_number_integer() || (e.get<int>() != 0 && e.get<int>() != 1)) parse_fail(where, "entries must be 0 or 1");
    out.push_back(static_cast<std::uint8_t>(e.get<int>()));
  }
  return out;
}

std::vector<double> read_numbers(const Json& a, std::size_t n, const std::string& where) {
  if (!a.is_array() || a.size() != n) parse_fail(where, "expected " + std::to_string(n) + " entries");
  std::vector<double> out;
  for (const Json& e : a) {
    if (!e.is_number()) parse_fail(where, "entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

// ---- system ---------------------------------------------------------------

PlanningSystem parse_system(const Json& doc) {
  Fields top(doc, "system");
  PlanningSystem s;
  s.name = top.str("name", "");
  s.base_mva = top.num("base_mva", 100.0);

  Fields hz(top.raw("horizon"), "horizon");
  s.horizon.base_year = hz.integer("base_year", 0);
  s.horizon.num_years = hz.integer("num_years");
  s.horizon.discount_rate = hz.num("discount_rate");
  s.horizon.line_lead_years = hz.integer("line_lead_years", 0);
  s.horizon.gen_lead_years = hz.integer("gen_lead_years", 0);
  s.horizon.theta_max = hz.num("theta_max", s.horizon.theta_max);
  // null or absent: unlimited
  s.horizon.recourse_budget = hz.num("recourse_budget", kInfinity);

  const Json& buses = top.array("buses");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    Fields f(buses[i], entity_name(buses[i], "bus", i));
    s.buses.push_back({f.str("id"), f.boolean("has_load", true), f.integer("max_new_generators", 0)});
  }
  const Json& cors = top.array("corridors");
  for (std::size_t i = 0; i < cors.size(); ++i) {
    Fields f(cors[i], entity_name(cors[i], "corridor", i));
    Corridor c;
    c.id = f.str("id");
    c.from_bus = f.str("from_bus");
    c.to_bus = f.str("to_bus");
    c.reactance = f.num("reactance");
    c.line_capacity = f.num("line_capacity");
    c.min_lines = f.integer("min_lines");
    c.max_lines = f.integer("max_lines");
    c.line_cost = f.num("line_cost", 0.0);
    s.corridors.push_back(c);
  }
  const Json& gens = top.array("existing_generators", false);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Fields f(gens[i], entity_name(gens[i], "generator", i));
    GeneratorExisting g;
    g.id = f.str("id");
    g.bus = f.str("bus");
    g.p_min = f.num("p_min", 0.0);
    g.p_max = f.num("p_max");
    g.ramp_up = f.num("ramp_up");
    g.ramp_down = f.num("ramp_down");
    g.cost_fixed = f.num("cost_fixed", 0.0);
    g.cost_marginal = f.num("cost_marginal");
    s.existing_generators.push_back(g);
  }
  const Json& types = top.array("generator_types", false);
  for (std::size_t i = 0; i < types.size(); ++i) {
    Fields f(types[i], entity_name(types[i], "generator type", i));
    GeneratorType t;
    t.id = f.str("id");
    t.p_min = f.num("p_min", 0.0);
    t.p_max = f.num("p_max");
    t.ramp_up = f.num("ramp_up");
    t.ramp_down = f.num("ramp_down");
    t.invest_cost = f.num("invest_cost");
    t.cost_fixed = f.num("cost_fixed", 0.0);
    t.cost_marginal = f.num("cost_marginal");
    s.generator_types.push_back(t);
  }
  const Json& facts = top.array("facts_types", false);
  for (std::size_t i = 0; i < facts.size(); ++i) {
    Fields f(facts[i], entity_name(facts[i], "FACTS type", i));
    s.facts_types.push_back({f.str("id"), f.num("capacity"), f.num("invest_cost")});
  }
  if (top.has("candidates")) {
    Fields c(top.raw("candidates"), "candidates");
    s.candidate_gen_buses = c.strings("generator_buses");
    s.candidate_line_corridors = c.strings("line_corridors");
    s.candidate_facts_corridors = c.strings("facts_corridors");
  }
  return s;
}

PlanningSystem parse_system_text(std::string_view text) {
  return parse_system(parse_json_text(text, "system"));
}

PlanningSystem load_system(const std::string& path) {
  PlanningSystem s = parse_system(parse_json_text(read_file(path), path));
  require_valid(s);
  return s;
}

Json system_to_json(const PlanningSystem& s) {
  Json j;
  j["name"] = s.name;
  j["base_mva"] = s.base_mva;
  j["horizon"] = {{"base_year", s.horizon.base_year},
                  {"num_years", s.horizon.num_years},
                  {"discount_rate", s.horizon.discount_rate},
                  {"line_lead_years", s.horizon.line_lead_years},
                  {"gen_lead_years", s.horizon.gen_lead_years},
                  {"theta_max", s.horizon.theta_max},
                  {"recourse_budget", finite_or_null(s.horizon.recourse_budget)}};
  j["buses"] = Json::array();
  for (const Bus& b : s.buses) {
    j["buses"].push_back({{"id", b.id}, {"has_load", b.has_load}, {"max_new_generators", b.max_new_generators}});
  }
  j["corridors"] = Json::array();
  for (const Corridor& c : s.corridors) {
    j["corridors"].push_back({{"id", c.id}, {"from_bus", c.from_bus}, {"to_bus", c.to_bus},
                              {"reactance", c.reactance}, {"line_capacity", c.line_capacity},
                              {"min_lines", c.min_lines}, {"max_lines", c.max_lines},
                              {"line_cost", c.line_cost}});
  }
  j["existing_generators"] = Json::array();
  for (const GeneratorExisting& g : s.existing_generators) {
    j["existing_generators"].push_back({{"id", g.id}, {"bus", g.bus}, {"p_min", g.p_min},
                                        {"p_max", g.p_max}, {"ramp_up", g.ramp_up},
                                        {"ramp_down", g.ramp_down}, {"cost_fixed", g.cost_fixed},
                                        {"cost_marginal", g.cost_marginal}});
  }
  j["generator_types"] = Json::array();
  for (const GeneratorType& t : s.generator_types) {
    j["generator_types"].push_back({{"id", t.id}, {"p_min", t.p_min}, {"p_max", t.p_max},
                                    {"ramp_up", t.ramp_up}, {"ramp_down", t.ramp_down},
                                    {"invest_cost", t.invest_cost}, {"cost_fixed", t.cost_fixed},
                                    {"cost_marginal", t.cost_marginal}});
  }
  j["facts_types"] = Json::array();
  for (const FactsType& f : s.facts_types) {
    j["facts_types"].push_back({{"id", f.id}, {"capacity", f.capacity}, {"invest_cost", f.invest_cost}});
  }
  j["candidates"] = {{"generator_buses", s.candidate_gen_buses},
                     {"line_corridors", s.candidate_line_corridors},
                     {"facts_corridors", s.candidate_facts_corridors}};
  return j;
}

// ---- curves ---------------------------------------------------------------

CurveSet parse_curves(std::string_view text) {
  CurveSet out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(l);
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      std::size_t p = 0;
      while (p < cell.size() && cell[p] == ' ') ++p;
      cells.push_back(cell.substr(p));
    }
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  auto where = [&](int n) { return "curves line " + std::to_string(n); };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (out.buses.empty()) {
      if (cells.empty() || cells[0] != "hour") parse_fail(where(line_no), "header must start with 'hour'");
      if (cells.size() < 2) parse_fail(where(line_no), "header names no bus columns");
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (cells[c].rfind("bus_", 0) != 0 || cells[c].size() == 4) {
          parse_fail(where(line_no), "column '" + cells[c] + "' must be named bus_<id>");
        }
        out.buses.push_back(cells[c].substr(4));
      }
      out.values.assign(out.buses.size(), {});
      continue;
    }
    if (cells.size() != out.buses.size() + 1) {
      parse_fail(where(line_no), "expected " + std::to_string(out.buses.size() + 1) + " cells, found " +
                                     std::to_string(cells.size()));
    }
    long long hour = 0;
    {
      const auto& c = cells[0];
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), hour);
      if (ec != std::errc() || p != c.data() + c.size()) parse_fail(where(line_no), "hour '" + c + "' is not an integer");
    }
    const long long expected = static_cast<long long>(out.values[0].size()) + 1;
    if (hour != expected) {
      parse_fail(where(line_no), "hour " + std::to_string(hour) + " found where " + std::to_string(expected) +
                                     " was expected");
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v)) {
        parse_fail(where(line_no), "cell '" + cell + "' in column bus_" + out.buses[c - 1] + " is not a number");
      }
      out.values[c - 1].push_back(v);
    }
  }
  if (out.buses.empty()) parse_fail("curves", "file is empty");
  if (out.hours() < 2) parse_fail("curves", "at least two hours are required");
  for (std::size_t c = 0; c < out.buses.size(); ++c) {
    int negative = 0;
    for (double v : out.values[c]) negative += v < 0.0;
    if (negative > 0) {
      out.warnings.push_back("bus_" + out.buses[c] + ": " + std::to_string(negative) +
                             " negative net-load hours");
    }
  }
  return out;
}

CurveSet load_curves(const std::string& path) {
  try {
    return parse_curves(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw Error(ErrorCode::kParse, path + ": " + e.what());
    throw;
  }
}

std::vector<std::vector<double>> curves_for_system(const PlanningSystem& system, const CurveSet& curves) {
  std::vector<std::vector<double>> out(system.buses.size());
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < curves.buses.size(); ++c) {
    if (!system.bus_index(curves.buses[c])) {
      throw Error(ErrorCode::kValidation, "curve column bus_" + curves.buses[c] + " names an unknown bus");
    }
    column[curves.buses[c]] = c;
  }
  for (std::size_t b = 0; b < system.buses.size(); ++b) {
    const Bus& bus = system.buses[b];
    auto it = column.find(bus.id);
    if (!bus.has_load) continue;
    if (it == column.end()) throw Error(ErrorCode::kValidation, "load bus " + bus.id + " has no curve column");
    out[b] = curves.values[it->second];
  }
  return out;
}

// ---- run config -----------------------------------------------------------

RunConfig parse_run_config(const Json& doc, const std::string& base_dir) {
  Fields f(doc, "config");
  RunConfig c;
  c.system_path = resolve(base_dir, f.str("system", ""));
  c.curves_path = resolve(base_dir, f.str("curves", ""));
  c.output_dir = f.str("output_dir", c.output_dir);
  if (f.has("mode")) {
    const auto m = parse_mode(f.str("mode"));
    if (!m) parse_fail("config", "mode must be M1, M2 or M3");
    c.mode = *m;
  }
  if (f.has("assets")) {
    Fields a(f.raw("assets"), "config.assets");
    c.assets.enable_lines = a.boolean("lines", true);
    c.assets.enable_gens = a.boolean("generators", true);
    c.assets.enable_facts = a.boolean("facts", true);
  }
  c.tolerance = f.num("tolerance", c.tolerance);
  c.max_iterations = f.integer("max_iterations", c.max_iterations);
  if (f.has("recourse_budget")) c.recourse_budget = f.num("recourse_budget");
  if (f.has("line_lead_years")) c.line_lead_years = f.integer("line_lead_years");
  if (f.has("budget")) {
    const Json& b = f.raw("budget");
    c.budget.clear();
    if (b.is_number()) {
      c.budget.push_back(b.get<double>());
    } else if (b.is_array()) {
      for (const Json& e : b) {
        if (!e.is_number()) parse_fail("config", "budget entries must be numbers");
        c.budget.push_back(e.get<double>());
      }
    } else {
      parse_fail("config", "budget must be a number or an array");
    }
  }
  c.error_fraction = f.num("error_fraction", c.error_fraction);
  c.growth_rate = f.num("growth_rate", c.growth_rate);
  c.num_slots = f.integer("num_slots", c.num_slots);
  if (f.has("slot_durations")) {
    for (const Json& e : f.array("slot_durations")) {
      if (!e.is_number_integer()) parse_fail("config", "slot_durations must be integers");
      c.slot_durations.push_back(e.get<int>());
    }
  }
  if (f.has("scenarios")) {
    Fields s(f.raw("scenarios"), "config.scenarios");
    c.scenarios.count = s.integer("count", c.scenarios.count);
    c.scenarios.seed = static_cast<std::uint64_t>(s.num("seed", static_cast<double>(c.scenarios.seed)));
    c.scenarios.shedding_price = s.num("shedding_price", c.scenarios.shedding_price);
    c.scenarios.include_hlru = s.boolean("include_hlru", c.scenarios.include_hlru);
    const std::string ref = s.str("ramp_reference", "stage1");
    if (ref == "stage1") {
      c.scenarios.ramp_reference = RampReference::kStage1;
    } else if (ref == "base") {
      c.scenarios.ramp_reference = RampReference::kBase;
    } else {
      parse_fail("config.scenarios", "ramp_reference must be 'stage1' or 'base'");
    }
    c.scenarios.threads = s.integer("threads", c.scenarios.threads);
  }
  if (f.has("solver")) {
    Fields s(f.raw("solver"), "config.solver");
    c.solver.time_limit = s.num("time_limit", c.solver.time_limit);
    c.solver.rel_gap = s.num("rel_gap", c.solver.rel_gap);
    c.solver.abs_gap = s.num("abs_gap", c.solver.abs_gap);
    c.solver.threads = s.integer("threads", c.solver.threads);
  }
  c.parallel = f.boolean("parallel", c.parallel);
  c.all_violating_slots = f.boolean("all_violating_slots", c.all_violating_slots);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  const std::string dir = fs::path(path).parent_path().string();
  return parse_run_config(parse_json_text(read_file(path), path), dir);
}

Json run_config_to_json(const RunConfig& c) {
  Json j;
  j["system"] = c.system_path;
  j["curves"] = c.curves_path;
  j["output_dir"] = c.output_dir;
  j["mode"] = std::string(to_string(c.mode));
  j["assets"] = {{"lines", c.assets.enable_lines},
                 {"generators", c.assets.enable_gens},
                 {"facts", c.assets.enable_facts}};
  j["tolerance"] = c.tolerance;
  j["max_iterations"] = c.max_iterations;
  j["recourse_budget"] = optional_number(c.recourse_budget);
  j["line_lead_years"] = c.line_lead_years ? Json(*c.line_lead_years) : Json(nullptr);
  j["budget"] = c.budget.size() == 1 ? Json(c.budget[0]) : Json(c.budget);
  j["error_fraction"] = c.error_fraction;
  j["growth_rate"] = c.growth_rate;
  j["num_slots"] = c.num_slots;
  j["slot_durations"] = c.slot_durations;
  j["scenarios"] = {{"count", c.scenarios.count},
                    {"seed", c.scenarios.seed},
                    {"shedding_price", c.scenarios.shedding_price},
                    {"include_hlru", c.scenarios.include_hlru},
                    {"ramp_reference", c.scenarios.ramp_reference == RampReference::kBase ? "base" : "stage1"},
                    {"threads", c.scenarios.threads}};
  j["solver"] = {{"time_limit", finite_or_null(c.solver.time_limit)},
                 {"rel_gap", c.solver.rel_gap},
                 {"abs_gap", c.solver.abs_gap},
                 {"threads", c.solver.threads}};
  j["parallel"] = c.parallel;
  j["all_violating_slots"] = c.all_violating_slots;
  return j;
}

Inputs prepare_inputs(const RunConfig& config) {
  if (config.system_path.empty()) throw Error(ErrorCode::kInvalidInput, "no system file given");
  if (config.curves_path.empty()) throw Error(ErrorCode::kInvalidInput, "no curves file given");
  Inputs in;
  in.system = load_system(config.system_path);
  if (config.recourse_budget) in.system.horizon.recourse_budget = *config.recourse_budget;
  if (config.line_lead_years) in.system.horizon.line_lead_years = *config.line_lead_years;
  const ValidationReport report = validate(in.system);
  if (!report.ok()) throw Error(ErrorCode::kValidation, report.to_string());
  in.warnings = report.warnings;

  const CurveSet curves = load_curves(config.curves_path);
  in.warnings.insert(in.warnings.end(), curves.warnings.begin(), curves.warnings.end());
  std::vector<int> durations = config.slot_durations;
  if (durations.empty()) {
    durations = equal_slot_durations(curves.hours(), config.num_slots);
  }
  in.loads = build_load_model(curves_for_system(in.system, curves), in.system.horizon.num_years,
                              config.growth_rate, durations);
  in.uncertainty = build_uncertainty(in.loads, config.error_fraction, config.budget);
  return in;
}

// ---- plans ----------------------------------------------------------------

Json plan_to_json(const Plan& plan, const AssetCatalog& catalog, const PlanningSystem& system) {
  Json j;
  j["num_years"] = plan.num_years;
  j["num_slots"] = plan.num_slots;
  j["assets"] = {{"lines", catalog.options.enable_lines},
                 {"generators", catalog.options.enable_gens},
                 {"facts", catalog.options.enable_facts}};
  j["lines"] = Json::array();
  for (std::size_t i = 0; i < catalog.lines.size(); ++i) {
    const LineUnit& l = catalog.lines[i];
    if (l.existing || !l.candidate) continue;
    j["lines"].push_back({{"corridor", system.corridors[l.corridor].id}, {"k", l.k}, {"built", bits(plan.line_built[i])}});
  }
  j["facts"] = Json::array();
  for (std::size_t i = 0; i < catalog.facts.size(); ++i) {
    const FactsUnit& f = catalog.facts[i];
    j["facts"].push_back({{"corridor", system.corridors[f.corridor].id},
                          {"k", f.k},
                          {"type", system.facts_types[f.type].id},
                          {"built", bits(plan.facts_built[i])}});
  }
  j["generators"] = Json::array();
  for (std::size_t i = 0; i < catalog.new_gens.size(); ++i) {
    const NewGenUnit& g = catalog.new_gens[i];
    j["generators"].push_back({{"bus", system.buses[g.bus].id},
                               {"slot", g.slot},
                               {"type", system.generator_types[g.type].id},
                               {"built", bits(plan.gen_built[i])}});
  }
  j["units"] = Json::array();
  for (std::size_t u = 0; u < catalog.units.size(); ++u) {
    j["units"].push_back({{"label", catalog.units[u].label},
                          {"status", bits(plan.status[u])},
                          {"dispatch", plan.dispatch[u]}});
  }
  return j;
}

LoadedPlan plan_from_json(const Json& doc, const PlanningSystem& system) {
  const Json& pj = doc.is_object() && doc.contains("plan") ? doc.at("plan") : doc;
  Fields f(pj, "plan");
  AssetOptions opts;
  if (f.has("assets")) {
    Fields a(f.raw("assets"), "plan.assets");
    opts.enable_lines = a.boolean("lines", true);
    opts.enable_gens = a.boolean("generators", true);
    opts.enable_facts = a.boolean("facts", true);
  }
  LoadedPlan out;
  out.catalog = AssetCatalog::build(system, opts);
  const int Y = f.integer("num_years");
  const int H = f.integer("num_slots");
  if (Y < 1 || H < 1) parse_fail("plan", "num_years and num_slots must be >= 1");
  out.plan = Plan::empty(out.catalog, Y, H);
  const auto cells = static_cast<std::size_t>(Y) * H;

  for (const Json& e : f.array("lines", false)) {
    Fields l(e, "plan line");
    const auto c = system.corridor_index(l.str("corridor"));
    if (!c) parse_fail("plan line", "unknown corridor '" + l.str("corridor") + "'");
    const int idx = out.catalog.line_index(*c, l.integer("k"));
    if (idx < 0 || !out.catalog.lines[idx].candidate) {
      parse_fail("plan line " + l.str("corridor"), "slot " + std::to_string(l.integer("k")) + " is not a candidate");
    }
    out.plan.line_built[idx] = read_bits(l.raw("built"), Y, "plan line " + l.str("corridor"));
  }
  for (const Json& e : f.array("facts", false)) {
    Fields l(e, "plan FACTS");
    const auto c = system.corridor_index(l.str("corridor"));
    const auto t = system.facts_type_index(l.str("type"));
    const int k = l.integer("k");
    bool found = false;
    for (std::size_t i = 0; i < out.catalog.facts.size() && c && t; ++i) {
      const FactsUnit& u = out.catalog.facts[i];
      if (u.corridor == *c && u.k == k && u.type == *t) {
        out.plan.facts_built[i] = read_bits(l.raw("built"), Y, "plan FACTS " + l.str("corridor"));
        found = true;
      }
    }
    if (!found) parse_fail("plan FACTS " + l.str("corridor"), "no matching candidate device");
  }
  for (const Json& e : f.array("generators", false)) {
    Fields l(e, "plan generator");
    const auto b = system.bus_index(l.str("bus"));
    const auto t = system.generator_type_index(l.str("type"));
    const int s = l.integer("slot");
    bool found = false;
    for (std::size_t i = 0; i < out.catalog.new_gens.size() && b && t; ++i) {
      const NewGenUnit& u = out.catalog.new_gens[i];
      if (u.bus == *b && u.slot == s && u.type == *t) {
        out.plan.gen_built[i] = read_bits(l.raw("built"), Y, "plan generator at bus " + l.str("bus"));
        found = true;
      }
    }
    if (!found) parse_fail("plan generator at bus " + l.str("bus"), "no matching candidate unit");
  }
  std::map<std::string, std::size_t> by_label;
  for (std::size_t u = 0; u < out.catalog.units.size(); ++u) by_label[out.catalog.units[u].label] = u;
  for (const Json& e : f.array("units", false)) {
    Fields l(e, "plan unit");
    const std::string label = l.str("label");
    auto it = by_label.find(label);
    if (it == by_label.end()) parse_fail("plan unit '" + label + "'", "not in the asset catalog");
    out.plan.status[it->second] = read_bits(l.raw("status"), cells, "plan unit '" + label + "'");
    out.plan.dispatch[it->second] = read_numbers(l.raw("dispatch"), cells, "plan unit '" + label + "'");
  }
  const std::string problem = check_plan(system, out.catalog, out.plan);
  if (!problem.empty()) throw Error(ErrorCode::kValidation, "plan: " + problem);
  return out;
}

LoadedPlan load_plan(const std::string& path, const PlanningSystem& system) {
  return plan_from_json(parse_json_text(read_file(path), path), system);
}

// ---- reports --------------------------------------------------------------

Json cost_to_json(const CostBreakdown& c) {
  return {{"line_invest", c.line_invest},   {"facts_invest", c.facts_invest},
          {"gen_invest", c.gen_invest},     {"investment", c.investment()},
          {"base_operation", c.base_operation}, {"total", c.total}};
}

namespace {

Json point_to_json(const CutPoint& cut, const PlanningSystem& system) {
  Json entries = Json::array();
  const SlotTensor<double>& e = cut.point.epsilon;
  for (int b = 0; b < e.buses(); ++b) {
    for (int y = 0; y < e.years(); ++y) {
      for (int h = 0; h < e.slots(); ++h) {
        if (e(b, y, h) != 0.0) {
          entries.push_back({{"bus", system.buses[b].id}, {"year", y}, {"slot", h}, {"epsilon", e(b, y, h)}});
        }
      }
    }
  }
  return {{"kind", std::string(to_string(cut.kind))}, {"iteration", cut.iteration}, {"nonzero", entries}};
}

}  // namespace

Json report_to_json(const CcgReport& r, const PlanningSystem& system, const RunConfig& config) {
  Json j;
  j["system"] = system.name;
  j["mode"] = std::string(to_string(config.mode));
  j["termination"] = std::string(to_string(r.reason));
  j["objective"] = r.has_plan ? Json(r.cost.total) : Json(nullptr);
  j["cost"] = r.has_plan ? cost_to_json(r.cost) : Json(nullptr);
  j["ldcu_cuts"] = r.ldcu_cuts;
  j["hlru_cuts"] = r.hlru_cuts;
  j["wall_seconds"] = r.wall_seconds;
  j["iterations"] = Json::array();
  for (const IterationRecord& it : r.iterations) {
    j["iterations"].push_back({{"iteration", it.iteration},
                               {"master_objective", it.master_objective},
                               {"master_seconds", it.master_seconds},
                               {"spd1", optional_number(it.spd1)},
                               {"spd2", optional_number(it.spd2)},
                               {"spr", optional_number(it.spr)},
                               {"cut", it.cut_from.empty() ? Json(nullptr) : Json(it.cut_from)},
                               {"subproblem_seconds", it.subproblem_seconds}});
  }
  j["cuts"] = Json::array();
  for (const CutPoint& c : r.cuts) j["cuts"].push_back(point_to_json(c, system));
  j["config"] = run_config_to_json(config);
  j["plan"] = r.has_plan ? plan_to_json(r.plan, r.catalog, system) : Json(nullptr);
  return j;
}

Json uncertainty_to_json(const PlanningSystem& system, const SlottedLoadModel& loads,
                         const UncertaintyModel& u) {
  Json j;
  j["slot_durations"] = loads.slot_durations;
  j["budget"] = u.ldcu.budget;
  j["buses"] = Json::array();
  for (int b = 0; b < loads.num_buses(); ++b) {
    Json years = Json::array();
    for (int y = 0; y < loads.num_years(); ++y) {
      Json level = Json::array(), half = Json::array(), lo = Json::array(), hi = Json::array();
      for (int h = 0; h < loads.num_slots(); ++h) {
        level.push_back(loads.levels(b, y, h));
        half.push_back(u.ldcu.halfwidth(b, y, h));
        lo.push_back(u.hlru.lower(b, y, h));
        hi.push_back(u.hlru.upper(b, y, h));
      }
      years.push_back({{"year", y}, {"level", level}, {"ldcu_halfwidth", half}, {"hlru_lower", lo}, {"hlru_upper", hi}});
    }
    j["buses"].push_back({{"id", system.buses[b].id}, {"years", years}});
  }
  return j;
}

Json certificate_to_json(const PlanCertificate& cert) {
  auto one = [](const OracleVerdict& v) {
    return Json{{"evaluated", v.evaluated}, {"violation", v.violation}, {"points", v.points}};
  };
  return {{"spd1", one(cert.spd1)}, {"spd2", one(cert.spd2)}, {"spr", one(cert.spr)}};
}

Json metrics_to_json(const SimulationMetrics& m) {
  Json j;
  j["etc"] = m.etc;
  j["eoc"] = m.eoc;
  j["elc"] = m.elc;
  j["hlc"] = m.hlc;
  j["eens_mwh_per_year"] = m.eens;
  j["lolh_hours_per_year"] = m.lolh;
  j["max_shed_mw"] = m.max_shed_mw;
  j["scenarios"] = m.scenarios.size();
  j["years"] = Json::array();
  for (const YearMetrics& y : m.years) {
    j["years"].push_back({{"year", y.year}, {"eoc", y.eoc}, {"elc", y.elc}, {"eens", y.eens}, {"lolh", y.lolh}});
  }
  return j;
}

std::string scenarios_csv(const SimulationMetrics& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "scenario,operation_cost,shedding_cost,shed_mwh_per_year,lolh_per_year,spill_mwh_per_year\n";
  for (const ScenarioResult& s : m.scenarios) {
    os << s.index << ',' << s.operation_cost << ',' << s.shedding_cost << ',' << s.shed_energy << ','
       << s.loss_of_load_hours << ',' << s.spill_energy << '\n';
  }
  return os.str();
}

void write_plot_csvs(const SimulationMetrics& m, int base_year, const std::string& dir) {
  std::ostringstream cost, lolh, eens;
  cost << std::setprecision(12) << "year,eoc,elc\n";
  lolh << std::setprecision(12) << "year,lolh\n";
  eens << std::setprecision(12) << "year,eens\n";
  for (const YearMetrics& y : m.years) {
    const int year = base_year + y.year;
    cost << year << ',' << y.eoc << ',' << y.elc << '\n';
    lolh << year << ',' << y.lolh << '\n';
    eens << year << ',' << y.eens << '\n';
  }
  fs::create_directories(dir);
  write_file((fs::path(dir) / "eoc_elc.csv").string(), cost.str());
  write_file((fs::path(dir) / "lolh.csv").string(), lolh.str());
  write_file((fs::path(dir) / "eens.csv").string(), eens.str());
}

std::string format_cost_table(const CostBreakdown& c) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "cost (M$)            \n";
  os << "  lines            " << std::setw(10) << c.line_invest << '\n';
  os << "  FACTS            " << std::setw(10) << c.facts_invest << '\n';
  os << "  generators       " << std::setw(10) << c.gen_invest << '\n';
  os << "  investment       " << std::setw(10) << c.investment() << '\n';
  os << "  operation        " << std::setw(10) << c.base_operation << '\n';
  os << "  total            " << std::setw(10) << c.total << '\n';
  return os.str();
}

std::string format_build_schedule(const Plan& plan, const AssetCatalog& catalog, const PlanningSystem& system) {
  std::ostringstream os;
  const int y0 = system.horizon.base_year;
  for (int y = 0; y < plan.num_years; ++y) {
    std::vector<std::string> items;
    for (std::size_t i = 0; i < catalog.lines.size(); ++i) {
      if (catalog.lines[i].existing) continue;
      if (plan.line_built[i][y] && (y == 0 || !plan.line_built[i][y - 1])) {
        items.push_back("line " + system.corridors[catalog.lines[i].corridor].id);
      }
    }
    for (std::size_t i = 0; i < catalog.facts.size(); ++i) {
      if (plan.facts_built[i][y] && (y == 0 || !plan.facts_built[i][y - 1])) {
        items.push_back("FACTS " + system.facts_types[catalog.facts[i].type].id + " on " +
                        system.corridors[catalog.facts[i].corridor].id);
      }
    }
    for (std::size_t i = 0; i < catalog.new_gens.size(); ++i) {
      if (plan.gen_built[i][y] && (y == 0 || !plan.gen_built[i][y - 1])) {
        items.push_back("gen " + system.generator_types[catalog.new_gens[i].type].id + " at bus " +
                        system.buses[catalog.new_gens[i].bus].id);
      }
    }
    os << "  " << (y0 + y) << ": ";
    if (items.empty()) os << "-";
    for (std::size_t k = 0; k < items.size(); ++k) os << (k ? ", " : "") << items[k];
    os << '\n';
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path);
  out << content;
}

}  // namespace rtep
