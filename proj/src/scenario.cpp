#include "easter/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "easter/error.hpp"

namespace easter {

namespace {

using nlohmann::json;

std::string pointer_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string join(const std::string& ptr, std::string_view key) {
  return ptr + "/" + pointer_token(key);
}

std::string join(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

const char* type_name(const json& j) { return j.type_name(); }

void expect_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) {
    throw ConfigError(std::string("expected an object, got ") + type_name(j),
                      ptr);
  }
}

void check_keys(const json& obj, const std::string& ptr,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown field", join(ptr, key));
    }
  }
}

void read(const json& obj, const std::string& ptr, std::string_view key,
          double& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) {
    throw ConfigError(std::string("expected a number, got ") + type_name(*it),
                      join(ptr, key));
  }
  out = it->get<double>();
}

void read(const json& obj, const std::string& ptr, std::string_view key,
          int& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_integer()) {
    throw ConfigError(std::string("expected an integer, got ") + type_name(*it),
                      join(ptr, key));
  }
  const auto v = it->get<std::int64_t>();
  if (v < -1000000 || v > 1000000) {
    throw ConfigError("integer out of range", join(ptr, key));
  }
  out = static_cast<int>(v);
}

void read(const json& obj, const std::string& ptr, std::string_view key,
          std::uint64_t& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_unsigned()) {
    throw ConfigError("expected a non-negative integer", join(ptr, key));
  }
  out = it->get<std::uint64_t>();
}

void read(const json& obj, const std::string& ptr, std::string_view key,
          std::string& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_string()) {
    throw ConfigError(std::string("expected a string, got ") + type_name(*it),
                      join(ptr, key));
  }
  out = it->get<std::string>();
}

template <typename Enum>
void read_enum(const json& obj, const std::string& ptr, std::string_view key,
               Enum& out,
               std::initializer_list<std::pair<std::string_view, Enum>> names) {
  std::string text;
  read(obj, ptr, key, text);
  if (text.empty()) return;
  std::string options;
  for (const auto& [name, value] : names) {
    if (name == text) {
      out = value;
      return;
    }
    options += options.empty() ? "" : ", ";
    options += name;
  }
  throw ConfigError("unknown value '" + text + "' (expected one of: " +
                        options + ")",
                    join(ptr, key));
}

constexpr std::pair<std::string_view, AdditionalTimeRule> kTimeRules[] = {
    {"relative_speed", AdditionalTimeRule::RelativeSpeed},
    {"speed_deficit", AdditionalTimeRule::SpeedDeficit}};
constexpr std::pair<std::string_view, FrontVehicleRule> kFrontRules[] = {
    {"ahead_of_node", FrontVehicleRule::AheadOfNode},
    {"lane_leader", FrontVehicleRule::LaneLeader}};
constexpr std::pair<std::string_view, SearchMode> kModes[] = {
    {"time_expanded", SearchMode::TimeExpanded},
    {"lattice", SearchMode::Lattice}};
constexpr std::pair<std::string_view, PlanningSpeed> kSpeeds[] = {
    {"desired", PlanningSpeed::Desired},
    {"measured", PlanningSpeed::Measured}};

template <typename Enum, std::size_t N>
std::string_view enum_name(const std::pair<std::string_view, Enum> (&names)[N],
                           Enum value) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

void parse_lane(const json& j, const std::string& ptr, LaneTraffic& lane) {
  expect_object(j, ptr);
  check_keys(j, ptr, {"mean_speed", "density", "mean_headway", "accel_noise"});
  read(j, ptr, "mean_speed", lane.mean_speed);
  read(j, ptr, "density", lane.density);
  read(j, ptr, "mean_headway", lane.mean_headway);
  read(j, ptr, "accel_noise", lane.accel_noise);
}

void parse_vehicle(const json& j, const std::string& ptr, VehicleSpec& v) {
  expect_object(j, ptr);
  check_keys(j, ptr, {"lane", "x", "v", "accel_noise", "desired_speed"});
  for (const char* required : {"lane", "x", "v"}) {
    if (!j.contains(required)) {
      throw ConfigError(std::string("missing field '") + required + "'", ptr);
    }
  }
  read(j, ptr, "lane", v.lane);
  read(j, ptr, "x", v.x);
  read(j, ptr, "v", v.v);
  if (j.contains("accel_noise")) {
    double noise = 0.0;
    read(j, ptr, "accel_noise", noise);
    v.accel_noise = noise;
  }
  if (j.contains("desired_speed")) {
    double v0 = 0.0;
    read(j, ptr, "desired_speed", v0);
    v.desired_speed = v0;
  }
}

void parse_weights(const json& j, const std::string& ptr, CostWeights& w) {
  expect_object(j, ptr);
  check_keys(j, ptr,
             {"lambda_lng", "lambda_lat", "lambda_time", "lambda_adj",
              "lambda_uncert", "lambda_switch", "lambda_goal_scale", "d_floor",
              "d_clamp", "detection_range", "additional_time",
              "front_vehicle"});
  read(j, ptr, "lambda_lng", w.lambda_lng);
  read(j, ptr, "lambda_lat", w.lambda_lat);
  read(j, ptr, "lambda_time", w.lambda_time);
  read(j, ptr, "lambda_adj", w.lambda_adj);
  read(j, ptr, "lambda_uncert", w.lambda_uncert);
  read(j, ptr, "lambda_switch", w.lambda_switch);
  read(j, ptr, "lambda_goal_scale", w.lambda_goal_scale);
  read(j, ptr, "d_floor", w.d_floor);
  read(j, ptr, "d_clamp", w.d_clamp);
  read(j, ptr, "detection_range", w.detection_range);
  read_enum(j, ptr, "additional_time", w.additional_time,
            {kTimeRules[0], kTimeRules[1]});
  read_enum(j, ptr, "front_vehicle", w.front_vehicle,
            {kFrontRules[0], kFrontRules[1]});
}

ScenarioConfig from_json(const json& root) {
  ScenarioConfig c;
  const std::string top;
  expect_object(root, top);
  check_keys(root, top,
             {"name", "n_lanes", "lane_width", "route_length", "road_angle",
              "exit_distance", "lanes", "traffic_window", "vehicles", "ego",
              "seed", "dt", "timeout", "vehicle_length", "vehicle_width",
              "lateral_rate", "sensor_range", "idm", "mobil", "weights",
              "planner"});
  for (const char* required : {"n_lanes", "lanes"}) {
    if (!root.contains(required)) {
      throw ConfigError(std::string("missing field '") + required + "'", top);
    }
  }
  read(root, top, "name", c.name);
  read(root, top, "n_lanes", c.n_lanes);
  read(root, top, "lane_width", c.lane_width);
  read(root, top, "route_length", c.route_length);
  read(root, top, "road_angle", c.road_angle);
  read(root, top, "exit_distance", c.exit_distance);
  read(root, top, "seed", c.seed);
  read(root, top, "dt", c.dt);
  read(root, top, "timeout", c.timeout);
  read(root, top, "vehicle_length", c.vehicle_length);
  read(root, top, "vehicle_width", c.vehicle_width);
  read(root, top, "lateral_rate", c.lateral_rate);
  read(root, top, "sensor_range", c.sensor_range);

  const json& lanes = root.at("lanes");
  if (!lanes.is_array()) throw ConfigError("expected an array", "/lanes");
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    parse_lane(lanes[i], join("/lanes", i), c.lanes.emplace_back());
  }

  if (const auto it = root.find("traffic_window"); it != root.end()) {
    const std::string ptr = "/traffic_window";
    expect_object(*it, ptr);
    check_keys(*it, ptr, {"start", "end"});
    read(*it, ptr, "start", c.traffic_window.start);
    read(*it, ptr, "end", c.traffic_window.end);
  }
  if (const auto it = root.find("vehicles"); it != root.end()) {
    if (!it->is_array()) throw ConfigError("expected an array", "/vehicles");
    auto& list = c.vehicles.emplace();
    for (std::size_t i = 0; i < it->size(); ++i) {
      parse_vehicle((*it)[i], join("/vehicles", i), list.emplace_back());
    }
  }
  if (const auto it = root.find("ego"); it != root.end()) {
    const std::string ptr = "/ego";
    expect_object(*it, ptr);
    check_keys(*it, ptr, {"lane", "speed", "desired_speed"});
    read(*it, ptr, "lane", c.ego.lane);
    read(*it, ptr, "speed", c.ego.speed);
    read(*it, ptr, "desired_speed", c.ego.desired_speed);
  }
  if (const auto it = root.find("idm"); it != root.end()) {
    const std::string ptr = "/idm";
    expect_object(*it, ptr);
    check_keys(*it, ptr,
               {"max_accel", "comfortable_decel", "time_headway", "min_gap",
                "exponent", "max_decel"});
    read(*it, ptr, "max_accel", c.idm.max_accel);
    read(*it, ptr, "comfortable_decel", c.idm.comfortable_decel);
    read(*it, ptr, "time_headway", c.idm.time_headway);
    read(*it, ptr, "min_gap", c.idm.min_gap);
    read(*it, ptr, "exponent", c.idm.exponent);
    read(*it, ptr, "max_decel", c.idm.max_decel);
  }
  if (const auto it = root.find("mobil"); it != root.end()) {
    const std::string ptr = "/mobil";
    expect_object(*it, ptr);
    check_keys(*it, ptr, {"politeness", "accel_threshold", "safe_decel"});
    read(*it, ptr, "politeness", c.mobil.politeness);
    read(*it, ptr, "accel_threshold", c.mobil.accel_threshold);
    read(*it, ptr, "safe_decel", c.mobil.safe_decel);
  }
  if (const auto it = root.find("weights"); it != root.end()) {
    parse_weights(*it, "/weights", c.planner.weights);
  }
  if (const auto it = root.find("planner"); it != root.end()) {
    const std::string ptr = "/planner";
    expect_object(*it, ptr);
    check_keys(*it, ptr,
               {"horizon", "step_time", "speed_floor", "search_mode",
                "history_capacity", "planning_speed"});
    read(*it, ptr, "horizon", c.planner.lattice.horizon);
    read(*it, ptr, "step_time", c.planner.lattice.step_time);
    read(*it, ptr, "speed_floor", c.planner.lattice.speed_floor);
    read(*it, ptr, "history_capacity", c.planner.history_capacity);
    read_enum(*it, ptr, "search_mode", c.planner.search.mode,
              {kModes[0], kModes[1]});
    read_enum(*it, ptr, "planning_speed", c.planning_speed,
              {kSpeeds[0], kSpeeds[1]});
  }
  return c;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(message, field);
}

// Re-throws a nested validation failure under `field`.
template <typename F>
void validate_section(const std::string& field, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    throw ConfigError(e.message(), e.field().empty() ? field : e.field());
  }
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

class LineScanner {
 public:
  explicit LineScanner(std::string_view text) : s_(text) {}

  std::vector<std::pair<std::string, int>> run() {
    value("");
    return std::move(out_);
  }

 private:
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      if (s_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  std::string string() {
    std::string out;
    ++i_;  // opening quote
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
        ++i_;
        switch (s_[i_]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'u': {
            // Keys are decoded only as far as pointers need; \u escapes are
            // decoded through the JSON library.
            const auto hex = s_.substr(i_ - 1, 6);
            out += json::parse("\"" + std::string(hex) + "\"").get<std::string>();
            i_ += 4;
            break;
          }
          default: out += s_[i_];
        }
      } else {
        out += s_[i_];
      }
      ++i_;
    }
    ++i_;  // closing quote
    return out;
  }

  void value(const std::string& ptr) {
    skip_ws();
    if (i_ >= s_.size()) return;
    out_.emplace_back(ptr, line_);
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      if (eat('}')) return;
      do {
        skip_ws();
        const std::string key = string();
        eat(':');
        value(join(ptr, key));
      } while (eat(','));
      eat('}');
    } else if (c == '[') {
      ++i_;
      if (eat(']')) return;
      std::size_t index = 0;
      do {
        value(join(ptr, index++));
      } while (eat(','));
      eat(']');
    } else if (c == '"') {
      string();
    } else {
      while (i_ < s_.size() && std::string_view(",}] \t\r\n").find(s_[i_]) ==
                                   std::string_view::npos) {
        ++i_;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  std::vector<std::pair<std::string, int>> out_;
};

std::string located(std::string_view source, std::string_view text,
                    const ConfigError& e) {
  const auto lines = json_value_lines(text);
  // Walk up the pointer until some prefix has a known line.
  std::string ptr = e.field();
  while (true) {
    for (const auto& [p, line] : lines) {
      if (p == ptr) {
        std::ostringstream out;
        out << source << ":" << line << ": "
            << (e.field().empty() ? "(root)" : e.field()) << ": "
            << e.message();
        return out.str();
      }
    }
    if (ptr.empty()) break;
    ptr.erase(ptr.rfind('/'));
  }
  return std::string(source) + ": " + e.what();
}

}  // namespace

std::vector<std::pair<std::string, int>> json_value_lines(
    std::string_view text) {
  return LineScanner(text).run();
}

PlannerConfig ScenarioConfig::effective_planner() const {
  PlannerConfig p = planner;
  if (planning_speed == PlanningSpeed::Desired) {
    p.planning_speed = ego.desired_speed;
  } else {
    p.planning_speed.reset();
  }
  return p;
}

void ScenarioConfig::validate() const {
  require(n_lanes >= 1, "/n_lanes", "must be >= 1");
  require(lane_width > 0.0 && std::isfinite(lane_width), "/lane_width",
          "must be positive");
  require(route_length > 0.0 && std::isfinite(route_length), "/route_length",
          "must be positive");
  require(std::isfinite(road_angle), "/road_angle", "must be finite");
  require(exit_distance > 0.0 && std::isfinite(exit_distance),
          "/exit_distance", "must be positive");
  require(dt > 0.0 && std::isfinite(dt), "/dt", "must be positive");
  require(timeout >= dt && std::isfinite(timeout), "/timeout",
          "must be finite and at least one tick");
  require(vehicle_length > 0.0, "/vehicle_length", "must be positive");
  require(vehicle_width > 0.0 && vehicle_width <= lane_width,
          "/vehicle_width", "must lie in (0, lane_width]");
  require(lateral_rate > 0.0, "/lateral_rate", "must be positive");
  require(sensor_range > 0.0, "/sensor_range", "must be positive");

  validate_section("/idm", [&] { idm.validate(); });
  validate_section("/mobil", [&] { mobil.validate(); });
  validate_section("/weights", [&] { planner.weights.validate(); });
  validate_section("/planner", [&] { planner.validate(); });
  require(planner.lattice.horizon >= n_lanes - 1, "/planner/horizon",
          "must be >= n_lanes - 1 so that every lane is reachable");

  require(ego.lane >= 1 && ego.lane <= n_lanes, "/ego/lane",
          "must lie in [1, n_lanes]");
  require(ego.speed >= 0.0 && std::isfinite(ego.speed), "/ego/speed",
          "must be finite and >= 0");
  require(ego.desired_speed > 0.0 && std::isfinite(ego.desired_speed),
          "/ego/desired_speed", "must be positive");

  require(static_cast<int>(lanes.size()) == n_lanes, "/lanes",
          "expected one entry per lane (" + std::to_string(n_lanes) + ")");
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const auto& l = lanes[i];
    const std::string ptr = join("/lanes", i);
    require(l.mean_speed > 0.0 && std::isfinite(l.mean_speed),
            ptr + "/mean_speed", "must be positive");
    require(l.density >= 0.0 && std::isfinite(l.density), ptr + "/density",
            "must be finite and >= 0");
    require(l.accel_noise >= 0.0 && std::isfinite(l.accel_noise),
            ptr + "/accel_noise", "must be finite and >= 0");
    if (l.density > 0.0) {
      require(l.mean_headway > idm.min_gap, ptr + "/mean_headway",
              "must exceed the IDM minimum gap");
      const double implied = 100.0 / l.density - vehicle_length;
      require(std::abs(implied - l.mean_headway) <= 0.2 * l.mean_headway,
              ptr + "/mean_headway",
              "inconsistent with density: 100/density - vehicle_length = " +
                  std::to_string(implied) + " m");
    }
  }
  require(traffic_window.end > traffic_window.start, "/traffic_window",
          "end must be greater than start");

  if (vehicles) {
    for (std::size_t i = 0; i < vehicles->size(); ++i) {
      const auto& v = (*vehicles)[i];
      const std::string ptr = join("/vehicles", i);
      require(v.lane >= 1 && v.lane <= n_lanes, ptr + "/lane",
              "must lie in [1, n_lanes]");
      require(std::isfinite(v.x), ptr + "/x", "must be finite");
      require(v.v >= 0.0 && std::isfinite(v.v), ptr + "/v",
              "must be finite and >= 0");
      require(!v.accel_noise || *v.accel_noise >= 0.0, ptr + "/accel_noise",
              "must be >= 0");
      require(!v.desired_speed || *v.desired_speed > 0.0,
              ptr + "/desired_speed", "must be positive");
      require(!(v.lane == ego.lane && std::abs(v.x) < vehicle_length), ptr,
              "overlaps the ego");
      for (std::size_t k = 0; k < i; ++k) {
        const auto& u = (*vehicles)[k];
        require(!(u.lane == v.lane && std::abs(u.x - v.x) < vehicle_length),
                ptr, "overlaps vehicle " + std::to_string(k));
      }
    }
  }
}

ScenarioConfig parse_scenario(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)
        << ": syntax error: " << e.what();
    throw ConfigError(msg.str());
  }
  try {
    ScenarioConfig c = from_json(root);
    c.validate();
    return c;
  } catch (const ConfigError& e) {
    throw ConfigError(located(source, text, e));
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["n_lanes"] = c.n_lanes;
  j["lane_width"] = c.lane_width;
  j["route_length"] = c.route_length;
  j["road_angle"] = c.road_angle;
  j["exit_distance"] = c.exit_distance;
  j["lanes"] = json::array();
  for (const auto& l : c.lanes) {
    j["lanes"].push_back({{"mean_speed", l.mean_speed},
                          {"density", l.density},
                          {"mean_headway", l.mean_headway},
                          {"accel_noise", l.accel_noise}});
  }
  j["traffic_window"] = {{"start", c.traffic_window.start},
                         {"end", c.traffic_window.end}};
  if (c.vehicles) {
    j["vehicles"] = json::array();
    for (const auto& v : *c.vehicles) {
      json e = {{"lane", v.lane}, {"x", v.x}, {"v", v.v}};
      if (v.accel_noise) e["accel_noise"] = *v.accel_noise;
      if (v.desired_speed) e["desired_speed"] = *v.desired_speed;
      j["vehicles"].push_back(e);
    }
  }
  j["ego"] = {{"lane", c.ego.lane},
              {"speed", c.ego.speed},
              {"desired_speed", c.ego.desired_speed}};
  j["seed"] = c.seed;
  j["dt"] = c.dt;
  j["timeout"] = c.timeout;
  j["vehicle_length"] = c.vehicle_length;
  j["vehicle_width"] = c.vehicle_width;
  j["lateral_rate"] = c.lateral_rate;
  j["sensor_range"] = c.sensor_range;
  j["idm"] = {{"max_accel", c.idm.max_accel},
              {"comfortable_decel", c.idm.comfortable_decel},
              {"time_headway", c.idm.time_headway},
              {"min_gap", c.idm.min_gap},
              {"exponent", c.idm.exponent},
              {"max_decel", c.idm.max_decel}};
  j["mobil"] = {{"politeness", c.mobil.politeness},
                {"accel_threshold", c.mobil.accel_threshold},
                {"safe_decel", c.mobil.safe_decel}};
  const auto& w = c.planner.weights;
  j["weights"] = {{"lambda_lng", w.lambda_lng},
                  {"lambda_lat", w.lambda_lat},
                  {"lambda_time", w.lambda_time},
                  {"lambda_adj", w.lambda_adj},
                  {"lambda_uncert", w.lambda_uncert},
                  {"lambda_switch", w.lambda_switch},
                  {"lambda_goal_scale", w.lambda_goal_scale},
                  {"d_floor", w.d_floor},
                  {"d_clamp", w.d_clamp},
                  {"detection_range", w.detection_range},
                  {"additional_time", enum_name(kTimeRules, w.additional_time)},
                  {"front_vehicle", enum_name(kFrontRules, w.front_vehicle)}};
  const auto& p = c.planner;
  j["planner"] = {{"horizon", p.lattice.horizon},
                  {"step_time", p.lattice.step_time},
                  {"speed_floor", p.lattice.speed_floor},
                  {"search_mode", enum_name(kModes, p.search.mode)},
                  {"history_capacity", p.history_capacity},
                  {"planning_speed", enum_name(kSpeeds, c.planning_speed)}};
  return j.dump(2) + "\n";
}

}  // namespace easter
