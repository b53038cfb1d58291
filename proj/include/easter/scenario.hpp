#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "easter/baselines.hpp"
#include "easter/idm.hpp"
#include "easter/selector.hpp"

namespace easter {

struct LaneTraffic {
  double mean_speed = 10.0;    // m/s
  double density = 0.0;        // vehicles per 100 m
  double mean_headway = 0.0;   // bumper gap, metres
  double accel_noise = 0.0;    // std of the per-tick acceleration noise
};

// Explicitly placed background vehicle; `x` is relative to the ego start.
struct VehicleSpec {
  int lane = 1;
  double x = 0.0;
  double v = 0.0;
  std::optional<double> accel_noise;    // falls back to the lane's noise
  std::optional<double> desired_speed;  // falls back to the lane's mean speed
};

struct EgoSpawn {
  int lane = 2;
  double speed = 15.0;
  double desired_speed = 15.0;
};

// Longitudinal band (relative to the ego start) that random traffic fills.
struct TrafficWindow {
  double start = -60.0;
  double end = 300.0;
};

// Where the planner takes its lattice speed from.
enum class PlanningSpeed {
  Desired,   // the ego's desired speed
  Measured,  // the ego's current speed
};

struct ScenarioConfig {
  std::string name = "scenario";
  int n_lanes = 3;
  double lane_width = 3.5;
  double route_length = 230.0;  // metres the ego must travel
  double road_angle = 0.0;      // radians
  double exit_distance = 1000.0;
  std::vector<LaneTraffic> lanes;
  TrafficWindow traffic_window;
  std::optional<std::vector<VehicleSpec>> vehicles;
  EgoSpawn ego;

  std::uint64_t seed = 1;
  double dt = 0.1;
  double timeout = 300.0;
  double vehicle_length = 4.5;
  double vehicle_width = 1.8;
  double lateral_rate = 1.17;   // m/s
  double sensor_range = 200.0;  // metres either side of the ego

  IdmParams idm;
  MobilParams mobil;
  PlannerConfig planner;
  PlanningSpeed planning_speed = PlanningSpeed::Desired;

  // Planner configuration with the planning speed resolved.
  PlannerConfig effective_planner() const;
  IdmParams ego_idm() const { return idm.with_desired_speed(ego.desired_speed); }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Parses and validates a scenario. Errors are reported as ConfigError with a
// "<source>:<line>: <field>: <message>" prefix when the field can be located.
ScenarioConfig parse_scenario(std::string_view text,
                              std::string_view source = "<memory>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

std::string scenario_to_json(const ScenarioConfig& config);

// JSON pointer -> 1-based line of the value's first character, for every
// value in a syntactically valid JSON document.
std::vector<std::pair<std::string, int>> json_value_lines(std::string_view text);

}  // namespace easter
