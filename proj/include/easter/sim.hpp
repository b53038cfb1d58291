#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "easter/frame.hpp"
#include "easter/policy.hpp"
#include "easter/scenario.hpp"

namespace easter {

using Rng = std::mt19937_64;

struct SimVehicle {
  int id = 0;
  int lane = 1;       // background vehicles never leave it
  double s = 0.0;     // along the road from the ego start, metres
  double lat = 0.0;   // from the lane-1 centre, metres
  double v = 0.0;
  double accel = 0.0;  // last applied
  double desired_speed = 0.0;
  double accel_noise = 0.0;
};

struct SimState {
  std::uint64_t tick = 0;
  double clock = 0.0;  // tick * dt
  SimVehicle ego;  // lane is the nearest lane of lat
  int ego_target_lane = 1;
  std::vector<SimVehicle> others;
  bool done = false;
  double finish_time = 0.0;  // interpolated within the final tick
};

// Initial state. Explicit vehicles are used verbatim when the scenario lists
// them; otherwise every lane is filled over the traffic window.
SimState spawn_traffic(const ScenarioConfig& config, Rng& rng);

// Lanes the ego body overlaps laterally.
std::vector<int> ego_lanes(const SimVehicle& ego, const ScenarioConfig& config);

// Whether the ego may start moving into `lane`: no vehicle beside it and
// enough room ahead and behind.
bool lane_clear(const SimState& state, int lane, const ScenarioConfig& config);

// Advances one tick of config.dt. Throws InvariantError if two background
// vehicles in one lane end up overlapping.
SimState step(const SimState& state, int target_lane,
              const ScenarioConfig& config, Rng& rng);

// Snapshot in absolute coordinates as a perception stack would deliver it.
WorldState to_world(const SimState& state, const ScenarioConfig& config);

// Bumper gap to the front vehicle in the ego's current lane, capped at the
// detection range (exactly the range when there is none).
double ego_headway(const SimState& state, const ScenarioConfig& config);

// Smallest bumper gap between same-lane background vehicles (+inf if none).
double min_background_gap(const SimState& state, const ScenarioConfig& config);

struct TickRecord {
  double t = 0.0;
  double x = 0.0;
  double y_lat = 0.0;
  int lane = 1;
  double v = 0.0;
  double headway = 0.0;
  int decision_lane = 1;
  double plan_ms = 0.0;
};

struct RunSummary {
  std::string scenario;
  std::string policy;
  std::uint64_t seed = 0;
  bool completed = false;
  double travel_time = 0.0;
  double mean_headway = 0.0;
  double min_distance = 0.0;  // centre distance to any other vehicle
  double min_background_gap = 0.0;
  int lane_changes = 0;
  double plan_ms_mean = 0.0;
  double plan_ms_p99 = 0.0;
  double plan_ms_max = 0.0;
  std::size_t ticks = 0;
  double max_speed_ratio = 0.0;  // max background v / desired speed
};

struct MetricsLog {
  std::vector<TickRecord> ticks;
  RunSummary summary;
};

inline constexpr int kMetricsSchemaVersion = 1;
inline constexpr const char* kMetricsCsvHeader =
    "t,x,y_lat,lane,v,headway,decision_lane,plan_ms";

struct RunOptions {
  bool timing = true;  // false: plan_ms is recorded as 0
};

MetricsLog run(const ScenarioConfig& config, Policy& policy,
               std::uint64_t seed, const RunOptions& options = {});
MetricsLog run(const ScenarioConfig& config, PolicyKind kind,
               std::uint64_t seed, const RunOptions& options = {});

void write_csv(const MetricsLog& log, std::ostream& out);
std::string summary_json(const RunSummary& summary);

}  // namespace easter
