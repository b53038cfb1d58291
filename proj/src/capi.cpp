#include "easter/easter.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include "easter/error.hpp"
#include "easter/harness.hpp"
#include "easter/scenario.hpp"
#include "easter/selector.hpp"

struct easter_scenario {
  easter::ScenarioConfig config;
};

struct easter_report {
  std::string json;
};

struct easter_selector {
  std::unique_ptr<easter::LaneSelector> selector;
};

namespace {

thread_local std::string g_last_error;

easter_status fail(easter_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
easter_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return EASTER_OK;
  } catch (const easter::ConfigError& e) {
    return fail(EASTER_ERR_CONFIG, e.what());
  } catch (const easter::ContractError& e) {
    return fail(EASTER_ERR_ARGUMENT, e.what());
  } catch (const easter::InvariantError& e) {
    return fail(EASTER_ERR_INTERNAL, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(EASTER_ERR_IO, e.what());
  } catch (const easter::Error& e) {
    return fail(EASTER_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(EASTER_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EASTER_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

easter::PlannerConfig to_planner(const easter_planner_config& c) {
  easter::PlannerConfig p;
  auto& w = p.weights;
  w.lambda_lng = c.lambda_lng;
  w.lambda_lat = c.lambda_lat;
  w.lambda_time = c.lambda_time;
  w.lambda_adj = c.lambda_adj;
  w.lambda_uncert = c.lambda_uncert;
  w.lambda_switch = c.lambda_switch;
  w.lambda_goal_scale = c.lambda_goal_scale;
  w.d_floor = c.d_floor;
  w.d_clamp = c.d_clamp;
  w.detection_range = c.detection_range;
  switch (c.additional_time_rule) {
    case EASTER_TIME_RELATIVE_SPEED:
      w.additional_time = easter::AdditionalTimeRule::RelativeSpeed;
      break;
    case EASTER_TIME_SPEED_DEFICIT:
      w.additional_time = easter::AdditionalTimeRule::SpeedDeficit;
      break;
    default: throw easter::ConfigError("unknown additional_time_rule");
  }
  switch (c.front_vehicle_rule) {
    case EASTER_FRONT_AHEAD_OF_NODE:
      w.front_vehicle = easter::FrontVehicleRule::AheadOfNode;
      break;
    case EASTER_FRONT_LANE_LEADER:
      w.front_vehicle = easter::FrontVehicleRule::LaneLeader;
      break;
    default: throw easter::ConfigError("unknown front_vehicle_rule");
  }
  switch (c.search_mode) {
    case EASTER_SEARCH_TIME_EXPANDED:
      p.search.mode = easter::SearchMode::TimeExpanded;
      break;
    case EASTER_SEARCH_LATTICE:
      p.search.mode = easter::SearchMode::Lattice;
      break;
    default: throw easter::ConfigError("unknown search_mode");
  }
  p.lattice.horizon = c.horizon;
  p.lattice.step_time = c.step_time;
  p.lattice.speed_floor = c.speed_floor;
  if (c.planning_speed >= 0.0) p.planning_speed = c.planning_speed;
  p.history_capacity = c.history_capacity;
  p.validate();
  return p;
}

easter::VehicleState to_vehicle(const easter_vehicle& v) {
  return {v.id, v.x, v.y, v.v, v.heading, v.accel};
}

}  // namespace

extern "C" {

const char* easter_version(void) { return "1.0.0"; }

const char* easter_last_error(void) { return g_last_error.c_str(); }

void easter_free(void* p) { std::free(p); }

easter_status easter_scenario_load(const char* path, easter_scenario** out) {
  if (!path || !out) return fail(EASTER_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<easter_scenario>();
    s->config = easter::load_scenario(path);
    *out = s.release();
  });
}

easter_status easter_scenario_parse(const char* json, easter_scenario** out) {
  if (!json || !out) return fail(EASTER_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<easter_scenario>();
    s->config = easter::parse_scenario(json);
    *out = s.release();
  });
}

void easter_scenario_free(easter_scenario* scenario) { delete scenario; }

easter_status easter_scenario_to_json(const easter_scenario* scenario,
                                      char** out) {
  if (!scenario || !out) return fail(EASTER_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded(
      [&] { *out = dup_string(easter::scenario_to_json(scenario->config)); });
}

uint64_t easter_scenario_seed(const easter_scenario* scenario) {
  return scenario ? scenario->config.seed : 0;
}

easter_status easter_run(const easter_scenario* scenario, const char* policy,
                         uint64_t seed, unsigned flags, const char* out_dir,
                         easter_report** out) {
  if (!scenario || !policy || !out_dir || !out) {
    return fail(EASTER_ERR_ARGUMENT, "null argument");
  }
  *out = nullptr;
  const auto kind = easter::parse_policy(policy);
  if (!kind) {
    return fail(EASTER_ERR_ARGUMENT, std::string("unknown policy '") + policy +
                                         "' (expected easter, mobil or nochange)");
  }
  return guarded([&] {
    easter::HarnessOptions opts;
    opts.timing = (flags & EASTER_FLAG_NO_TIMING) == 0;
    const auto report =
        easter::cmd_run(scenario->config, *kind, seed, out_dir, opts);
    *out = new easter_report{report.to_json()};
  });
}

easter_status easter_montecarlo(const easter_scenario* scenario, int n_runs,
                                uint64_t base_seed, int jobs, unsigned flags,
                                const char* out_dir, easter_report** out) {
  if (!scenario || !out_dir || !out) {
    return fail(EASTER_ERR_ARGUMENT, "null argument");
  }
  *out = nullptr;
  if (n_runs < 1) return fail(EASTER_ERR_ARGUMENT, "runs must be >= 1");
  if (jobs < 1) return fail(EASTER_ERR_ARGUMENT, "jobs must be >= 1");
  return guarded([&] {
    easter::HarnessOptions opts;
    opts.timing = (flags & EASTER_FLAG_NO_TIMING) == 0;
    opts.jobs = jobs;
    const auto report = easter::cmd_montecarlo(scenario->config, n_runs,
                                               base_seed, out_dir, opts);
    *out = new easter_report{report.to_json()};
  });
}

easter_status easter_search_dump(const easter_scenario* scenario, uint64_t seed,
                                 const char* out_path) {
  if (!scenario || !out_path) return fail(EASTER_ERR_ARGUMENT, "null argument");
  return guarded(
      [&] { easter::cmd_search_dump(scenario->config, seed, out_path); });
}

const char* easter_report_json(const easter_report* report) {
  return report ? report->json.c_str() : "";
}

void easter_report_free(easter_report* report) { delete report; }

void easter_planner_config_default(easter_planner_config* config) {
  if (!config) return;
  const easter::PlannerConfig d;
  const auto& w = d.weights;
  config->lambda_lng = w.lambda_lng;
  config->lambda_lat = w.lambda_lat;
  config->lambda_time = w.lambda_time;
  config->lambda_adj = w.lambda_adj;
  config->lambda_uncert = w.lambda_uncert;
  config->lambda_switch = w.lambda_switch;
  config->lambda_goal_scale = w.lambda_goal_scale;
  config->d_floor = w.d_floor;
  config->d_clamp = w.d_clamp;
  config->detection_range = w.detection_range;
  config->additional_time_rule =
      w.additional_time == easter::AdditionalTimeRule::SpeedDeficit
          ? EASTER_TIME_SPEED_DEFICIT
          : EASTER_TIME_RELATIVE_SPEED;
  config->front_vehicle_rule =
      w.front_vehicle == easter::FrontVehicleRule::LaneLeader
          ? EASTER_FRONT_LANE_LEADER
          : EASTER_FRONT_AHEAD_OF_NODE;
  config->search_mode = d.search.mode == easter::SearchMode::Lattice
                            ? EASTER_SEARCH_LATTICE
                            : EASTER_SEARCH_TIME_EXPANDED;
  config->horizon = d.lattice.horizon;
  config->step_time = d.lattice.step_time;
  config->speed_floor = d.lattice.speed_floor;
  config->planning_speed = -1.0;
  config->history_capacity = d.history_capacity;
}

easter_status easter_selector_create(const easter_planner_config* config,
                                     easter_selector** out) {
  if (!config || !out) return fail(EASTER_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<easter_selector>();
    s->selector = std::make_unique<easter::LaneSelector>(to_planner(*config));
    *out = s.release();
  });
}

easter_status easter_selector_select(easter_selector* selector,
                                     const easter_world* world,
                                     easter_decision* out) {
  if (!selector || !world || !out) {
    return fail(EASTER_ERR_ARGUMENT, "null argument");
  }
  if ((world->n_others > 0 && !world->others) ||
      (world->n_lanes > 0 && !world->lane_offsets)) {
    return fail(EASTER_ERR_ARGUMENT, "null array with non-zero length");
  }
  return guarded([&] {
    easter::WorldState w;
    w.ego = to_vehicle(world->ego);
    for (std::size_t i = 0; i < world->n_others; ++i) {
      w.others.push_back(to_vehicle(world->others[i]));
    }
    w.lanes.centerline_offsets.assign(world->lane_offsets,
                                      world->lane_offsets + world->n_lanes);
    w.road_angle = world->road_angle;
    w.goal = {world->goal_x, world->goal_y};
    w.time_now = world->time_now;
    const auto d = selector->selector->select(w);
    out->current_lane = d.current_lane;
    out->target_lane = d.target_lane;
    out->target_lat = d.target_lat;
    out->delta = d.delta;
    out->total_cost = d.path.total_cost;
    out->planning_time = d.planning_time;
    out->expansions = d.path.expansions;
  });
}

void easter_selector_free(easter_selector* selector) { delete selector; }

}  // extern "C"
