/* C interface to the lane-selection engine and its simulator. */
#ifndef EASTER_EASTER_H
#define EASTER_EASTER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EASTER_API __declspec(dllexport)
#else
#define EASTER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum easter_status {
  EASTER_OK = 0,
  EASTER_ERR_ARGUMENT = 1, /* null pointer, bad enum, broken precondition */
  EASTER_ERR_CONFIG = 2,   /* scenario or planner configuration rejected */
  EASTER_ERR_INTERNAL = 3, /* invariant violation inside the engine */
  EASTER_ERR_IO = 4        /* file could not be read or written */
} easter_status;

typedef struct easter_scenario easter_scenario;
typedef struct easter_report easter_report;
typedef struct easter_selector easter_selector;

/* Flags for easter_run / easter_montecarlo. */
#define EASTER_FLAG_NO_TIMING 1u /* record plan_ms as 0 for reproducible files */

EASTER_API const char* easter_version(void);
/* Message of the last failure on the calling thread; "" if none. */
EASTER_API const char* easter_last_error(void);
/* Releases strings returned through char** out-parameters. */
EASTER_API void easter_free(void* p);

EASTER_API easter_status easter_scenario_load(const char* path,
                                              easter_scenario** out);
EASTER_API easter_status easter_scenario_parse(const char* json,
                                               easter_scenario** out);
EASTER_API void easter_scenario_free(easter_scenario* scenario);
EASTER_API easter_status easter_scenario_to_json(const easter_scenario* scenario,
                                                 char** out);
EASTER_API uint64_t easter_scenario_seed(const easter_scenario* scenario);

/* policy: "easter", "mobil" or "nochange". */
EASTER_API easter_status easter_run(const easter_scenario* scenario,
                                    const char* policy, uint64_t seed,
                                    unsigned flags, const char* out_dir,
                                    easter_report** out);
EASTER_API easter_status easter_montecarlo(const easter_scenario* scenario,
                                           int n_runs, uint64_t base_seed,
                                           int jobs, unsigned flags,
                                           const char* out_dir,
                                           easter_report** out);
EASTER_API easter_status easter_search_dump(const easter_scenario* scenario,
                                            uint64_t seed,
                                            const char* out_path);
/* Valid until the report is freed. */
EASTER_API const char* easter_report_json(const easter_report* report);
EASTER_API void easter_report_free(easter_report* report);

typedef struct easter_vehicle {
  int id;
  double x, y;    /* absolute position, m */
  double v;       /* m/s */
  double heading; /* rad, relative to the road */
  double accel;   /* m/s^2 */
} easter_vehicle;

typedef struct easter_world {
  easter_vehicle ego;
  const easter_vehicle* others;
  size_t n_others;
  const double* lane_offsets; /* rotated-frame lateral offsets, leftmost first */
  size_t n_lanes;
  double road_angle;
  double goal_x, goal_y;
  double time_now;
} easter_world;

enum {
  EASTER_TIME_RELATIVE_SPEED = 0,
  EASTER_TIME_SPEED_DEFICIT = 1,
  EASTER_FRONT_AHEAD_OF_NODE = 0,
  EASTER_FRONT_LANE_LEADER = 1,
  EASTER_SEARCH_TIME_EXPANDED = 0,
  EASTER_SEARCH_LATTICE = 1
};

typedef struct easter_planner_config {
  double lambda_lng, lambda_lat, lambda_time, lambda_adj, lambda_uncert,
      lambda_switch, lambda_goal_scale;
  double d_floor, d_clamp, detection_range;
  int additional_time_rule;
  int front_vehicle_rule;
  int search_mode;
  int horizon;
  double step_time, speed_floor;
  double planning_speed; /* < 0: use the ego's measured speed */
  size_t history_capacity;
} easter_planner_config;

typedef struct easter_decision {
  int current_lane;
  int target_lane;
  double target_lat;
  double delta;
  double total_cost;
  double planning_time; /* s */
  size_t expansions;
} easter_decision;

EASTER_API void easter_planner_config_default(easter_planner_config* config);
EASTER_API easter_status easter_selector_create(
    const easter_planner_config* config, easter_selector** out);
EASTER_API easter_status easter_selector_select(easter_selector* selector,
                                                const easter_world* world,
                                                easter_decision* out);
EASTER_API void easter_selector_free(easter_selector* selector);

#ifdef __cplusplus
}
#endif

#endif
