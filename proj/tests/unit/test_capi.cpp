#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "easter/easter.h"

namespace fs = std::filesystem;

namespace {

const std::string kScenarios = EASTER_SOURCE_DIR "/scenarios/";

easter_scenario* load(const std::string& name) {
  easter_scenario* s = nullptr;
  REQUIRE(easter_scenario_load((kScenarios + name).c_str(), &s) == EASTER_OK);
  return s;
}

easter_world empty_world(std::vector<double>& lanes) {
  lanes = {0.0, 3.5, 7.0};
  easter_world w{};
  w.ego = {0, 0.0, -3.5, 15.0, 0.0, 0.0};
  w.lane_offsets = lanes.data();
  w.n_lanes = lanes.size();
  w.goal_x = 1e4;
  w.goal_y = -7.0;
  return w;
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::strlen(easter_version()) > 0);
  easter_scenario* s = nullptr;
  CHECK(easter_scenario_load(nullptr, &s) == EASTER_ERR_ARGUMENT);
  CHECK(std::string(easter_last_error()) == "null argument");
  CHECK(easter_scenario_load((kScenarios + "missing.json").c_str(), &s) ==
        EASTER_ERR_IO);
  CHECK(s == nullptr);
  CHECK(easter_scenario_parse("{\"n_lanes\": 0}", &s) == EASTER_ERR_CONFIG);
  CHECK(std::string(easter_last_error()).find("missing field 'lanes'") !=
        std::string::npos);
  CHECK(easter_scenario_parse("{", &s) == EASTER_ERR_CONFIG);
}

TEST_CASE("scenario round trip") {
  easter_scenario* s = load("random_traffic.json");
  CHECK(easter_scenario_seed(s) == 7);
  char* text = nullptr;
  REQUIRE(easter_scenario_to_json(s, &text) == EASTER_OK);
  easter_scenario* t = nullptr;
  CHECK(easter_scenario_parse(text, &t) == EASTER_OK);
  easter_free(text);
  easter_scenario_free(t);
  easter_scenario_free(s);
  easter_scenario_free(nullptr);
}

TEST_CASE("run and monte carlo") {
  easter_scenario* s = load("empty_road.json");
  const fs::path dir = fs::temp_directory_path() / "easter_capi_run";
  fs::remove_all(dir);
  easter_report* r = nullptr;
  REQUIRE(easter_run(s, "nochange", 1, EASTER_FLAG_NO_TIMING,
                     dir.string().c_str(), &r) == EASTER_OK);
  const std::string json = easter_report_json(r);
  CHECK(json.find("\"travel_time\"") != std::string::npos);
  CHECK(fs::exists(dir / "nochange_seed1.csv"));
  easter_report_free(r);

  CHECK(easter_run(s, "greedy", 1, 0, dir.string().c_str(), &r) ==
        EASTER_ERR_ARGUMENT);
  CHECK(easter_montecarlo(s, 0, 1, 1, 0, dir.string().c_str(), &r) ==
        EASTER_ERR_ARGUMENT);
  REQUIRE(easter_montecarlo(s, 2, 1, 2, EASTER_FLAG_NO_TIMING,
                            dir.string().c_str(), &r) == EASTER_OK);
  easter_report_free(r);
  REQUIRE(easter_search_dump(s, 1, (dir / "dump.json").string().c_str()) ==
          EASTER_OK);
  CHECK(fs::exists(dir / "dump.json"));
  easter_scenario_free(s);
  fs::remove_all(dir);
}

TEST_CASE("selector") {
  easter_planner_config cfg;
  easter_planner_config_default(&cfg);
  CHECK(cfg.lambda_lat == 15.0);
  CHECK(cfg.horizon == 10);
  CHECK(cfg.planning_speed < 0.0);
  cfg.planning_speed = 15.0;

  easter_selector* sel = nullptr;
  REQUIRE(easter_selector_create(&cfg, &sel) == EASTER_OK);
  std::vector<double> lanes;
  easter_world w = empty_world(lanes);
  easter_decision d{};
  REQUIRE(easter_selector_select(sel, &w, &d) == EASTER_OK);
  CHECK(d.current_lane == 2);
  CHECK(d.target_lane == 2);
  CHECK(d.expansions > 0);

  // A stopped vehicle just ahead in lane 2 pushes the ego out of it.
  const easter_vehicle blocker{1, 12.0, -3.5, 0.0, 0.0, 0.0};
  w.others = &blocker;
  w.n_others = 1;
  w.time_now = 0.1;
  REQUIRE(easter_selector_select(sel, &w, &d) == EASTER_OK);
  CHECK(d.target_lane != 2);

  w.n_lanes = 0;
  CHECK(easter_selector_select(sel, &w, &d) == EASTER_ERR_CONFIG);
  CHECK(easter_selector_select(sel, nullptr, &d) == EASTER_ERR_ARGUMENT);
  easter_selector_free(sel);

  cfg.lambda_lng = -1.0;
  CHECK(easter_selector_create(&cfg, &sel) == EASTER_ERR_CONFIG);
}
