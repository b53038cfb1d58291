#include <doctest.h>

#include "easter/policy.hpp"
#include "easter/scenario.hpp"
#include "easter/selector.hpp"
#include "easter/sim.hpp"

using namespace easter;

namespace {

const std::string kScenarios = EASTER_SOURCE_DIR "/scenarios/";

WorldState empty_world(double ego_y) {
  WorldState w;
  w.lanes.centerline_offsets = {0.0, 3.5, 7.0};
  w.ego = {0, 0.0, ego_y, 15.0, 0.0, 0.0};
  w.goal = {1e4, -7.0};
  return w;
}

PlannerConfig planner() {
  PlannerConfig p;
  p.planning_speed = 15.0;
  return p;
}

}  // namespace

TEST_CASE("target_from_path") {
  Path p;
  p.nodes = {{0, 2}, {1, 1}, {2, 1}};
  CHECK(target_from_path(p, 2) == 1);
  p.nodes = {{0, 2}, {1, 2}, {2, 2}};
  CHECK(target_from_path(p, 2) == 2);
  p.nodes = {{0, 2}, {1, 3}, {2, 3}};
  CHECK(target_from_path(p, 2) == 3);
  p.nodes = {{0, 2}};
  CHECK(target_from_path(p, 2) == 2);
}

TEST_CASE("empty road keeps the current lane") {
  LaneSelector sel(planner());
  const LaneDecision d = sel.select(empty_world(-3.5));
  CHECK(d.current_lane == 2);
  CHECK(d.target_lane == 2);
  for (const Node n : d.path.nodes) CHECK(n.lane == 2);
  CHECK(sel.state().prev_target_lat == doctest::Approx(3.5));
}

TEST_CASE("a lane change in progress is not abandoned") {
  // Ego 1.6 m into a change from lane 2 to lane 1: it snaps to lane 2, and
  // without the switching term lane 2 would win outright.
  const WorldState w = empty_world(-1.9);
  SelectorState fresh;
  const auto [free, s1] = select_lane(w, fresh, planner(), ConstantVelocityModel{});
  CHECK(free.current_lane == 2);
  CHECK(free.target_lane == 2);

  SelectorState committed;
  committed.prev_target_lat = 0.0;
  const auto [held, s2] =
      select_lane(w, committed, planner(), ConstantVelocityModel{});
  CHECK(held.current_lane == 2);
  CHECK(held.target_lane == 1);
  CHECK(held.delta == doctest::Approx(1.9));
}

TEST_CASE("observations feed histories and beliefs") {
  WorldState w = empty_world(-3.5);
  w.others.push_back({5, 30.0, -3.5, 10.0, 0.0, 0.0});
  LaneSelector sel(planner());
  sel.select(w);
  w.time_now = 0.1;
  w.others[0].x = 31.0;
  w.others[0].v = 10.3;
  sel.select(w);
  REQUIRE(sel.state().beliefs.count(5) == 1);
  const auto& counts = sel.state().beliefs.at(5).counts();
  // 3 m/s^2 lands in the hard-acceleration bin.
  CHECK(counts.back() == doctest::Approx(2.0));
  CHECK(sel.state().history.at(5).size() == 2);

  w.time_now = 0.2;
  w.others.clear();
  sel.select(w);
  CHECK(sel.state().beliefs.empty());
  CHECK(sel.state().history.empty());
}

TEST_CASE("scene 1 goes left") {
  const ScenarioConfig cfg = load_scenario(kScenarios + "scene1.json");
  Rng rng(cfg.seed);
  const SimState s = spawn_traffic(cfg, rng);
  LaneSelector sel(cfg.effective_planner());
  const LaneDecision d = sel.select(to_world(s, cfg));
  CHECK(d.current_lane == 2);
  CHECK(d.target_lane == 1);
}

TEST_CASE("scene 3 crosses to lane 3 over consecutive cycles") {
  const ScenarioConfig cfg = load_scenario(kScenarios + "scene3.json");
  const MetricsLog log = run(cfg, PolicyKind::Easter, cfg.seed, {false});
  std::vector<int> decisions;
  for (const auto& t : log.ticks) {
    if (decisions.empty() || decisions.back() != t.decision_lane) {
      decisions.push_back(t.decision_lane);
    }
  }
  CHECK(decisions == std::vector<int>{2, 3});
  CHECK(log.ticks.back().lane == 3);
}
