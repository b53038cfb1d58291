#include <doctest.h>

#include <cmath>

#include "easter/error.hpp"
#include "easter/idm.hpp"
#include "easter/sim.hpp"

using namespace easter;

namespace {

const std::string kScenarios = EASTER_SOURCE_DIR "/scenarios/";

ScenarioConfig empty_road() {
  ScenarioConfig c;
  c.lanes = {{8.0, 0.0, 30.0}, {5.0, 0.0, 25.0}, {1.0, 0.0, 20.0}};
  c.vehicles.emplace();
  return c;
}

// Bisection on the follower's acceleration, independent of the closed form.
double settle_gap_by_root(double v, const IdmParams& p) {
  double lo = p.min_gap, hi = 1000.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (idm_accel(v, v, mid, p) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("idm free road") {
  IdmParams p;
  p.desired_speed = 15.0;
  CHECK(idm_accel(15.0, std::nullopt, 0.0, p) == doctest::Approx(0.0));
  CHECK(idm_accel(0.0, std::nullopt, 0.0, p) == doctest::Approx(p.max_accel));
}

TEST_CASE("idm following") {
  IdmParams p;
  p.desired_speed = 15.0;
  const double gap = p.min_gap + 8.0 * p.time_headway;
  CHECK(idm_accel(8.0, 8.0, gap, p) ==
        doctest::Approx(-0.08090864197530867).epsilon(1e-12));
  CHECK(idm_equilibrium_gap(8.0, p) ==
        doctest::Approx(14.603222233253923).epsilon(1e-12));
  CHECK(settle_gap_by_root(8.0, p) ==
        doctest::Approx(idm_equilibrium_gap(8.0, p)).epsilon(1e-9));
  CHECK(idm_accel(10.0, 0.0, 2.0, p) == -p.max_decel);
  CHECK(idm_accel(10.0, 0.0, 0.0, p) == -p.max_decel);
  CHECK(idm_accel(10.0, 0.0, -1.0, p) == -p.max_decel);
  // A much faster leader never shrinks the desired gap below s0.
  CHECK(idm_desired_gap(5.0, 50.0, p) == doctest::Approx(p.min_gap));
}

TEST_CASE("idm parameter validation") {
  IdmParams p;
  CHECK_NOTHROW(p.validate());
  p.exponent = 0.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = IdmParams{};
  p.time_headway = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("following settles at the equilibrium gap") {
  ScenarioConfig c = empty_road();
  c.vehicles = std::vector<VehicleSpec>{{1, 60.0, 8.0, std::nullopt, 8.0},
                                        {1, 20.0, 8.0, std::nullopt, 15.0}};
  c.ego.lane = 3;
  c.timeout = 1000.0;
  Rng rng(1);
  SimState s = spawn_traffic(c, rng);
  for (int i = 0; i < 3000; ++i) s = step(s, 3, c, rng);
  const double gap = s.others[0].s - s.others[1].s - c.vehicle_length;
  IdmParams p = c.idm.with_desired_speed(15.0);
  CHECK(gap == doctest::Approx(idm_equilibrium_gap(8.0, p)).epsilon(1e-3));
}

TEST_CASE("free-flow equilibrium is a fixed point") {
  ScenarioConfig c = empty_road();
  c.vehicles = std::vector<VehicleSpec>{
      {1, 40.0, 8.0}, {3, -40.0, 1.0}};
  Rng rng(1);
  SimState s = spawn_traffic(c, rng);
  for (int i = 0; i < 100; ++i) {
    const SimState n = step(s, 2, c, rng);
    for (std::size_t k = 0; k < s.others.size(); ++k) {
      CHECK(std::abs(n.others[k].v - s.others[k].v) <= 1e-9);
    }
    CHECK(std::abs(n.ego.v - s.ego.v) <= 1e-9);
    s = n;
  }
}

TEST_CASE("one lane change takes lane width over lateral rate") {
  ScenarioConfig c = empty_road();
  Rng rng(1);
  SimState s = spawn_traffic(c, rng);
  int ticks = 0;
  while (s.ego.lat != 0.0 && ticks < 1000) {
    s = step(s, 1, c, rng);
    ++ticks;
  }
  CHECK(ticks * c.dt == doctest::Approx(3.0));
  CHECK(s.ego.lane == 1);
}

TEST_CASE("stationary leader triggers the emergency clamp") {
  ScenarioConfig c = empty_road();
  c.vehicles = std::vector<VehicleSpec>{{2, c.vehicle_length + 2.0, 0.0}};
  c.ego.speed = 10.0;
  Rng rng(1);
  const SimState s = spawn_traffic(c, rng);
  const SimState n = step(s, 2, c, rng);
  CHECK(n.ego.accel == -c.idm.max_decel);
}

TEST_CASE("spawn is deterministic and honours densities") {
  const ScenarioConfig c = load_scenario(kScenarios + "random_traffic.json");
  Rng a(42), b(42);
  const SimState x = spawn_traffic(c, a);
  const SimState y = spawn_traffic(c, b);
  REQUIRE(x.others.size() == y.others.size());
  for (std::size_t i = 0; i < x.others.size(); ++i) {
    CHECK(x.others[i].s == y.others[i].s);
    CHECK(x.others[i].v == y.others[i].v);
  }

  ScenarioConfig empty = c;
  empty.lanes[0].density = 0.0;
  Rng r(1);
  for (const auto& v : spawn_traffic(empty, r).others) CHECK(v.lane != 1);
}

TEST_CASE("lane 3 spawn gaps follow the configured mean") {
  const ScenarioConfig c = load_scenario(kScenarios + "random_traffic.json");
  double total = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const SimState s = spawn_traffic(c, rng);
    double prev = std::nan("");
    for (const auto& v : s.others) {
      if (v.lane != 3) continue;
      if (!std::isnan(prev)) {
        const double gap = v.s - prev - c.vehicle_length;
        CHECK(gap >= c.idm.min_gap);
        total += gap;
        ++count;
      }
      prev = v.s;
    }
  }
  REQUIRE(count > 0);
  const double mean = total / count;
  CHECK(mean >= 16.0);
  CHECK(mean <= 24.0);
}

TEST_CASE("empty road travel time") {
  const ScenarioConfig c = load_scenario(kScenarios + "empty_road.json");
  for (const auto kind :
       {PolicyKind::Easter, PolicyKind::Mobil, PolicyKind::NoChange}) {
    const MetricsLog log = run(c, kind, 1, {false});
    CHECK(log.summary.completed);
    CHECK(log.summary.travel_time == doctest::Approx(230.0 / 15.0).epsilon(1e-9));
    CHECK(log.summary.lane_changes == 0);
    for (const auto& t : log.ticks) CHECK(t.headway == 50.0);
  }
}

TEST_CASE("following a slow leader bounds the travel time") {
  ScenarioConfig c = empty_road();
  c.n_lanes = 1;
  c.lanes.resize(1);
  c.lanes[0].mean_speed = 5.0;
  c.ego = {1, 5.0, 15.0};
  c.vehicles = std::vector<VehicleSpec>{{1, 20.0, 5.0}};
  c.planner.lattice.horizon = 10;
  const MetricsLog log = run(c, PolicyKind::NoChange, 1, {false});
  CHECK(log.summary.completed);
  // The ego can only finish once the leader is a bumper length plus s0 past
  // the route end.
  const double bound = (230.0 + c.vehicle_length + c.idm.min_gap - 20.0) / 5.0;
  CHECK(log.summary.travel_time >= bound);
  CHECK(log.summary.travel_time <= bound + 2.0);
}

TEST_CASE("timeout marks the run incomplete") {
  ScenarioConfig c = empty_road();
  c.timeout = 2.0;
  const MetricsLog log = run(c, PolicyKind::NoChange, 1, {false});
  CHECK_FALSE(log.summary.completed);
  CHECK(log.summary.travel_time == doctest::Approx(2.0));
  CHECK(log.ticks.size() == 20);
}

TEST_CASE("background traffic stays sane") {
  const ScenarioConfig c = load_scenario(kScenarios + "random_traffic.json");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MetricsLog log = run(c, PolicyKind::Easter, seed, {false});
    CHECK(log.summary.min_background_gap > 0.0);
    CHECK(log.summary.max_speed_ratio <= 1.5);
    for (std::size_t i = 1; i < log.ticks.size(); ++i) {
      const double dx = log.ticks[i].x - log.ticks[i - 1].x;
      CHECK(dx >= 0.0);
      CHECK(dx <= log.ticks[i].v * c.dt + 1e-9);
      CHECK(log.ticks[i].t > log.ticks[i - 1].t);
    }
  }
}

TEST_CASE("world snapshot uses absolute coordinates") {
  ScenarioConfig c = empty_road();
  c.road_angle = 0.4;
  c.vehicles = std::vector<VehicleSpec>{{1, 30.0, 8.0}};
  Rng rng(1);
  const SimState s = spawn_traffic(c, rng);
  const WorldState w = to_world(s, c);
  const ProjectedScene p = project_scene(w, std::nullopt);
  CHECK(p.ego_lane == 2);
  REQUIRE(p.others.size() == 1);
  CHECK(p.others[0].x == doctest::Approx(30.0));
  CHECK(p.others[0].lat_lanes == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("csv and summary formats") {
  const ScenarioConfig c = load_scenario(kScenarios + "empty_road.json");
  const MetricsLog log = run(c, PolicyKind::NoChange, 1, {false});
  std::ostringstream out;
  write_csv(log, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,x,y_lat,lane,v,headway,decision_lane,plan_ms\n", 0) == 0);
  const std::string json = summary_json(log.summary);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"plan_ms_p99\"") != std::string::npos);
}
