#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "easter/error.hpp"
#include "easter/harness.hpp"
#include "easter/scenario.hpp"

using namespace easter;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kScenarios = EASTER_SOURCE_DIR "/scenarios/";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("easter_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("stats") {
  CHECK(stats({}).mean == 0.0);
  const MetricStats one = stats({4.0});
  CHECK(one.mean == 4.0);
  CHECK(one.std == 0.0);
  const MetricStats s = stats({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.std == doctest::Approx(1.2909944487358056));
}

TEST_CASE("run writes its files and is reproducible without timing") {
  const ScenarioConfig c = load_scenario(kScenarios + "random_traffic.json");
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const RunReport r = cmd_run(c, PolicyKind::Easter, 3, a, {false, 1});
  cmd_run(c, PolicyKind::Easter, 3, b, {false, 1});
  for (const char* f : {"easter_seed3.csv", "easter_seed3.json", "report.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  REQUIRE(r.runs.size() == 1);
  const json report = json::parse(slurp(a / "report.json"));
  CHECK(report["schema_version"] == 1);
  CHECK(report["runs"][0]["policy"] == "easter");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("single monte carlo run matches a plain run") {
  const ScenarioConfig c = load_scenario(kScenarios + "random_traffic.json");
  const fs::path dir = scratch("mc1");
  const RunReport r = cmd_montecarlo(c, 1, 9, dir, {false, 1});
  REQUIRE(r.aggregate.size() == 3);
  for (const auto& a : r.aggregate) {
    CHECK(a.runs == 1);
    CHECK(a.travel_time.std == 0.0);
  }
  const MetricsLog log = run(c, PolicyKind::Mobil, 9, {false});
  CHECK(r.aggregate[1].policy == "mobil");
  CHECK(r.aggregate[1].travel_time.mean == log.summary.travel_time);
  CHECK(fs::exists(dir / "aggregate.csv"));
  CHECK(fs::exists(dir / "runs" / "nochange_seed9.csv"));
  fs::remove_all(dir);
}

TEST_CASE("worker count does not change results") {
  const ScenarioConfig c = load_scenario(kScenarios + "random_traffic.json");
  const fs::path one = scratch("mc_j1"), three = scratch("mc_j3");
  cmd_montecarlo(c, 4, 100, one, {false, 1});
  cmd_montecarlo(c, 4, 100, three, {false, 3});
  CHECK(slurp(one / "report.json") == slurp(three / "report.json"));
  CHECK(slurp(one / "aggregate.csv") == slurp(three / "aggregate.csv"));
  fs::remove_all(one);
  fs::remove_all(three);
}

TEST_CASE("argument checks") {
  const ScenarioConfig c = load_scenario(kScenarios + "empty_road.json");
  CHECK_THROWS_AS(cmd_montecarlo(c, 0, 1, scratch("bad"), {}), ConfigError);
  CHECK_THROWS_AS(cmd_montecarlo(c, 1, 1, scratch("bad"), {false, 0}),
                  ConfigError);
}

TEST_CASE("search dump re-sums to the reported totals") {
  const ScenarioConfig c = load_scenario(kScenarios + "scene1.json");
  const json d = json::parse(search_dump(c, c.seed));
  CHECK(d["schema_version"] == 1);
  const json& path = d["path"];
  double g = 0.0;
  for (std::size_t i = 1; i < path["nodes"].size(); ++i) {
    const json& b = path["nodes"][i]["breakdown"];
    const double step = b["control"].get<double>() + b["time"].get<double>() +
                        b["risk_adjacency"].get<double>() +
                        b["risk_uncertainty"].get<double>() +
                        b["switching"].get<double>() +
                        b["goal_distance"].get<double>();
    CHECK(step == doctest::Approx(b["step"].get<double>()).epsilon(1e-12));
    g += step;
  }
  CHECK(std::abs(g - path["g"].get<double>()) <= 1e-9);
  const double h_goal =
      path["nodes"].back()["breakdown"]["heuristic"].get<double>();
  CHECK(std::abs(g + h_goal - path["total_cost"].get<double>()) <= 1e-9);
  CHECK(path["first_transition_lane"] == 1);

  // Every recorded node satisfies f = g + h and points at a real parent.
  const json& nodes = d["nodes"];
  for (const auto& n : nodes) {
    CHECK(std::abs(n["f"].get<double>() - n["g"].get<double>() -
                   n["h"].get<double>()) <= 1e-9);
    if (!n["parent"].is_null()) {
      CHECK(n["parent"].get<std::size_t>() < nodes.size());
    }
  }
  CHECK(d["predictions"].size() == d["lattice"]["n_columns"].get<int>() + 1);
}

TEST_CASE("search dump on an empty road is a straight, uniform path") {
  const ScenarioConfig c = load_scenario(kScenarios + "empty_road.json");
  const json d = json::parse(search_dump(c, 1));
  const json& nodes = d["path"]["nodes"];
  REQUIRE(nodes.size() == 11);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    CHECK(nodes[i]["lane"] == 2);
    CHECK(nodes[i]["breakdown"]["risk_adjacency"] == 0.0);
    CHECK(nodes[i]["breakdown"]["control"].get<double>() ==
          doctest::Approx(nodes[1]["breakdown"]["control"].get<double>()));
    CHECK(nodes[i]["breakdown"]["time"].get<double>() ==
          doctest::Approx(nodes[1]["breakdown"]["time"].get<double>()));
  }
  CHECK(d["path"]["first_transition_lane"] == 2);

  const fs::path out = scratch("dump") / "d.json";
  cmd_search_dump(c, 1, out);
  CHECK(json::parse(slurp(out)) == d);
  fs::remove_all(out.parent_path());
}
