#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "easter/error.hpp"
#include "easter/frame.hpp"

using namespace easter;

namespace {

WorldState three_lanes() {
  WorldState w;
  w.lanes.centerline_offsets = {0.0, 3.5, 7.0};
  w.goal = {1000.0, -7.0};
  return w;
}

}  // namespace

TEST_CASE("rotate matches its closed form") {
  const Vec2 a = rotate(1.0, 0.0, 0.0);
  CHECK(a.x == doctest::Approx(1.0));
  CHECK(a.y == doctest::Approx(0.0));

  const Vec2 b = rotate(0.0, 1.0, 0.0);
  CHECK(b.x == doctest::Approx(0.0));
  CHECK(b.y == doctest::Approx(-1.0));

  const Vec2 c = rotate(3.0, 4.0, std::numbers::pi / 2);
  CHECK(c.x == doctest::Approx(4.0));
  CHECK(c.y == doctest::Approx(3.0));
}

TEST_CASE("rotate is an involution") {
  for (double psi : {0.0, 0.3, 1.2, -2.5}) {
    const Vec2 r = rotate(12.5, -3.25, psi);
    const Vec2 back = rotate(r.x, r.y, psi);
    CHECK(back.x == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(-3.25).epsilon(1e-12));
  }
}

TEST_CASE("nearest_lane") {
  const std::vector<double> three{0.0, 3.5, 7.0};
  const std::vector<double> two{0.0, 3.5};
  CHECK(nearest_lane(3.3, three) == 2);
  CHECK(nearest_lane(1.75, two) == 1);
  CHECK(nearest_lane(-5.0, three) == 1);
  CHECK(nearest_lane(100.0, three) == 3);
  CHECK_THROWS_AS(nearest_lane(0.0, std::vector<double>{}), ConfigError);
}

TEST_CASE("project_scene shifts and snaps the ego") {
  WorldState w = three_lanes();
  // Rotated (100, 3.3) at psi = 0 is absolute (100, -3.3).
  w.ego = {0, 100.0, -3.3, 15.0, 0.0, 0.0};
  w.others.push_back({7, 130.0, -5.25, 8.0, 0.0, 0.0});
  const ProjectedScene s = project_scene(w, std::nullopt);
  CHECK(s.ego_lane == 2);
  CHECK(s.ego_lat == doctest::Approx(3.5));
  CHECK(s.ego_lat_raw == doctest::Approx(3.3));
  REQUIRE(s.others.size() == 1);
  CHECK(s.others[0].x == doctest::Approx(30.0));
  CHECK(s.others[0].lat_lanes == doctest::Approx(1.5));
  CHECK(s.goal.x == doctest::Approx(900.0));
  CHECK(s.goal.y == doctest::Approx(7.0));
}

TEST_CASE("offset delta is measured against the previous target") {
  WorldState w = three_lanes();
  w.ego = {0, 0.0, -3.5, 10.0, 0.0, 0.0};
  CHECK(project_scene(w, std::nullopt).ego_offset_delta == 0.0);
  CHECK(project_scene(w, 3.5).ego_offset_delta == doctest::Approx(0.0));
  w.ego.y = -1.75;
  CHECK(project_scene(w, 0.0).ego_offset_delta == doctest::Approx(1.75));
}

TEST_CASE("projection does not depend on the road angle") {
  const double psi = std::numbers::pi / 6;
  WorldState flat = three_lanes();
  flat.ego = {0, 40.0, -3.4, 12.0, 0.0, 0.0};
  flat.others.push_back({3, 70.0, -7.1, 5.0, 0.0, 0.0});
  flat.goal = {500.0, -7.0};

  WorldState tilted = flat;
  tilted.road_angle = psi;
  const auto to_abs = [&](double x, double y) {
    // Absolute coordinates whose rotated image is the flat road's (x, -y).
    return rotate(x, -y, psi);
  };
  const Vec2 e = to_abs(40.0, -3.4);
  tilted.ego.x = e.x;
  tilted.ego.y = e.y;
  const Vec2 o = to_abs(70.0, -7.1);
  tilted.others[0].x = o.x;
  tilted.others[0].y = o.y;
  const Vec2 g = to_abs(500.0, -7.0);
  tilted.goal = g;
  tilted.lanes = flat.lanes;

  // At psi = 0 the rotated lateral is -y.
  const ProjectedScene a = project_scene(flat, std::nullopt);
  const ProjectedScene b = project_scene(tilted, std::nullopt);
  CHECK(a.ego_lane == b.ego_lane);
  CHECK(a.others[0].x == doctest::Approx(b.others[0].x));
  CHECK(a.others[0].lat_lanes == doctest::Approx(b.others[0].lat_lanes));
  CHECK(a.goal.x == doctest::Approx(b.goal.x));
}

TEST_CASE("malformed worlds are rejected") {
  WorldState w = three_lanes();
  w.lanes.centerline_offsets = {0.0, 3.5, 3.5};
  CHECK_THROWS_AS(project_scene(w, std::nullopt), ConfigError);

  w = three_lanes();
  w.lanes.centerline_offsets = {0.0, 3.5, 8.0};
  CHECK_THROWS_AS(project_scene(w, std::nullopt), ConfigError);

  w = three_lanes();
  w.lanes.centerline_offsets.clear();
  CHECK_THROWS_AS(project_scene(w, std::nullopt), ConfigError);

  w = three_lanes();
  w.ego.v = -1.0;
  CHECK_THROWS_AS(project_scene(w, std::nullopt), ConfigError);

  w = three_lanes();
  w.others.push_back({1, std::nan(""), 0.0, 1.0, 0.0, 0.0});
  CHECK_THROWS_AS(project_scene(w, std::nullopt), ConfigError);
}

TEST_CASE("single-lane road") {
  WorldState w;
  w.lanes.centerline_offsets = {2.0};
  w.ego = {0, 0.0, -2.0, 5.0, 0.0, 0.0};
  const ProjectedScene s = project_scene(w, std::nullopt);
  CHECK(s.lane_count == 1);
  CHECK(s.ego_lane == 1);
  CHECK(s.lane_width > 0.0);
}
