#include "easter/frame.hpp"

#include <cmath>
#include <string>

#include "easter/error.hpp"

namespace easter {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double LaneGeometry::width() const {
  if (centerline_offsets.size() < 2) {
    // A single lane carries no spacing information; callers store it
    // explicitly in that case (see WorldState::validate).
    return 0.0;
  }
  return centerline_offsets[1] - centerline_offsets[0];
}

namespace {

bool finite(const VehicleState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.v) &&
         std::isfinite(s.heading) && std::isfinite(s.accel);
}

void check_vehicle(const VehicleState& s, const char* what) {
  if (!finite(s)) {
    throw ConfigError(std::string(what) + " " + std::to_string(s.id) +
                      ": non-finite state");
  }
  if (s.v < 0.0) {
    throw ConfigError(std::string(what) + " " + std::to_string(s.id) +
                      ": negative speed");
  }
}

}  // namespace

void WorldState::validate() const {
  const auto& off = lanes.centerline_offsets;
  if (off.empty()) throw ConfigError("lane geometry: no lanes");
  if (off.size() >= 2) {
    const double w = off[1] - off[0];
    if (!(w > 0.0)) throw ConfigError("lane geometry: offsets must increase");
    for (std::size_t j = 1; j < off.size(); ++j) {
      const double step = off[j] - off[j - 1];
      if (!(step > 0.0)) {
        throw ConfigError("lane geometry: offsets must strictly increase");
      }
      if (std::abs(step - w) > 1e-9 * std::max(1.0, std::abs(w))) {
        throw ConfigError("lane geometry: non-uniform lane spacing");
      }
    }
  }
  for (double o : off) {
    if (!std::isfinite(o)) throw ConfigError("lane geometry: non-finite offset");
  }
  check_vehicle(ego, "ego");
  for (const auto& o : others) check_vehicle(o, "vehicle");
  if (!std::isfinite(road_angle) || !std::isfinite(goal.x) ||
      !std::isfinite(goal.y)) {
    throw ConfigError("world: non-finite road angle or goal");
  }
}

Vec2 rotate(double x, double y, double psi) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  return {x * c + y * s, x * s - y * c};
}

int nearest_lane(double y_r, std::span<const double> lane_offsets) {
  if (lane_offsets.empty()) throw ConfigError("nearest_lane: no lanes");
  int best = 0;
  double best_d = std::abs(lane_offsets[0] - y_r);
  for (std::size_t j = 1; j < lane_offsets.size(); ++j) {
    const double d = std::abs(lane_offsets[j] - y_r);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best + 1;
}

int ProjectedScene::lane_of(double lat_m) const {
  int best = 1;
  double best_d = std::abs(lat_m);
  for (int j = 2; j <= lane_count; ++j) {
    const double d = std::abs(lane_center(j) - lat_m);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

ProjectedScene project_scene(const WorldState& world,
                             std::optional<double> prev_target_lat) {
  world.validate();
  const auto& off = world.lanes.centerline_offsets;

  ProjectedScene scene;
  scene.lane_count = world.lanes.count();
  // A one-lane road has no spacing; any positive width keeps the
  // lane-relative arithmetic well defined.
  scene.lane_width = scene.lane_count > 1 ? world.lanes.width() : 1.0;

  const double psi = world.road_angle;
  const Vec2 ego_r = rotate(world.ego.x, world.ego.y, psi);
  scene.origin_x = ego_r.x;
  scene.lane1_y = off.front();

  scene.ego_lane = nearest_lane(ego_r.y, off);
  scene.ego_lat = off[scene.ego_lane - 1] - off.front();
  scene.ego_lat_raw = ego_r.y - off.front();
  scene.ego_offset_delta =
      prev_target_lat ? scene.ego_lat_raw - *prev_target_lat : 0.0;
  scene.ego_speed = world.ego.v;

  const Vec2 goal_r = rotate(world.goal.x, world.goal.y, psi);
  scene.goal = {goal_r.x - scene.origin_x, goal_r.y - scene.lane1_y};

  scene.others.reserve(world.others.size());
  for (const auto& o : world.others) {
    const Vec2 r = rotate(o.x, o.y, psi);
    scene.others.push_back({o.id, r.x - scene.origin_x,
                            (r.y - scene.lane1_y) / scene.lane_width, o.v,
                            o.heading});
  }
  return scene;
}

}  // namespace easter
