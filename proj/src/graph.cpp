#include "easter/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "easter/error.hpp"

namespace easter {

Lattice::Lattice(int n_lanes, int n_columns, double dx, double lane_width,
                 Node start)
    : n_lanes_(n_lanes),
      n_columns_(n_columns),
      dx_(dx),
      lane_width_(lane_width),
      start_(start) {
  if (n_lanes_ < 1 || n_columns_ < 0) {
    throw ConfigError("lattice: needs at least one lane and column");
  }
  if (!(dx_ > 0.0) || !(lane_width_ > 0.0)) {
    throw ConfigError("lattice: spacing must be positive");
  }
  if (!contains(start_)) throw ConfigError("lattice: start outside bounds");
}

Successors Lattice::successors(Node n) const {
  Successors out;
  if (!contains(n) || n.column >= n_columns_) return out;
  for (int lane = n.lane - 1; lane <= n.lane + 1; ++lane) {
    const Node next{n.column + 1, lane};
    if (contains(next)) out.push(next);
  }
  return out;
}

std::vector<Node> Lattice::surrogate_goals() const {
  std::vector<Node> goals;
  goals.reserve(n_lanes_);
  for (int lane = 1; lane <= n_lanes_; ++lane) {
    goals.push_back({n_columns_, lane});
  }
  return goals;
}

double node_distance(const Lattice& lattice, Node a, Node b) {
  return distance(lattice.position(a), lattice.position(b));
}

Lattice build_lattice(const ProjectedScene& scene, double ego_speed,
                      const LatticeParams& params) {
  if (params.horizon < 1) throw ConfigError("lattice: horizon must be >= 1");
  if (!(params.step_time > 0.0)) {
    throw ConfigError("lattice: step time must be positive");
  }
  if (!(params.speed_floor > 0.0)) {
    throw ConfigError("lattice: speed floor must be positive");
  }
  if (params.horizon < scene.lane_count - 1) {
    throw ConfigError("lattice: horizon " + std::to_string(params.horizon) +
                      " cannot reach all " +
                      std::to_string(scene.lane_count) + " lane ends");
  }
  const double v = std::max(ego_speed, params.speed_floor);
  return Lattice(scene.lane_count, params.horizon, v * params.step_time,
                 scene.lane_width, Node{0, scene.ego_lane});
}

}  // namespace easter
