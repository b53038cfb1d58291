#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "easter/cost.hpp"
#include "easter/frame.hpp"
#include "easter/graph.hpp"
#include "easter/prediction.hpp"
#include "easter/search.hpp"

namespace easter::testing {

inline const ConstantVelocityModel& cv_model() {
  static const ConstantVelocityModel model;
  return model;
}

// Everything a search needs, pinned on the heap because the cost model holds
// references into it.
struct RandomScene {
  ProjectedScene scene;
  std::unique_ptr<ScenePrediction> prediction;
  std::unique_ptr<Lattice> lattice;
  CostWeights weights;
  PlanningContext context;

  CostModel model() const {
    return CostModel(*lattice, *prediction, weights, context);
  }
};

struct SceneSpec {
  int lanes = 3;
  int columns = 5;
  int max_vehicles = 8;
  double lane_width = 3.5;
};

inline double random_entropy(std::mt19937_64& rng) {
  AccelerationBelief belief = AccelerationBelief::standard();
  std::uniform_int_distribution<int> count(0, 12);
  std::normal_distribution<double> accel(0.0, 2.0);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) belief.observe(accel(rng));
  return entropy(belief);
}

inline std::unique_ptr<RandomScene> random_scene(std::mt19937_64& rng,
                                                 const SceneSpec& spec = {},
                                                 const CostWeights& w = {}) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> lane(1, spec.lanes);
  std::uniform_int_distribution<int> n_vehicles(0, spec.max_vehicles);

  auto out = std::make_unique<RandomScene>();
  ProjectedScene& s = out->scene;
  s.lane_count = spec.lanes;
  s.lane_width = spec.lane_width;
  s.ego_lane = lane(rng);
  s.ego_lat = s.lane_center(s.ego_lane);
  s.ego_lat_raw = s.ego_lat;
  s.ego_speed = 3.0 + 17.0 * u01(rng);
  s.goal = {50.0 + 950.0 * u01(rng), s.lane_center(lane(rng))};

  std::vector<double> entropies;
  const int n = n_vehicles(rng);
  for (int i = 0; i < n; ++i) {
    ProjectedVehicle v;
    v.id = i + 1;
    v.x = -20.0 + 100.0 * u01(rng);
    v.lat_lanes = (lane(rng) - 1) + (u01(rng) < 0.3 ? 0.6 * u01(rng) - 0.3 : 0.0);
    v.v = 15.0 * u01(rng);
    s.others.push_back(v);
    entropies.push_back(random_entropy(rng));
  }
  out->prediction = std::make_unique<ScenePrediction>(ScenePrediction::from_scene(
      s, cv_model(), std::move(entropies)));

  const double dx = std::max(s.ego_speed, 1.0);
  out->lattice = std::make_unique<Lattice>(spec.lanes, spec.columns, dx,
                                           spec.lane_width,
                                           Node{0, s.ego_lane});
  out->weights = w;
  PlanningContext& ctx = out->context;
  ctx.speed = dx;
  ctx.goal = s.goal;
  ctx.lambda_goal = goal_weight(Vec2{0.0, s.ego_lat}, s.goal, w);
  if (u01(rng) < 0.5) {
    ctx.prev_target_lat = s.lane_center(lane(rng));
    ctx.delta = spec.lane_width * (2.0 * u01(rng) - 1.0);
  }
  return out;
}

struct Enumeration {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Node> best_goals;  // every goal attaining the minimum (1e-9)
  std::size_t paths = 0;
};

// Brute force over every lattice path; the objective at a goal is g + h.
inline Enumeration enumerate_paths(const CostModel& model) {
  const Lattice& lat = model.lattice();
  struct Frame {
    Node node;
    double g;
    double t;
  };
  std::vector<std::pair<double, Node>> totals;
  std::vector<Frame> stack{{lat.start(), 0.0, 0.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (lat.is_goal(f.node)) {
      totals.emplace_back(f.g + model.heuristic(f.node), f.node);
      continue;
    }
    for (const Node next : lat.successors(f.node)) {
      const auto step = model.step(f.node, next, f.t);
      stack.push_back({next, f.g + step.breakdown.step(), f.t + step.travel_time});
    }
  }
  Enumeration e;
  e.paths = totals.size();
  for (const auto& [c, n] : totals) e.best = std::min(e.best, c);
  for (const auto& [c, n] : totals) {
    if (c <= e.best + 1e-9) e.best_goals.push_back(n);
  }
  return e;
}

}  // namespace easter::testing
