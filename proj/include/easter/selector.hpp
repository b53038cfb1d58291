#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "easter/cost.hpp"
#include "easter/frame.hpp"
#include "easter/graph.hpp"
#include "easter/prediction.hpp"
#include "easter/search.hpp"

namespace easter {

struct PlannerConfig {
  CostWeights weights;
  LatticeParams lattice;
  SearchOptions search;
  // Speed the lattice and travel-time terms are evaluated at. When unset the
  // ego's measured speed is used.
  std::optional<double> planning_speed;
  std::size_t history_capacity = 11;

  void validate() const;
};

struct SelectorState {
  std::optional<double> prev_target_lat;  // projected frame, metres
  std::map<int, AccelerationBelief> beliefs;
  std::map<int, TrajectoryHistory> history;  // rotated frame, lat from lane 1
};

struct LaneDecision {
  int current_lane = 1;
  int target_lane = 1;
  double target_lat = 0.0;
  double delta = 0.0;  // signed divergence from the previous target
  Path path;
  double planning_time = 0.0;  // wall clock, seconds
};

// Lane index of the first transition; the current lane for a degenerate
// single-node path.
int target_from_path(const Path& path, int current_lane);

// Inputs of one planning cycle. Heap-allocated and pinned: the cost model
// refers into it.
struct PlanningSnapshot {
  ProjectedScene scene;
  std::optional<ScenePrediction> prediction;
  std::optional<Lattice> lattice;
  CostWeights weights;
  PlanningContext context;

  PlanningSnapshot() = default;
  PlanningSnapshot(const PlanningSnapshot&) = delete;
  PlanningSnapshot& operator=(const PlanningSnapshot&) = delete;

  CostModel cost_model() const;
};

// Projects the world, folds its observations into `state` and builds the
// lattice and cost context, without searching.
std::unique_ptr<PlanningSnapshot> prepare_cycle(const WorldState& world,
                                                SelectorState& state,
                                                const PlannerConfig& config,
                                                const PredictionModel& model);

// One planning cycle. Observations in `world` are folded into the histories
// and acceleration beliefs before the search runs.
std::pair<LaneDecision, SelectorState> select_lane(
    const WorldState& world, SelectorState state, const PlannerConfig& config,
    const PredictionModel& model);

// Stateful convenience wrapper owning the selector state.
class LaneSelector {
 public:
  explicit LaneSelector(PlannerConfig config);
  LaneSelector(PlannerConfig config, const PredictionModel& model);

  LaneSelector(const LaneSelector&) = delete;
  LaneSelector& operator=(const LaneSelector&) = delete;

  LaneDecision select(const WorldState& world);

  const SelectorState& state() const { return state_; }
  const PlannerConfig& config() const { return config_; }
  void reset() { state_ = {}; }

 private:
  PlannerConfig config_;
  ConstantVelocityModel default_model_;
  const PredictionModel* model_ = nullptr;  // null: default_model_
  SelectorState state_;
};

}  // namespace easter
