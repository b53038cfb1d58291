#include "easter/selector.hpp"

#include <chrono>
#include <cstdlib>
#include <set>

#include "easter/error.hpp"

namespace easter {

void PlannerConfig::validate() const {
  weights.validate();
  if (lattice.horizon < 1) throw ConfigError("planner: horizon must be >= 1");
  if (!(lattice.step_time > 0.0) || !(lattice.speed_floor > 0.0)) {
    throw ConfigError("planner: step_time and speed_floor must be positive");
  }
  if (planning_speed && !(*planning_speed >= 0.0)) {
    throw ConfigError("planner: planning speed must be non-negative");
  }
  if (history_capacity < 2) {
    throw ConfigError("planner: history must hold at least two observations");
  }
}

int target_from_path(const Path& path, int current_lane) {
  if (path.nodes.size() < 2) return current_lane;
  return path.nodes[1].lane;
}

namespace {

// Folds the world's observations into histories and beliefs. Vehicles that
// dropped out of the snapshot are forgotten.
void observe(const WorldState& world, const ProjectedScene& scene,
             SelectorState& state, std::size_t capacity) {
  std::set<int> seen;
  for (const auto& o : scene.others) {
    seen.insert(o.id);
    const Observation obs{world.time_now, scene.origin_x + o.x,
                          o.lat_lanes * scene.lane_width, o.v, o.heading, 0.0};
    auto [hist, fresh] = state.history.try_emplace(o.id, capacity);
    auto belief = state.beliefs.try_emplace(o.id, AccelerationBelief::standard())
                      .first;
    Observation stamped = obs;
    if (!fresh && !hist->second.empty()) {
      const Observation& prev = hist->second.latest();
      if (obs.t > prev.t) {
        stamped.accel = (obs.v - prev.v) / (obs.t - prev.t);
        belief->second.observe(stamped.accel);
      }
    }
    hist->second.push(stamped);
  }
  std::erase_if(state.history,
                [&](const auto& kv) { return !seen.contains(kv.first); });
  std::erase_if(state.beliefs,
                [&](const auto& kv) { return !seen.contains(kv.first); });
}

}  // namespace

CostModel PlanningSnapshot::cost_model() const {
  if (!prediction || !lattice) {
    throw ContractError("planning snapshot is incomplete");
  }
  return CostModel(*lattice, *prediction, weights, context);
}

std::unique_ptr<PlanningSnapshot> prepare_cycle(const WorldState& world,
                                                SelectorState& state,
                                                const PlannerConfig& config,
                                                const PredictionModel& model) {
  config.validate();
  auto snap = std::make_unique<PlanningSnapshot>();
  snap->scene = project_scene(world, state.prev_target_lat);
  const ProjectedScene& scene = snap->scene;
  observe(world, scene, state, config.history_capacity);

  std::vector<TrajectoryHistory> histories;
  std::vector<double> entropies;
  histories.reserve(scene.others.size());
  entropies.reserve(scene.others.size());
  for (const auto& o : scene.others) {
    histories.push_back(state.history.at(o.id).shifted(scene.origin_x, 0.0));
    entropies.push_back(entropy(state.beliefs.at(o.id)));
  }
  snap->prediction.emplace(scene, std::move(histories), std::move(entropies),
                           model);

  const double speed = config.planning_speed.value_or(world.ego.v);
  snap->lattice.emplace(build_lattice(scene, speed, config.lattice));
  snap->weights = config.weights;

  PlanningContext& ctx = snap->context;
  ctx.speed = snap->lattice->dx() / config.lattice.step_time;
  ctx.goal = scene.goal;
  ctx.lambda_goal =
      goal_weight(Vec2{0.0, scene.ego_lat}, scene.goal, config.weights);
  ctx.prev_target_lat = state.prev_target_lat;
  ctx.delta = scene.ego_offset_delta;
  return snap;
}

std::pair<LaneDecision, SelectorState> select_lane(
    const WorldState& world, SelectorState state, const PlannerConfig& config,
    const PredictionModel& model) {
  const auto started = std::chrono::steady_clock::now();
  const auto snap = prepare_cycle(world, state, config, model);
  const ProjectedScene& scene = snap->scene;

  LaneDecision decision;
  decision.path = extended_astar(snap->cost_model(), config.search);
  decision.current_lane = scene.ego_lane;
  decision.target_lane = target_from_path(decision.path, scene.ego_lane);
  decision.target_lat = scene.lane_center(decision.target_lane);
  decision.delta = scene.ego_offset_delta;
  if (std::abs(decision.target_lane - decision.current_lane) > 1) {
    throw InvariantError("selector: decision skips a lane");
  }
  state.prev_target_lat = decision.target_lat;

  decision.planning_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return {std::move(decision), std::move(state)};
}

LaneSelector::LaneSelector(PlannerConfig config) : config_(std::move(config)) {
  config_.validate();
}

LaneSelector::LaneSelector(PlannerConfig config, const PredictionModel& model)
    : config_(std::move(config)), model_(&model) {
  config_.validate();
}

LaneDecision LaneSelector::select(const WorldState& world) {
  const PredictionModel& model = model_ ? *model_ : default_model_;
  auto [decision, next] = select_lane(world, std::move(state_), config_, model);
  state_ = std::move(next);
  return decision;
}

}  // namespace easter
