#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "easter/frame.hpp"
#include "easter/graph.hpp"
#include "easter/prediction.hpp"

namespace easter {

// How the slow-leader penalty converts a speed deficit into time.
enum class AdditionalTimeRule {
  // (v - v_f)_+ / d. Units are 1/s, so lambda_time absorbs the mismatch.
  RelativeSpeed,
  // d * (1/v_f - 1/v)_+: the extra seconds spent covering the step at the
  // leader's speed instead of the planning speed.
  SpeedDeficit,
};

// Which vehicle counts as "front vehicle" of a node.
enum class FrontVehicleRule {
  // Nearest vehicle predicted ahead of the node, within detection range.
  AheadOfNode,
  // As above, but vehicles that were ahead of the ego at measurement time
  // keep blocking the lane after the (constant-speed) node has passed them:
  // the ego cannot overtake inside a lane.
  LaneLeader,
};

struct CostWeights {
  double lambda_lng = 1.0;
  double lambda_lat = 15.0;
  double lambda_time = 20.0;
  double lambda_adj = 6.0;
  double lambda_uncert = 6.0;
  double lambda_switch = 7.0;
  double lambda_goal_scale = 10.0;  // lambda_goal = scale / max(d, d_floor)
  double d_floor = 10.0;            // metres
  double d_clamp = 0.5;             // metres, floor on risk distances
  double detection_range = 50.0;    // metres
  AdditionalTimeRule additional_time = AdditionalTimeRule::SpeedDeficit;
  FrontVehicleRule front_vehicle = FrontVehicleRule::LaneLeader;

  // Throws ConfigError on negative weights or non-positive distances.
  void validate() const;
  // Empty when lateral effort is penalised harder than longitudinal effort.
  std::optional<std::string> warning() const;
  // Every lambda (including the goal scale) multiplied by k.
  CostWeights scaled(double k) const;
};

// Per-node cost terms. `step()` is the step cost g(n|n0); `total()` also
// adds the heuristic, i.e. the node's contribution to f.
struct CostBreakdown {
  double control = 0.0;
  double time = 0.0;
  double risk_adjacency = 0.0;
  double risk_uncertainty = 0.0;
  double switching = 0.0;
  double goal_distance = 0.0;
  double heuristic = 0.0;

  double step() const {
    return control + time + risk_adjacency + risk_uncertainty + switching +
           goal_distance;
  }
  double total() const { return step() + heuristic; }
};

// Another vehicle's predicted state at one query time, in the projected frame.
struct PredictedVehicle {
  int id = 0;
  Vec2 pos;           // metres
  int lane = 1;       // nearest lane of pos.y
  double v = 0.0;     // longitudinal speed
  double entropy = 0.0;
  bool ahead_at_start = false;  // ahead of the ego at measurement time
};

// Binds a scene, per-vehicle histories (already in the scene's frame), the
// acceleration entropies and a prediction model. The model is held by
// reference and must outlive this object.
class ScenePrediction {
 public:
  ScenePrediction(const ProjectedScene& scene,
                  std::vector<TrajectoryHistory> histories,
                  std::vector<double> entropies, const PredictionModel& model);

  // Histories seeded from the scene's own observations (t = 0). Entropies
  // default to zero when not given.
  static ScenePrediction from_scene(const ProjectedScene& scene,
                                    const PredictionModel& model,
                                    std::vector<double> entropies = {});

  void at(double t_n, std::vector<PredictedVehicle>& out) const;
  std::vector<PredictedVehicle> at(double t_n) const;

  const ProjectedScene& scene() const { return scene_; }
  std::size_t size() const { return histories_.size(); }
  double entropy(std::size_t i) const { return entropies_[i]; }

 private:
  ProjectedScene scene_;
  std::vector<TrajectoryHistory> histories_;
  std::vector<double> entropies_;
  std::vector<bool> ahead_;
  const PredictionModel* model_;
};

double control_cost(const Lattice& lattice, Node from, Node to,
                    const CostWeights& w);

double travel_time(const Lattice& lattice, Node from, Node to, double v);

double additional_time(double step_distance, double v,
                       std::optional<double> v_front, AdditionalTimeRule rule);

// Speed of the vehicle the ego would follow at `n`, if any.
std::optional<double> front_vehicle_speed(
    const Lattice& lattice, Node n, std::span<const PredictedVehicle> traffic,
    const CostWeights& w);

double time_cost(const Lattice& lattice, Node from, Node to, double v,
                 std::optional<double> v_front, const CostWeights& w);

double adjacency_risk(const Lattice& lattice, Node n,
                      std::span<const PredictedVehicle> traffic,
                      const CostWeights& w);
double adjacency_risk(const Lattice& lattice, Node n, double t_n,
                      const ScenePrediction& prediction, const CostWeights& w);

double uncertainty_risk(const Lattice& lattice, Node n,
                        std::span<const PredictedVehicle> traffic,
                        const CostWeights& w);
double uncertainty_risk(const Lattice& lattice, Node n, double t_n,
                        const ScenePrediction& prediction,
                        const CostWeights& w);

double switching_cost(const Lattice& lattice, Node n,
                      std::optional<double> prev_target_lat, double delta,
                      const CostWeights& w);

double goal_weight(Vec2 ego, Vec2 goal, const CostWeights& w);

double heuristic(const Lattice& lattice, Node n, Vec2 goal,
                 double lambda_goal);

// Everything one planning cycle needs to price an edge.
struct PlanningContext {
  double speed = 1.0;  // planning speed v, already floored
  Vec2 goal;
  double lambda_goal = 0.0;
  std::optional<double> prev_target_lat;
  double delta = 0.0;
};

class CostModel {
 public:
  // All references must outlive the model.
  CostModel(const Lattice& lattice, const ScenePrediction& prediction,
            const CostWeights& weights, PlanningContext context);

  struct Step {
    CostBreakdown breakdown;  // heuristic of `to` included
    double travel_time = 0.0;
  };

  // Prices the edge from -> to when `from` was reached at time t_from.
  Step step(Node from, Node to, double t_from) const;
  double heuristic(Node n) const;

  const Lattice& lattice() const { return *lattice_; }
  const ScenePrediction& prediction() const { return *prediction_; }
  const CostWeights& weights() const { return *weights_; }
  const PlanningContext& context() const { return context_; }

 private:
  const Lattice* lattice_;
  const ScenePrediction* prediction_;
  const CostWeights* weights_;
  PlanningContext context_;
};

}  // namespace easter
