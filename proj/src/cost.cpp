#include "easter/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "easter/error.hpp"

namespace easter {

namespace {

// Leaders slower than this are priced as if moving at it, so a stopped
// vehicle yields a large but finite penalty under SpeedDeficit.
constexpr double kMinFrontSpeed = 1.0;

double risk_distance_sq(Vec2 a, Vec2 b, double d_clamp) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::max(dx * dx + dy * dy, d_clamp * d_clamp);
}

}  // namespace

void CostWeights::validate() const {
  const double lambdas[] = {lambda_lng,    lambda_lat,     lambda_time,
                            lambda_adj,    lambda_uncert,  lambda_switch,
                            lambda_goal_scale};
  for (double l : lambdas) {
    if (!std::isfinite(l) || l < 0.0) {
      throw ConfigError("weights: every lambda must be finite and >= 0");
    }
  }
  if (!(d_floor > 0.0) || !(d_clamp > 0.0) || !(detection_range > 0.0)) {
    throw ConfigError(
        "weights: d_floor, d_clamp and detection_range must be positive");
  }
}

std::optional<std::string> CostWeights::warning() const {
  if (lambda_lat <= lambda_lng) {
    return "lambda_lat <= lambda_lng: lane changes are not penalised more "
           "than longitudinal progress";
  }
  return std::nullopt;
}

CostWeights CostWeights::scaled(double k) const {
  CostWeights w = *this;
  w.lambda_lng *= k;
  w.lambda_lat *= k;
  w.lambda_time *= k;
  w.lambda_adj *= k;
  w.lambda_uncert *= k;
  w.lambda_switch *= k;
  w.lambda_goal_scale *= k;
  return w;
}

ScenePrediction::ScenePrediction(const ProjectedScene& scene,
                                 std::vector<TrajectoryHistory> histories,
                                 std::vector<double> entropies,
                                 const PredictionModel& model)
    : scene_(scene),
      histories_(std::move(histories)),
      entropies_(std::move(entropies)),
      model_(&model) {
  if (histories_.size() != scene_.others.size()) {
    throw ContractError("prediction: one history per scene vehicle required");
  }
  if (entropies_.empty()) entropies_.assign(histories_.size(), 0.0);
  if (entropies_.size() != histories_.size()) {
    throw ContractError("prediction: one entropy per scene vehicle required");
  }
  ahead_.reserve(histories_.size());
  for (const auto& h : histories_) ahead_.push_back(h.latest().x > 0.0);
}

ScenePrediction ScenePrediction::from_scene(const ProjectedScene& scene,
                                            const PredictionModel& model,
                                            std::vector<double> entropies) {
  std::vector<TrajectoryHistory> histories;
  histories.reserve(scene.others.size());
  for (const auto& o : scene.others) {
    TrajectoryHistory h(1);
    h.push({0.0, o.x, o.lat_lanes * scene.lane_width, o.v, o.heading, 0.0});
    histories.push_back(std::move(h));
  }
  return ScenePrediction(scene, std::move(histories), std::move(entropies),
                         model);
}

void ScenePrediction::at(double t_n, std::vector<PredictedVehicle>& out) const {
  out.clear();
  out.reserve(histories_.size());
  for (std::size_t i = 0; i < histories_.size(); ++i) {
    const auto& h = histories_[i];
    const Vec2 p = model_->predict(h, t_n);
    const auto& last = h.latest();
    out.push_back({scene_.others[i].id, p, scene_.lane_of(p.y),
                   last.v * std::cos(last.heading), entropies_[i], ahead_[i]});
  }
}

std::vector<PredictedVehicle> ScenePrediction::at(double t_n) const {
  std::vector<PredictedVehicle> out;
  at(t_n, out);
  return out;
}

double control_cost(const Lattice& lattice, Node from, Node to,
                    const CostWeights& w) {
  const double d = node_distance(lattice, from, to);
  const double theta =
      from.lane != to.lane ? std::atan(lattice.lane_width() / d) : 0.0;
  return w.lambda_lng * std::abs(d * std::cos(theta)) +
         w.lambda_lat * std::abs(d * std::sin(theta));
}

double travel_time(const Lattice& lattice, Node from, Node to, double v) {
  if (!(v > 0.0)) throw ContractError("travel_time: speed must be positive");
  return node_distance(lattice, from, to) / v;
}

double additional_time(double step_distance, double v,
                       std::optional<double> v_front, AdditionalTimeRule rule) {
  if (!v_front) return 0.0;
  if (!(step_distance > 0.0)) {
    throw ContractError("additional_time: step distance must be positive");
  }
  switch (rule) {
    case AdditionalTimeRule::RelativeSpeed:
      return std::max(0.0, v - *v_front) / step_distance;
    case AdditionalTimeRule::SpeedDeficit: {
      const double vf = std::max(*v_front, kMinFrontSpeed);
      return step_distance * std::max(0.0, 1.0 / vf - 1.0 / v);
    }
  }
  return 0.0;
}

std::optional<double> front_vehicle_speed(
    const Lattice& lattice, Node n, std::span<const PredictedVehicle> traffic,
    const CostWeights& w) {
  const double x_node = lattice.position(n).x;
  const PredictedVehicle* best = nullptr;
  double best_x = std::numeric_limits<double>::infinity();
  for (const auto& veh : traffic) {
    if (veh.lane != n.lane) continue;
    const double gap = veh.pos.x - x_node;
    if (gap > w.detection_range) continue;
    const bool ahead = gap > 0.0;
    const bool blocking =
        w.front_vehicle == FrontVehicleRule::LaneLeader && veh.ahead_at_start;
    if (!ahead && !blocking) continue;
    if (veh.pos.x < best_x) {
      best_x = veh.pos.x;
      best = &veh;
    }
  }
  if (!best) return std::nullopt;
  return best->v;
}

double time_cost(const Lattice& lattice, Node from, Node to, double v,
                 std::optional<double> v_front, const CostWeights& w) {
  const double d = node_distance(lattice, from, to);
  return w.lambda_time *
         (travel_time(lattice, from, to, v) +
          additional_time(d, v, v_front, w.additional_time));
}

double adjacency_risk(const Lattice& lattice, Node n,
                      std::span<const PredictedVehicle> traffic,
                      const CostWeights& w) {
  const Vec2 p = lattice.position(n);
  double sum = 0.0;
  for (const auto& veh : traffic) {
    if (veh.lane != n.lane) continue;
    sum += 1.0 / risk_distance_sq(p, veh.pos, w.d_clamp);
  }
  return w.lambda_adj * sum;
}

double adjacency_risk(const Lattice& lattice, Node n, double t_n,
                      const ScenePrediction& prediction, const CostWeights& w) {
  const auto traffic = prediction.at(t_n);
  return adjacency_risk(lattice, n, traffic, w);
}

double uncertainty_risk(const Lattice& lattice, Node n,
                        std::span<const PredictedVehicle> traffic,
                        const CostWeights& w) {
  const Vec2 p = lattice.position(n);
  double sum = 0.0;
  for (const auto& veh : traffic) {
    if (veh.lane != n.lane) continue;
    sum += veh.entropy / risk_distance_sq(p, veh.pos, w.d_clamp);
  }
  return w.lambda_uncert * sum;
}

double uncertainty_risk(const Lattice& lattice, Node n, double t_n,
                        const ScenePrediction& prediction,
                        const CostWeights& w) {
  const auto traffic = prediction.at(t_n);
  return uncertainty_risk(lattice, n, traffic, w);
}

double switching_cost(const Lattice& lattice, Node n,
                      std::optional<double> prev_target_lat, double delta,
                      const CostWeights& w) {
  if (!prev_target_lat) return 0.0;
  const double dynamic_weight =
      w.lambda_switch * std::abs(delta) / lattice.lane_width();
  return dynamic_weight * std::abs(lattice.position(n).y - *prev_target_lat);
}

double goal_weight(Vec2 ego, Vec2 goal, const CostWeights& w) {
  return w.lambda_goal_scale / std::max(distance(ego, goal), w.d_floor);
}

double heuristic(const Lattice& lattice, Node n, Vec2 goal,
                 double lambda_goal) {
  return lambda_goal * distance(lattice.position(n), goal);
}

CostModel::CostModel(const Lattice& lattice, const ScenePrediction& prediction,
                     const CostWeights& weights, PlanningContext context)
    : lattice_(&lattice),
      prediction_(&prediction),
      weights_(&weights),
      context_(context) {
  if (!(context_.speed > 0.0)) {
    throw ContractError("cost model: planning speed must be positive");
  }
}

CostModel::Step CostModel::step(Node from, Node to, double t_from) const {
  const auto& w = *weights_;
  Step out;
  out.travel_time = travel_time(*lattice_, from, to, context_.speed);
  const double t_n = t_from + out.travel_time;

  std::vector<PredictedVehicle> traffic;
  prediction_->at(t_n, traffic);

  auto& b = out.breakdown;
  b.control = control_cost(*lattice_, from, to, w);
  b.time = time_cost(*lattice_, from, to, context_.speed,
                     front_vehicle_speed(*lattice_, to, traffic, w), w);
  b.risk_adjacency = adjacency_risk(*lattice_, to, traffic, w);
  b.risk_uncertainty = uncertainty_risk(*lattice_, to, traffic, w);
  b.switching = switching_cost(*lattice_, to, context_.prev_target_lat,
                               context_.delta, w);
  b.goal_distance = heuristic(to);
  b.heuristic = heuristic(to);
  return out;
}

double CostModel::heuristic(Node n) const {
  return easter::heuristic(*lattice_, n, context_.goal, context_.lambda_goal);
}

}  // namespace easter
