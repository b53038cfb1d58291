#include "easter/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "easter/error.hpp"

namespace easter {

void MobilParams::validate() const {
  if (!(politeness >= 0.0 && politeness <= 1.0)) {
    throw ConfigError("mobil: politeness must lie in [0, 1]");
  }
  if (!(accel_threshold >= 0.0) || !std::isfinite(accel_threshold)) {
    throw ConfigError("mobil: accel_threshold must be finite and >= 0");
  }
  if (!(safe_decel >= 0.0) || !std::isfinite(safe_decel)) {
    throw ConfigError("mobil: safe_decel must be finite and >= 0");
  }
}

namespace {

constexpr double kMinOtherDesiredSpeed = 0.1;

struct Neighbours {
  std::optional<ProjectedVehicle> leader;
  std::optional<ProjectedVehicle> follower;
  bool beside = false;  // some vehicle overlaps the ego longitudinally
};

Neighbours neighbours(const ProjectedScene& scene, int lane, double length) {
  Neighbours n;
  for (const auto& o : scene.others) {
    if (scene.lane_of(o.lat_lanes * scene.lane_width) != lane) continue;
    if (std::abs(o.x) < length) n.beside = true;
    if (o.x >= 0.0) {
      if (!n.leader || o.x < n.leader->x) n.leader = o;
    } else if (!n.follower || o.x > n.follower->x) {
      n.follower = o;
    }
  }
  return n;
}

// Acceleration of a vehicle at (x, v) behind `lead` (absent: free road).
double accel_behind(double x, double v, const std::optional<ProjectedVehicle>& lead,
                    double length, const IdmParams& p) {
  if (!lead) return idm_accel(v, std::nullopt, 0.0, p);
  return idm_accel(v, lead->v, lead->x - x - length, p);
}

IdmParams other_params(const IdmParams& ego, double v) {
  return ego.with_desired_speed(std::max(v, kMinOtherDesiredSpeed));
}

}  // namespace

std::vector<MobilEvaluation> mobil_evaluate(const ProjectedScene& scene,
                                            const IdmParams& ego_idm,
                                            const MobilParams& params,
                                            double vehicle_length) {
  params.validate();
  ego_idm.validate();
  const double v = scene.ego_speed;
  const ProjectedVehicle ego{-1, 0.0, 0.0, v, 0.0};
  const Neighbours cur = neighbours(scene, scene.ego_lane, vehicle_length);
  const double a_c = accel_behind(0.0, v, cur.leader, vehicle_length, ego_idm);

  // Old follower: now behind the ego, afterwards behind the current leader.
  double old_follower_loss = 0.0;
  if (cur.follower) {
    const auto& o = *cur.follower;
    const IdmParams po = other_params(ego_idm, o.v);
    const double a_o = accel_behind(o.x, o.v, ego, vehicle_length, po);
    const double a_o_new = accel_behind(o.x, o.v, cur.leader, vehicle_length, po);
    old_follower_loss = a_o - a_o_new;
  }

  std::vector<MobilEvaluation> out;
  for (const int lane : {scene.ego_lane - 1, scene.ego_lane + 1}) {
    if (lane < 1 || lane > scene.lane_count) continue;
    const Neighbours tgt = neighbours(scene, lane, vehicle_length);
    MobilEvaluation e;
    e.lane = lane;
    const double a_c_new =
        accel_behind(0.0, v, tgt.leader, vehicle_length, ego_idm);
    e.ego_gain = a_c_new - a_c;

    double new_follower_loss = 0.0;
    bool safe = !tgt.beside;
    if (tgt.follower) {
      const auto& n = *tgt.follower;
      const IdmParams pn = other_params(ego_idm, n.v);
      const double a_n = accel_behind(n.x, n.v, tgt.leader, vehicle_length, pn);
      const double a_n_new = accel_behind(n.x, n.v, ego, vehicle_length, pn);
      new_follower_loss = a_n - a_n_new;
      if (a_n_new < -params.safe_decel) safe = false;
    }
    e.safe = safe;
    e.follower_loss = new_follower_loss + old_follower_loss;
    e.incentive = e.ego_gain - params.politeness * e.follower_loss;
    e.passes = e.safe && e.incentive > params.accel_threshold;
    out.push_back(e);
  }
  return out;
}

int mobil_decide(const ProjectedScene& scene, const IdmParams& ego_idm,
                 const MobilParams& params, double vehicle_length) {
  int best = scene.ego_lane;
  double best_incentive = 0.0;
  for (const auto& e :
       mobil_evaluate(scene, ego_idm, params, vehicle_length)) {
    if (!e.passes) continue;
    // Left is evaluated first, so a strict comparison keeps left on ties.
    if (best == scene.ego_lane || e.incentive > best_incentive) {
      best = e.lane;
      best_incentive = e.incentive;
    }
  }
  return best;
}

int nochange_decide(const ProjectedScene& scene) { return scene.ego_lane; }

}  // namespace easter
