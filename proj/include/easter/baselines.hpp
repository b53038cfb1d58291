#pragma once

#include <vector>

#include "easter/frame.hpp"
#include "easter/idm.hpp"

namespace easter {

struct MobilParams {
  double politeness = 0.5;       // p
  double accel_threshold = 0.1;  // m/s^2
  double safe_decel = 4.0;       // b_safe, m/s^2

  void validate() const;
};

// Outcome of the MOBIL test for one adjacent lane.
struct MobilEvaluation {
  int lane = 0;
  bool safe = false;
  double ego_gain = 0.0;       // a~_c - a_c
  double follower_loss = 0.0;  // (a_n - a~_n) + (a_o - a~_o)
  double incentive = 0.0;      // ego_gain - p * follower_loss
  bool passes = false;
};

// Evaluates the lanes directly left and right of the ego.
std::vector<MobilEvaluation> mobil_evaluate(const ProjectedScene& scene,
                                            const IdmParams& ego_idm,
                                            const MobilParams& params,
                                            double vehicle_length = 4.5);

// Target lane under MOBIL: the adjacent lane with the larger passing
// incentive (left on ties), or the current lane when neither passes.
int mobil_decide(const ProjectedScene& scene, const IdmParams& ego_idm,
                 const MobilParams& params, double vehicle_length = 4.5);

int nochange_decide(const ProjectedScene& scene);

}  // namespace easter
