#include "easter/idm.hpp"

#include <algorithm>
#include <cmath>

#include "easter/error.hpp"

namespace easter {

void IdmParams::validate() const {
  if (!(desired_speed > 0.0) || !(max_accel > 0.0) ||
      !(comfortable_decel > 0.0) || !(time_headway > 0.0) ||
      !(min_gap > 0.0) || !(max_decel > 0.0)) {
    throw ConfigError("idm: all parameters must be positive");
  }
  if (!(exponent >= 1.0)) throw ConfigError("idm: exponent must be >= 1");
}

IdmParams IdmParams::with_desired_speed(double v0) const {
  IdmParams p = *this;
  p.desired_speed = v0;
  return p;
}

double idm_desired_gap(double v, double v_lead, const IdmParams& p) {
  const double dynamic =
      v * p.time_headway +
      v * (v - v_lead) / (2.0 * std::sqrt(p.max_accel * p.comfortable_decel));
  return p.min_gap + std::max(0.0, dynamic);
}

double idm_accel(double v, std::optional<double> v_lead, double gap,
                 const IdmParams& p) {
  const double free_term =
      1.0 - std::pow(std::max(v, 0.0) / p.desired_speed, p.exponent);
  if (!v_lead) return std::max(p.max_accel * free_term, -p.max_decel);
  if (!(gap > 0.0)) return -p.max_decel;
  const double ratio = idm_desired_gap(v, *v_lead, p) / gap;
  return std::max(p.max_accel * (free_term - ratio * ratio), -p.max_decel);
}

double idm_equilibrium_gap(double v, const IdmParams& p) {
  const double free_term = 1.0 - std::pow(v / p.desired_speed, p.exponent);
  if (!(free_term > 0.0)) {
    throw ContractError("idm: no equilibrium at or above the desired speed");
  }
  return (p.min_gap + v * p.time_headway) / std::sqrt(free_term);
}

}  // namespace easter
