#pragma once

#include <optional>

namespace easter {

// Intelligent Driver Model parameters. `max_decel` is the emergency clamp:
// no IDM acceleration is ever lower than -max_decel.
struct IdmParams {
  double desired_speed = 15.0;     // v0, m/s
  double max_accel = 1.0;          // a, m/s^2
  double comfortable_decel = 1.5;  // b, m/s^2
  double time_headway = 1.5;       // T, s
  double min_gap = 2.0;            // s0, m
  double exponent = 4.0;           // delta
  double max_decel = 9.0;          // m/s^2

  void validate() const;
  IdmParams with_desired_speed(double v0) const;
};

// Desired gap s*. The dynamic part is bounded below by zero so a fast leader
// never makes the desired gap smaller than s0.
double idm_desired_gap(double v, double v_lead, const IdmParams& p);

// IDM acceleration. Without a leader only the free-road term applies; a
// non-positive gap to a present leader returns -max_decel.
double idm_accel(double v, std::optional<double> v_lead, double gap,
                 const IdmParams& p);

// Bumper-to-bumper gap at which a follower at speed v behind a leader at the
// same speed is in equilibrium.
double idm_equilibrium_gap(double v, const IdmParams& p);

}  // namespace easter
