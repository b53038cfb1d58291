#include "easter/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "easter/error.hpp"

namespace easter {

TrajectoryHistory::TrajectoryHistory(std::size_t capacity)
    : capacity_(capacity) {
  if (capacity_ == 0) throw ContractError("history capacity must be >= 1");
}

void TrajectoryHistory::push(const Observation& obs) {
  if (!buf_.empty() && !(obs.t > buf_.back().t)) {
    throw ContractError("history: timestamps must strictly increase (" +
                        std::to_string(obs.t) + " after " +
                        std::to_string(buf_.back().t) + ")");
  }
  if (buf_.size() == capacity_) buf_.pop_front();
  buf_.push_back(obs);
}

const Observation& TrajectoryHistory::latest() const {
  if (buf_.empty()) throw ContractError("history: no observations");
  return buf_.back();
}

TrajectoryHistory TrajectoryHistory::shifted(double dx, double dy) const {
  TrajectoryHistory out(capacity_);
  for (Observation o : buf_) {
    o.x -= dx;
    o.y -= dy;
    out.buf_.push_back(o);
  }
  return out;
}

Vec2 predict_constant_velocity(const Observation& obs, double t_n) {
  if (!(t_n >= 0.0)) {
    throw ContractError("prediction time must be non-negative, got " +
                        std::to_string(t_n));
  }
  return {obs.x + obs.v * std::cos(obs.heading) * t_n,
          obs.y + obs.v * std::sin(obs.heading) * t_n};
}

Vec2 ConstantVelocityModel::predict(const TrajectoryHistory& history,
                                    double t_n) const {
  return predict_constant_velocity(history.latest(), t_n);
}

AccelerationBelief::AccelerationBelief(std::vector<double> edges,
                                       double prior_count)
    : edges_(std::move(edges)) {
  if (!(prior_count > 0.0)) {
    throw ContractError("belief prior count must be positive");
  }
  if (!std::is_sorted(edges_.begin(), edges_.end()) ||
      std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ContractError("belief bin edges must strictly increase");
  }
  counts_.assign(edges_.size() + 1, prior_count);
}

AccelerationBelief AccelerationBelief::standard() {
  return AccelerationBelief({-3.0, -1.5, -0.5, 0.5, 1.5, 3.0}, 1.0);
}

std::size_t AccelerationBelief::bin_of(double accel) const {
  return static_cast<std::size_t>(
      std::upper_bound(edges_.begin(), edges_.end(), accel) - edges_.begin());
}

double AccelerationBelief::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

std::vector<double> AccelerationBelief::probabilities() const {
  const double sum = total();
  std::vector<double> p(counts_.size());
  std::transform(counts_.begin(), counts_.end(), p.begin(),
                 [sum](double c) { return c / sum; });
  return p;
}

void AccelerationBelief::observe(double accel) {
  if (!std::isfinite(accel)) {
    throw ContractError("belief: non-finite acceleration");
  }
  counts_[bin_of(accel)] += 1.0;
}

AccelerationBelief update_belief(AccelerationBelief belief,
                                 double observed_accel) {
  belief.observe(observed_accel);
  return belief;
}

double entropy(const AccelerationBelief& belief) {
  double h = 0.0;
  for (double p : belief.probabilities()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  // Rounding can push a uniform posterior a hair outside [0, ln K].
  return std::clamp(h, 0.0, std::log(static_cast<double>(belief.bin_count())));
}

}  // namespace easter
