#pragma once

#include <cstddef>
#include <deque>
#include <string_view>
#include <vector>

#include "easter/frame.hpp"

namespace easter {

// One timestamped observation of a vehicle. Positions are in whatever frame
// the owner of the history chooses; predictors preserve that frame.
struct Observation {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;  // metres
  double v = 0.0;
  double heading = 0.0;
  double accel = 0.0;
};

// Last N+1 observations of one vehicle, oldest first.
class TrajectoryHistory {
 public:
  explicit TrajectoryHistory(std::size_t capacity = 11);

  // Throws ContractError unless obs.t is strictly later than the newest entry.
  void push(const Observation& obs);

  bool empty() const { return buf_.empty(); }
  std::size_t size() const { return buf_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Observation& latest() const;
  const std::deque<Observation>& observations() const { return buf_; }

  // Copy with every position translated by (-dx, -dy).
  TrajectoryHistory shifted(double dx, double dy) const;

 private:
  std::size_t capacity_;
  std::deque<Observation> buf_;
};

// Any model mapping an observation history to a position t_n seconds after
// the newest observation. Implementations must be safe to call concurrently
// and must return the newest observed position for t_n == 0.
class PredictionModel {
 public:
  virtual ~PredictionModel() = default;
  virtual Vec2 predict(const TrajectoryHistory& history, double t_n) const = 0;
  virtual std::string_view name() const = 0;
};

Vec2 predict_constant_velocity(const Observation& obs, double t_n);

class ConstantVelocityModel final : public PredictionModel {
 public:
  Vec2 predict(const TrajectoryHistory& history, double t_n) const override;
  std::string_view name() const override { return "constant_velocity"; }
};

// Dirichlet posterior over binned accelerations. `edges` are the K-1
// interior bin boundaries; values below the first edge land in bin 0 and
// values at or above the last edge land in bin K-1.
class AccelerationBelief {
 public:
  AccelerationBelief(std::vector<double> edges, double prior_count);

  // Seven bins: hard brake / brake / mild brake / coast / mild accel /
  // accel / hard accel, Laplace prior.
  static AccelerationBelief standard();

  std::size_t bin_count() const { return counts_.size(); }
  std::size_t bin_of(double accel) const;
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& counts() const { return counts_; }
  double total() const;
  std::vector<double> probabilities() const;

  void observe(double accel);

 private:
  std::vector<double> edges_;
  std::vector<double> counts_;
};

// Conjugate update: returns a copy with the matching bin incremented.
AccelerationBelief update_belief(AccelerationBelief belief,
                                 double observed_accel);

// Shannon entropy of the posterior mean, in nats.
double entropy(const AccelerationBelief& belief);

}  // namespace easter
