#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "easter/frame.hpp"
#include "easter/scenario.hpp"
#include "easter/selector.hpp"

namespace easter {

enum class PolicyKind { Easter, Mobil, NoChange };

std::string_view to_string(PolicyKind kind);
// Accepts "easter", "mobil" and "nochange".
std::optional<PolicyKind> parse_policy(std::string_view name);

// Lane-decision policy driven by the simulator once per tick.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  // Target lane (1-based) for the current world snapshot.
  virtual int decide(const WorldState& world) = 0;
};

class EasterPolicy final : public Policy {
 public:
  explicit EasterPolicy(PlannerConfig config);
  PolicyKind kind() const override { return PolicyKind::Easter; }
  int decide(const WorldState& world) override;
  const LaneDecision& last() const { return last_; }

 private:
  LaneSelector selector_;
  LaneDecision last_;
};

// MOBIL with commitment: once a lane change starts, the target is held until
// the ego is centred in it.
class MobilPolicy final : public Policy {
 public:
  MobilPolicy(IdmParams ego_idm, MobilParams params, double vehicle_length);
  PolicyKind kind() const override { return PolicyKind::Mobil; }
  int decide(const WorldState& world) override;

 private:
  IdmParams idm_;
  MobilParams params_;
  double length_;
  std::optional<int> committed_;
};

class NoChangePolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::NoChange; }
  int decide(const WorldState& world) override;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind,
                                    const ScenarioConfig& config);

}  // namespace easter
