#include "easter/policy.hpp"

#include <cmath>

#include "easter/baselines.hpp"

namespace easter {

namespace {
constexpr double kSettledTolerance = 0.05;  // metres from the lane centre
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Easter: return "easter";
    case PolicyKind::Mobil: return "mobil";
    case PolicyKind::NoChange: return "nochange";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  for (const auto k :
       {PolicyKind::Easter, PolicyKind::Mobil, PolicyKind::NoChange}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

EasterPolicy::EasterPolicy(PlannerConfig config)
    : selector_(std::move(config)) {}

int EasterPolicy::decide(const WorldState& world) {
  last_ = selector_.select(world);
  return last_.target_lane;
}

MobilPolicy::MobilPolicy(IdmParams ego_idm, MobilParams params,
                         double vehicle_length)
    : idm_(ego_idm), params_(params), length_(vehicle_length) {
  idm_.validate();
  params_.validate();
}

int MobilPolicy::decide(const WorldState& world) {
  const ProjectedScene scene = project_scene(world, std::nullopt);
  if (committed_) {
    if (std::abs(scene.ego_lat_raw - scene.lane_center(*committed_)) >
        kSettledTolerance) {
      return *committed_;
    }
    committed_.reset();
  }
  const int target = mobil_decide(scene, idm_, params_, length_);
  if (target != scene.ego_lane) committed_ = target;
  return target;
}

int NoChangePolicy::decide(const WorldState& world) {
  return nochange_decide(project_scene(world, std::nullopt));
}

std::unique_ptr<Policy> make_policy(PolicyKind kind,
                                    const ScenarioConfig& config) {
  switch (kind) {
    case PolicyKind::Easter:
      return std::make_unique<EasterPolicy>(config.effective_planner());
    case PolicyKind::Mobil:
      return std::make_unique<MobilPolicy>(config.ego_idm(), config.mobil,
                                           config.vehicle_length);
    case PolicyKind::NoChange:
      return std::make_unique<NoChangePolicy>();
  }
  return nullptr;
}

}  // namespace easter
