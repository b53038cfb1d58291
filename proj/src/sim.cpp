#include "easter/sim.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "easter/error.hpp"
#include "easter/idm.hpp"

namespace easter {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRejections = 1000;

double lane_center(const ScenarioConfig& c, int lane) {
  return (lane - 1) * c.lane_width;
}

// Normal(mean, sd) restricted to [lo, hi] by rejection; falls back to the
// nearest bound if the window is hit too rarely.
double truncated_normal(Rng& rng, double mean, double sd, double lo,
                        double hi) {
  if (sd <= 0.0) return std::clamp(mean, lo, hi);
  std::normal_distribution<double> dist(mean, sd);
  for (int i = 0; i < kMaxRejections; ++i) {
    const double x = dist(rng);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(mean, lo, hi);
}

// Per-lane indices of background vehicles sorted by position.
std::vector<std::vector<std::size_t>> lane_order(const SimState& s,
                                                 const ScenarioConfig& c) {
  std::vector<std::vector<std::size_t>> lanes(c.n_lanes);
  for (std::size_t i = 0; i < s.others.size(); ++i) {
    lanes[s.others[i].lane - 1].push_back(i);
  }
  for (auto& l : lanes) {
    std::sort(l.begin(), l.end(), [&](std::size_t a, std::size_t b) {
      const auto& va = s.others[a];
      const auto& vb = s.others[b];
      return va.s != vb.s ? va.s < vb.s : va.id < vb.id;
    });
  }
  return lanes;
}

struct Leader {
  double s = 0.0;
  double v = 0.0;
};

// Nearest background vehicle in `order` with position >= s_min.
std::optional<Leader> first_at_or_after(const SimState& s,
                                        const std::vector<std::size_t>& order,
                                        double s_min) {
  for (const std::size_t i : order) {
    if (s.others[i].s >= s_min) return Leader{s.others[i].s, s.others[i].v};
  }
  return std::nullopt;
}

double accel_behind(double s, double v, const std::optional<Leader>& lead,
                    double length, const IdmParams& p) {
  if (!lead) return idm_accel(v, std::nullopt, 0.0, p);
  return idm_accel(v, lead->v, lead->s - s - length, p);
}

std::string number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

SimState spawn_traffic(const ScenarioConfig& c, Rng& rng) {
  c.validate();
  SimState s;
  s.ego.id = 0;
  s.ego.lane = c.ego.lane;
  s.ego.lat = lane_center(c, c.ego.lane);
  s.ego.v = c.ego.speed;
  s.ego.desired_speed = c.ego.desired_speed;
  s.ego_target_lane = c.ego.lane;

  int next_id = 1;
  if (c.vehicles) {
    for (const auto& spec : *c.vehicles) {
      const auto& lane = c.lanes[spec.lane - 1];
      SimVehicle v;
      v.id = next_id++;
      v.lane = spec.lane;
      v.s = spec.x;
      v.lat = lane_center(c, spec.lane);
      v.v = spec.v;
      v.desired_speed = spec.desired_speed.value_or(lane.mean_speed);
      v.accel_noise = spec.accel_noise.value_or(lane.accel_noise);
      s.others.push_back(v);
    }
    return s;
  }

  const double window = c.traffic_window.end - c.traffic_window.start;
  for (int j = 1; j <= c.n_lanes; ++j) {
    const auto& lane = c.lanes[j - 1];
    const int count =
        static_cast<int>(std::lround(lane.density * window / 100.0));
    if (count <= 0) continue;
    const double spacing = lane.mean_headway + c.vehicle_length;
    std::uniform_real_distribution<double> offset(0.0, spacing);
    double pos = c.traffic_window.start + offset(rng);
    for (int k = 0; k < count; ++k) {
      if (k > 0) {
        pos += c.vehicle_length +
               truncated_normal(rng, lane.mean_headway, 0.25 * lane.mean_headway,
                                c.idm.min_gap, kInf);
      }
      const double v = truncated_normal(rng, lane.mean_speed,
                                        0.1 * lane.mean_speed, 0.0,
                                        1.5 * lane.mean_speed);
      // The ego's slot is kept free.
      if (j == c.ego.lane && std::abs(pos) < c.vehicle_length + c.idm.min_gap) {
        continue;
      }
      SimVehicle veh;
      veh.id = next_id++;
      veh.lane = j;
      veh.s = pos;
      veh.lat = lane_center(c, j);
      veh.v = v;
      veh.desired_speed = lane.mean_speed;
      veh.accel_noise = lane.accel_noise;
      s.others.push_back(veh);
    }
  }
  return s;
}

std::vector<int> ego_lanes(const SimVehicle& ego, const ScenarioConfig& c) {
  std::vector<int> out;
  const double reach = 0.5 * (c.lane_width + c.vehicle_width);
  for (int j = 1; j <= c.n_lanes; ++j) {
    if (std::abs(ego.lat - lane_center(c, j)) < reach) out.push_back(j);
  }
  return out;
}

bool lane_clear(const SimState& s, int lane, const ScenarioConfig& c) {
  const auto& ego = s.ego;
  for (const auto& o : s.others) {
    if (o.lane != lane) continue;
    if (o.s >= ego.s) {
      if (o.s - ego.s < c.vehicle_length + c.idm.min_gap) return false;
    } else {
      const double closing = std::max(0.0, o.v - ego.v) * c.idm.time_headway;
      if (ego.s - o.s < c.vehicle_length + c.idm.min_gap + closing) {
        return false;
      }
    }
  }
  return true;
}

SimState step(const SimState& state, int target_lane, const ScenarioConfig& c,
              Rng& rng) {
  if (target_lane < 1 || target_lane > c.n_lanes) {
    throw ContractError("step: target lane out of range");
  }
  const double dt = c.dt;
  const double L = c.vehicle_length;
  SimState next = state;
  next.ego_target_lane = target_lane;
  const auto order = lane_order(state, c);
  const std::vector<int> occupied = ego_lanes(state.ego, c);
  const auto occupies = [&](int lane) {
    return std::find(occupied.begin(), occupied.end(), lane) != occupied.end();
  };

  // Background accelerations. Noise is drawn for every noisy vehicle in id
  // order so the random stream does not depend on the ego's behaviour.
  for (std::size_t i = 0; i < state.others.size(); ++i) {
    const SimVehicle& b = state.others[i];
    const IdmParams p = c.idm.with_desired_speed(b.desired_speed);
    std::optional<Leader> lead;
    const auto& lane = order[b.lane - 1];
    const auto me = std::find(lane.begin(), lane.end(), i);
    if (me + 1 != lane.end()) {
      const SimVehicle& l = state.others[*(me + 1)];
      lead = Leader{l.s, l.v};
    }
    if (occupies(b.lane) && state.ego.s >= b.s &&
        (!lead || state.ego.s < lead->s)) {
      lead = Leader{state.ego.s, state.ego.v};
    }
    const double a_idm = accel_behind(b.s, b.v, lead, L, p);
    double a = a_idm;
    if (b.accel_noise > 0.0) {
      std::normal_distribution<double> noise(0.0, b.accel_noise);
      a += noise(rng);
      // Close to a leader the noise may only brake harder.
      if (lead && lead->s - b.s - L < p.min_gap + b.v * p.time_headway) {
        a = std::min(a, a_idm);
      }
      a = std::clamp(a, -p.max_decel, p.max_accel);
    }
    next.others[i].accel = a;
  }

  // Ego longitudinal: the most restrictive leader over the lanes it overlaps
  // and the lane it is heading for.
  {
    const IdmParams p = c.idm.with_desired_speed(state.ego.desired_speed);
    double a = idm_accel(state.ego.v, std::nullopt, 0.0, p);
    std::vector<int> lanes = occupied;
    if (!occupies(target_lane)) lanes.push_back(target_lane);
    for (const int lane : lanes) {
      // In a lane the ego has not entered yet, vehicles alongside are not
      // leaders; the lateral gate keeps the ego out until they are gone.
      const double s_min = occupies(lane) ? state.ego.s : state.ego.s + L;
      const auto lead = first_at_or_after(state, order[lane - 1], s_min);
      a = std::min(a, accel_behind(state.ego.s, state.ego.v, lead, L, p));
    }
    next.ego.accel = a;
  }

  // Ego lateral.
  {
    const double goal = lane_center(c, target_lane);
    const double remaining = goal - state.ego.lat;
    const bool may_move = occupies(target_lane) ||
                          std::abs(remaining) < 1e-12 ||
                          lane_clear(state, target_lane, c);
    if (may_move) {
      const double stride = std::min(std::abs(remaining), c.lateral_rate * dt);
      next.ego.lat = state.ego.lat + std::copysign(stride, remaining);
      if (std::abs(goal - next.ego.lat) < 1e-9) next.ego.lat = goal;
    }
  }

  // Semi-implicit Euler: speed first, then position with the new speed.
  const auto integrate = [dt](SimVehicle& v) {
    v.v = std::max(0.0, v.v + v.accel * dt);
    v.s += v.v * dt;
  };
  for (auto& o : next.others) integrate(o);
  integrate(next.ego);
  const std::vector<double> centres = [&] {
    std::vector<double> out;
    for (int j = 1; j <= c.n_lanes; ++j) out.push_back(lane_center(c, j));
    return out;
  }();
  next.ego.lane = nearest_lane(next.ego.lat, centres);
  next.tick = state.tick + 1;
  next.clock = static_cast<double>(next.tick) * dt;

  if (!state.done && next.ego.s >= c.route_length) {
    next.done = true;
    const double moved = next.ego.s - state.ego.s;
    const double frac =
        moved > 0.0 ? (c.route_length - state.ego.s) / moved : 1.0;
    next.finish_time = state.clock + dt * std::clamp(frac, 0.0, 1.0);
  }

  if (!(min_background_gap(next, c) > 0.0)) {
    throw InvariantError("sim: background vehicles collided at t=" +
                         number(next.clock));
  }
  return next;
}

WorldState to_world(const SimState& s, const ScenarioConfig& c) {
  WorldState w;
  w.road_angle = c.road_angle;
  w.time_now = s.clock;
  for (int j = 1; j <= c.n_lanes; ++j) {
    w.lanes.centerline_offsets.push_back(lane_center(c, j));
  }
  const auto absolute = [&](const SimVehicle& v) {
    const Vec2 p = rotate(v.s, v.lat, c.road_angle);
    return VehicleState{v.id, p.x, p.y, v.v, 0.0, v.accel};
  };
  w.ego = absolute(s.ego);
  for (const auto& o : s.others) {
    if (std::abs(o.s - s.ego.s) <= c.sensor_range) {
      w.others.push_back(absolute(o));
    }
  }
  w.goal = rotate(c.exit_distance, lane_center(c, c.n_lanes), c.road_angle);
  return w;
}

double ego_headway(const SimState& s, const ScenarioConfig& c) {
  const double range = c.planner.weights.detection_range;
  double best = range;
  for (const auto& o : s.others) {
    if (o.lane != s.ego.lane || o.s < s.ego.s) continue;
    best = std::min(best, std::max(0.0, o.s - s.ego.s - c.vehicle_length));
  }
  return best;
}

double min_background_gap(const SimState& s, const ScenarioConfig& c) {
  double best = kInf;
  for (const auto& lane : lane_order(s, c)) {
    for (std::size_t k = 1; k < lane.size(); ++k) {
      best = std::min(best, s.others[lane[k]].s - s.others[lane[k - 1]].s -
                                c.vehicle_length);
    }
  }
  return best;
}

MetricsLog run(const ScenarioConfig& c, Policy& policy, std::uint64_t seed,
               const RunOptions& options) {
  Rng rng(seed);
  SimState s = spawn_traffic(c, rng);

  MetricsLog log;
  RunSummary& sum = log.summary;
  sum.scenario = c.name;
  sum.policy = std::string(to_string(policy.kind()));
  sum.seed = seed;
  sum.min_distance = kInf;
  sum.min_background_gap = min_background_gap(s, c);

  const std::size_t max_ticks =
      static_cast<std::size_t>(std::ceil(c.timeout / c.dt - 1e-9));
  std::vector<double> plan_ms;
  int last_lane = s.ego.lane;
  double headway_sum = 0.0;

  for (std::size_t tick = 0; tick < max_ticks && !s.done; ++tick) {
    const WorldState world = to_world(s, c);
    const auto started = std::chrono::steady_clock::now();
    const int target = policy.decide(world);
    const double ms =
        options.timing
            ? std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - started)
                  .count()
            : 0.0;
    plan_ms.push_back(ms);

    TickRecord r;
    r.t = s.clock;
    r.x = s.ego.s;
    r.y_lat = s.ego.lat;
    r.lane = s.ego.lane;
    r.v = s.ego.v;
    r.headway = ego_headway(s, c);
    r.decision_lane = target;
    r.plan_ms = ms;
    log.ticks.push_back(r);
    headway_sum += r.headway;

    for (const auto& o : s.others) {
      sum.min_distance =
          std::min(sum.min_distance, std::hypot(o.s - s.ego.s, o.lat - s.ego.lat));
    }
    for (const auto& o : s.others) {
      sum.max_speed_ratio =
          std::max(sum.max_speed_ratio, o.v / o.desired_speed);
    }

    s = step(s, target, c, rng);
    sum.min_background_gap =
        std::min(sum.min_background_gap, min_background_gap(s, c));
    if (s.ego.lane != last_lane) {
      ++sum.lane_changes;
      last_lane = s.ego.lane;
    }
  }

  sum.completed = s.done;
  sum.travel_time = s.done ? s.finish_time : s.clock;
  sum.ticks = log.ticks.size();
  if (!log.ticks.empty()) {
    sum.mean_headway = headway_sum / static_cast<double>(log.ticks.size());
    double total = 0.0;
    for (double m : plan_ms) total += m;
    sum.plan_ms_mean = total / static_cast<double>(plan_ms.size());
    std::vector<double> sorted = plan_ms;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(sorted.size())));
    sum.plan_ms_p99 = sorted[std::max<std::size_t>(rank, 1) - 1];
    sum.plan_ms_max = sorted.back();
  }
  if (!std::isfinite(sum.min_distance)) sum.min_distance = -1.0;
  if (!std::isfinite(sum.min_background_gap)) sum.min_background_gap = -1.0;
  return log;
}

MetricsLog run(const ScenarioConfig& c, PolicyKind kind, std::uint64_t seed,
               const RunOptions& options) {
  auto policy = make_policy(kind, c);
  return run(c, *policy, seed, options);
}

void write_csv(const MetricsLog& log, std::ostream& out) {
  out << kMetricsCsvHeader << '\n';
  for (const auto& r : log.ticks) {
    out << number(r.t) << ',' << number(r.x) << ',' << number(r.y_lat) << ','
        << r.lane << ',' << number(r.v) << ',' << number(r.headway) << ','
        << r.decision_lane << ',' << number(r.plan_ms) << '\n';
  }
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["scenario"] = s.scenario;
  j["policy"] = s.policy;
  j["seed"] = s.seed;
  j["completed"] = s.completed;
  j["travel_time"] = s.travel_time;
  j["mean_headway"] = s.mean_headway;
  j["min_distance"] = s.min_distance;
  j["min_background_gap"] = s.min_background_gap;
  j["lane_changes"] = s.lane_changes;
  j["plan_ms_mean"] = s.plan_ms_mean;
  j["plan_ms_p99"] = s.plan_ms_p99;
  j["plan_ms_max"] = s.plan_ms_max;
  j["ticks"] = s.ticks;
  j["max_speed_ratio"] = s.max_speed_ratio;
  return j.dump(2) + "\n";
}

}  // namespace easter
