#include "easter/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "easter/error.hpp"

namespace easter {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

std::string csv_text(const MetricsLog& log) {
  std::ostringstream out;
  write_csv(log, out);
  return out.str();
}

std::string run_stem(PolicyKind policy, std::uint64_t seed) {
  return std::string(to_string(policy)) + "_seed" + std::to_string(seed);
}

ojson summary_object(const RunSummary& s) {
  return ojson::parse(summary_json(s));
}

ojson stats_object(const MetricStats& m) {
  return {{"mean", m.mean}, {"std", m.std}};
}

ojson breakdown_object(const CostBreakdown& b) {
  return {{"control", b.control},
          {"time", b.time},
          {"risk_adjacency", b.risk_adjacency},
          {"risk_uncertainty", b.risk_uncertainty},
          {"switching", b.switching},
          {"goal_distance", b.goal_distance},
          {"heuristic", b.heuristic},
          {"step", b.step()}};
}

ojson node_object(Node n) {
  return {{"column", n.column}, {"lane", n.lane}};
}

}  // namespace

MetricStats stats(const std::vector<double>& values) {
  MetricStats m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return m;
}

std::vector<PolicyAggregate> aggregate(const std::vector<RunSummary>& runs) {
  std::vector<PolicyAggregate> out;
  for (const auto kind :
       {PolicyKind::Easter, PolicyKind::Mobil, PolicyKind::NoChange}) {
    const std::string name(to_string(kind));
    std::vector<double> tt, hw, lc, pm;
    PolicyAggregate a;
    a.policy = name;
    for (const auto& r : runs) {
      if (r.policy != name) continue;
      ++a.runs;
      if (r.completed) ++a.completed;
      tt.push_back(r.travel_time);
      hw.push_back(r.mean_headway);
      lc.push_back(r.lane_changes);
      pm.push_back(r.plan_ms_mean);
      a.plan_ms_p99 = std::max(a.plan_ms_p99, r.plan_ms_p99);
    }
    if (a.runs == 0) continue;
    a.travel_time = stats(tt);
    a.mean_headway = stats(hw);
    a.lane_changes = stats(lc);
    a.plan_ms_mean = stats(pm);
    out.push_back(a);
  }
  return out;
}

std::string RunReport::to_json() const {
  ojson j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["scenario"] = scenario;
  j["seeds"] = seeds;
  j["files"] = files;
  j["summary"] = ojson::array();
  for (const auto& a : aggregate) {
    j["summary"].push_back({{"policy", a.policy},
                            {"runs", a.runs},
                            {"completed", a.completed},
                            {"travel_time", stats_object(a.travel_time)},
                            {"mean_headway", stats_object(a.mean_headway)},
                            {"lane_changes", stats_object(a.lane_changes)},
                            {"plan_ms_mean", stats_object(a.plan_ms_mean)},
                            {"plan_ms_p99", a.plan_ms_p99}});
  }
  j["runs"] = ojson::array();
  for (const auto& r : runs) j["runs"].push_back(summary_object(r));
  return j.dump(2) + "\n";
}

RunReport cmd_run(const ScenarioConfig& config, PolicyKind policy,
                  std::uint64_t seed, const fs::path& out_dir,
                  const HarnessOptions& options) {
  config.validate();
  fs::create_directories(out_dir);
  const MetricsLog log = run(config, policy, seed, {options.timing});

  RunReport report;
  report.scenario = config.name;
  report.seeds = {seed};
  const std::string stem = run_stem(policy, seed);
  write_file(out_dir / (stem + ".csv"), csv_text(log));
  write_file(out_dir / (stem + ".json"), summary_json(log.summary));
  report.files = {stem + ".csv", stem + ".json", "report.json"};
  report.runs = {log.summary};
  report.aggregate = aggregate(report.runs);
  write_file(out_dir / "report.json", report.to_json());
  return report;
}

RunReport cmd_montecarlo(const ScenarioConfig& config, int n_runs,
                         std::uint64_t base_seed, const fs::path& out_dir,
                         const HarnessOptions& options) {
  config.validate();
  if (n_runs < 1) throw ConfigError("montecarlo: runs must be >= 1");
  if (options.jobs < 1) throw ConfigError("montecarlo: jobs must be >= 1");
  fs::create_directories(out_dir / "runs");

  constexpr PolicyKind kinds[] = {PolicyKind::Easter, PolicyKind::Mobil,
                                  PolicyKind::NoChange};
  const std::size_t total = static_cast<std::size_t>(n_runs) * 3;
  std::vector<RunSummary> summaries(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::uint64_t seed = base_seed + job / 3;
      const PolicyKind kind = kinds[job % 3];
      try {
        const MetricsLog log = run(config, kind, seed, {options.timing});
        const fs::path stem = out_dir / "runs" / run_stem(kind, seed);
        write_file(stem.string() + ".csv", csv_text(log));
        write_file(stem.string() + ".json", summary_json(log.summary));
        summaries[job] = log.summary;
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(options.jobs, static_cast<int>(total));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  RunReport report;
  report.scenario = config.name;
  for (int i = 0; i < n_runs; ++i) report.seeds.push_back(base_seed + i);
  for (std::size_t job = 0; job < total; ++job) {
    const std::string stem =
        "runs/" + run_stem(kinds[job % 3], base_seed + job / 3);
    report.files.push_back(stem + ".csv");
    report.files.push_back(stem + ".json");
  }
  report.files.push_back("aggregate.csv");
  report.files.push_back("report.json");
  report.runs = std::move(summaries);
  report.aggregate = aggregate(report.runs);

  std::ostringstream csv;
  csv << "policy,runs,completed,travel_time_mean,travel_time_std,"
         "mean_headway_mean,mean_headway_std,lane_changes_mean,"
         "lane_changes_std,plan_ms_mean,plan_ms_std,plan_ms_p99\n";
  for (const auto& a : report.aggregate) {
    csv << a.policy << ',' << a.runs << ',' << a.completed << ','
        << ojson(a.travel_time.mean).dump() << ','
        << ojson(a.travel_time.std).dump() << ','
        << ojson(a.mean_headway.mean).dump() << ','
        << ojson(a.mean_headway.std).dump() << ','
        << ojson(a.lane_changes.mean).dump() << ','
        << ojson(a.lane_changes.std).dump() << ','
        << ojson(a.plan_ms_mean.mean).dump() << ','
        << ojson(a.plan_ms_mean.std).dump() << ','
        << ojson(a.plan_ms_p99).dump() << '\n';
  }
  write_file(out_dir / "aggregate.csv", csv.str());
  write_file(out_dir / "report.json", report.to_json());
  return report;
}

std::string search_dump(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const SimState state = spawn_traffic(config, rng);
  const WorldState world = to_world(state, config);
  const PlannerConfig planner = config.effective_planner();
  const ConstantVelocityModel model;
  SelectorState selector_state;
  const auto snap = prepare_cycle(world, selector_state, planner, model);
  const CostModel costs = snap->cost_model();
  const SearchResult result = extended_astar_full(costs, planner.search);
  const Lattice& lattice = *snap->lattice;
  const ProjectedScene& scene = snap->scene;

  ojson j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["scenario"] = config.name;
  j["seed"] = seed;
  j["lattice"] = {{"n_lanes", lattice.n_lanes()},
                  {"n_columns", lattice.n_columns()},
                  {"dx", lattice.dx()},
                  {"lane_width", lattice.lane_width()},
                  {"start", node_object(lattice.start())}};
  const PlanningContext& ctx = snap->context;
  j["context"] = {{"speed", ctx.speed},
                  {"lambda_goal", ctx.lambda_goal},
                  {"goal", {{"x", ctx.goal.x}, {"y", ctx.goal.y}}},
                  {"delta", ctx.delta}};
  j["context"]["prev_target_lat"] =
      ctx.prev_target_lat ? ojson(*ctx.prev_target_lat) : ojson(nullptr);

  ojson vehicles = ojson::array();
  for (std::size_t i = 0; i < scene.others.size(); ++i) {
    const auto& o = scene.others[i];
    vehicles.push_back({{"id", o.id},
                        {"x", o.x},
                        {"lat", o.lat_lanes * scene.lane_width},
                        {"v", o.v},
                        {"entropy", snap->prediction->entropy(i)}});
  }
  j["scene"] = {{"ego_lane", scene.ego_lane},
                {"ego_lat", scene.ego_lat},
                {"ego_speed", scene.ego_speed},
                {"vehicles", vehicles}};

  ojson nodes = ojson::array();
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    nodes.push_back({{"index", i},
                     {"column", r.node.column},
                     {"lane", r.node.lane},
                     {"lane_changes", r.lane_changes},
                     {"f", r.f},
                     {"g", r.g},
                     {"h", r.h},
                     {"t", r.t},
                     {"parent", r.parent ? ojson(*r.parent) : ojson(nullptr)},
                     {"closed", r.closed},
                     {"breakdown", breakdown_object(r.breakdown)}});
  }
  j["nodes"] = nodes;

  ojson predictions = ojson::array();
  for (int c = 0; c <= lattice.n_columns(); ++c) {
    const double t = c * lattice.dx() / ctx.speed;
    ojson list = ojson::array();
    for (const auto& p : snap->prediction->at(t)) {
      list.push_back(
          {{"id", p.id}, {"x", p.pos.x}, {"y", p.pos.y}, {"lane", p.lane}});
    }
    predictions.push_back({{"column", c}, {"t", t}, {"vehicles", list}});
  }
  j["predictions"] = predictions;

  const Path& path = result.path;
  ojson steps = ojson::array();
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    steps.push_back({{"column", path.nodes[i].column},
                     {"lane", path.nodes[i].lane},
                     {"t", path.times[i]},
                     {"breakdown", breakdown_object(path.breakdowns[i])}});
  }
  j["path"] = {{"nodes", steps},
               {"g", path.g},
               {"total_cost", path.total_cost},
               {"goal", node_object(path.goal)},
               {"expansions", path.expansions},
               {"first_transition_lane",
                target_from_path(path, scene.ego_lane)}};
  return j.dump(2) + "\n";
}

void cmd_search_dump(const ScenarioConfig& config, std::uint64_t seed,
                     const fs::path& out_path) {
  const std::string doc = search_dump(config, seed);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_file(out_path, doc);
}

}  // namespace easter
