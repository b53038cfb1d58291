#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "easter/policy.hpp"
#include "easter/scenario.hpp"
#include "easter/sim.hpp"

namespace easter {

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single run
};

struct PolicyAggregate {
  std::string policy;
  std::size_t runs = 0;
  std::size_t completed = 0;
  MetricStats travel_time;
  MetricStats mean_headway;
  MetricStats lane_changes;
  MetricStats plan_ms_mean;
  double plan_ms_p99 = 0.0;  // worst per-run p99
};

struct RunReport {
  std::string scenario;
  std::vector<std::uint64_t> seeds;
  // Paths relative to the output directory.
  std::vector<std::string> files;
  std::vector<RunSummary> runs;
  std::vector<PolicyAggregate> aggregate;

  std::string to_json() const;
};

MetricStats stats(const std::vector<double>& values);
std::vector<PolicyAggregate> aggregate(const std::vector<RunSummary>& runs);

struct HarnessOptions {
  bool timing = true;
  int jobs = 1;
};

// One simulation; writes <policy>_seed<seed>.csv/.json and report.json.
RunReport cmd_run(const ScenarioConfig& config, PolicyKind policy,
                  std::uint64_t seed, const std::filesystem::path& out_dir,
                  const HarnessOptions& options = {});

// All three policies on seeds base_seed .. base_seed + n_runs - 1. Per-run
// files go to runs/, the aggregate to aggregate.csv and report.json.
RunReport cmd_montecarlo(const ScenarioConfig& config, int n_runs,
                         std::uint64_t base_seed,
                         const std::filesystem::path& out_dir,
                         const HarnessOptions& options = {});

// Projection and search on the scenario's initial snapshot, as JSON.
std::string search_dump(const ScenarioConfig& config, std::uint64_t seed);
void cmd_search_dump(const ScenarioConfig& config, std::uint64_t seed,
                     const std::filesystem::path& out_path);

}  // namespace easter
