// Command-line harness over the C interface.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "easter/easter.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

int exit_code(easter_status status) {
  switch (status) {
    case EASTER_OK: return 0;
    case EASTER_ERR_INTERNAL: return kExitInternal;
    default: return kExitConfig;
  }
}

int report_failure(easter_status status) {
  std::cerr << "error: " << easter_last_error() << '\n';
  return exit_code(status);
}

void print_summary(const char* report_json) {
  const auto j = nlohmann::json::parse(report_json);
  std::printf("%-9s %5s %9s %12s %12s %12s %10s %10s\n", "policy", "runs",
              "completed", "travel_s", "travel_std", "headway_m",
              "lane_chg", "plan_ms");
  for (const auto& row : j.at("summary")) {
    std::printf("%-9s %5d %9d %12.3f %12.3f %12.3f %10.2f %10.4f\n",
                row.at("policy").get<std::string>().c_str(),
                row.at("runs").get<int>(), row.at("completed").get<int>(),
                row.at("travel_time").at("mean").get<double>(),
                row.at("travel_time").at("std").get<double>(),
                row.at("mean_headway").at("mean").get<double>(),
                row.at("lane_changes").at("mean").get<double>(),
                row.at("plan_ms_mean").at("mean").get<double>());
  }
}

struct ScenarioHandle {
  easter_scenario* ptr = nullptr;
  ~ScenarioHandle() { easter_scenario_free(ptr); }
};

struct ReportHandle {
  easter_report* ptr = nullptr;
  ~ReportHandle() { easter_report_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lane-selection engine: simulation, Monte-Carlo and search dumps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", easter_version());

  std::string scenario_path;
  std::string policy = "easter";
  std::optional<std::uint64_t> seed;
  int runs = 100;
  int jobs = 1;
  std::string out;
  bool no_timing = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
  };

  auto* run = app.add_subcommand("run", "Simulate one scenario with one policy");
  add_common(run);
  run->add_option("--policy", policy, "easter, mobil or nochange")
      ->check(CLI::IsMember({"easter", "mobil", "nochange"}));
  run->add_option("--seed", seed, "Random seed (default: scenario seed)");
  run->add_option("--out", out, "Output directory")->default_val("out");
  run->add_flag("--no-timing", no_timing, "Record plan_ms as 0");

  auto* mc = app.add_subcommand("montecarlo",
                                "Run all policies over shared seeds");
  add_common(mc);
  mc->add_option("--runs", runs, "Number of seeds")
      ->check(CLI::PositiveNumber);
  mc->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "First seed (default: scenario seed)");
  mc->add_option("--out", out, "Output directory")->default_val("out");
  mc->add_flag("--no-timing", no_timing, "Record plan_ms as 0");

  auto* dump = app.add_subcommand("search-dump",
                                  "Search the initial snapshot and dump it");
  add_common(dump);
  dump->add_option("--seed", seed, "Random seed (default: scenario seed)");
  dump->add_option("--out", out, "Output JSON file")
      ->default_val("search_dump.json");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  ScenarioHandle scenario;
  if (const auto st = easter_scenario_load(scenario_path.c_str(), &scenario.ptr);
      st != EASTER_OK) {
    return report_failure(st);
  }
  const std::uint64_t the_seed =
      seed.value_or(easter_scenario_seed(scenario.ptr));
  const unsigned flags = no_timing ? EASTER_FLAG_NO_TIMING : 0u;

  if (*validate) {
    std::cout << scenario_path << ": ok\n";
    return 0;
  }
  if (*dump) {
    if (const auto st = easter_search_dump(scenario.ptr, the_seed, out.c_str());
        st != EASTER_OK) {
      return report_failure(st);
    }
    std::cout << "wrote " << out << '\n';
    return 0;
  }

  ReportHandle report;
  easter_status st = EASTER_OK;
  if (*run) {
    st = easter_run(scenario.ptr, policy.c_str(), the_seed, flags, out.c_str(),
                    &report.ptr);
  } else {
    st = easter_montecarlo(scenario.ptr, runs, the_seed, jobs, flags,
                           out.c_str(), &report.ptr);
  }
  if (st != EASTER_OK) return report_failure(st);
  print_summary(easter_report_json(report.ptr));
  std::cout << "report: " << out << "/report.json\n";
  return 0;
}
