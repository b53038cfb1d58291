#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "easter/cost.hpp"
#include "easter/graph.hpp"

namespace easter {

// How the search identifies "the same node".
enum class SearchMode {
  // Lattice node plus the number of lane changes taken to reach it. The
  // transition time t_n is a function of (column, lane changes), so every
  // search state has a single well-defined t_n and edge costs depend on the
  // state alone.
  TimeExpanded,
  // One record per lattice node; t_n is whatever the lowest-g parent gave it.
  Lattice,
};

struct SearchOptions {
  SearchMode mode = SearchMode::TimeExpanded;
};

struct SearchRecord {
  Node node;
  int lane_changes = 0;
  double f = 0.0;
  double g = 0.0;
  double h = 0.0;
  double t = 0.0;  // transition time from the start, seconds
  std::optional<std::size_t> parent;
  CostBreakdown breakdown;  // step cost into this node
  bool closed = false;
};

struct Path {
  std::vector<Node> nodes;  // start first
  std::vector<CostBreakdown> breakdowns;
  std::vector<double> times;
  double g = 0.0;           // accumulated step cost at the goal
  double total_cost = 0.0;  // f at the goal: g + h(goal)
  Node goal;
  std::size_t expansions = 0;
};

struct SearchResult {
  Path path;
  std::vector<SearchRecord> records;  // every generated state
};

// Best-first search from the lattice start until the first surrogate goal is
// closed. Throws InvariantError if the open list drains without a goal.
SearchResult extended_astar_full(const CostModel& model,
                                 const SearchOptions& options = {});
Path extended_astar(const CostModel& model, const SearchOptions& options = {});

// Parent-chain walk from records[goal_index] back to the root.
Path reconstruct(std::span<const SearchRecord> records, std::size_t goal_index);

struct AdmissibilityViolation {
  Node node;
  int lane_changes = 0;
  double t = 0.0;
  double heuristic = 0.0;
  double cost_to_go = 0.0;
};

struct AdmissibilityReport {
  std::size_t states_checked = 0;
  double lambda_goal = 0.0;
  // lambda_goal <= lambda_lng makes the heuristic consistent for every scene.
  bool sufficient_condition = true;
  std::string offending_term;  // empty when there are no violations
  std::vector<AdmissibilityViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Compares h against the exact optimal cost-to-go of every reachable search
// state, obtained by backward dynamic programming over the time-expanded DAG.
// Cost-to-go at a surrogate goal is h(goal) itself (the goals feed a zero-cost
// pseudo goal, so the objective at termination is f = g + h).
AdmissibilityReport verify_admissibility(const CostModel& model,
                                         double tolerance = 1e-9);

}  // namespace easter
