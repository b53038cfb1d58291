#include "easter/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "easter/error.hpp"

namespace easter {

namespace {

struct OpenEntry {
  double f;
  double h;
  bool lane_change;
  int lane;
  std::size_t state;
  double g;
};

// Lowest f first; ties prefer lower h, then keep-lane, then the lower lane.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.lane_change != b.lane_change) return a.lane_change;
    if (a.lane != b.lane) return a.lane > b.lane;
    return a.state > b.state;
  }
};

class StateSpace {
 public:
  StateSpace(const Lattice& lattice, SearchMode mode)
      : lattice_(lattice),
        layers_(mode == SearchMode::TimeExpanded ? lattice.n_columns() + 1
                                                 : 1) {}

  std::size_t size() const { return lattice_.node_count() * layers_; }
  std::size_t index(Node n, int lane_changes) const {
    const std::size_t layer = layers_ == 1 ? 0 : lane_changes;
    return lattice_.index(n) * layers_ + layer;
  }

 private:
  const Lattice& lattice_;
  std::size_t layers_;
};

constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();

}  // namespace

SearchResult extended_astar_full(const CostModel& model,
                                 const SearchOptions& options) {
  const Lattice& lattice = model.lattice();
  const StateSpace space(lattice, options.mode);

  SearchResult result;
  auto& records = result.records;
  std::vector<std::size_t> record_of(space.size(), kUnseen);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  {
    SearchRecord root;
    root.node = lattice.start();
    root.h = model.heuristic(root.node);
    root.f = root.h;
    root.breakdown.heuristic = root.h;
    record_of[space.index(root.node, 0)] = 0;
    records.push_back(root);
    open.push({root.f, root.h, false, root.node.lane,
               space.index(root.node, 0), 0.0});
  }

  std::size_t expansions = 0;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t current = record_of[top.state];
    if (records[current].closed || top.g != records[current].g) continue;

    records[current].closed = true;
    ++expansions;
    // Copy: push_back below may reallocate.
    const SearchRecord cur = records[current];
    if (lattice.is_goal(cur.node)) {
      result.path = reconstruct(records, current);
      result.path.expansions = expansions;
      return result;
    }

    for (const Node next : lattice.successors(cur.node)) {
      const bool change = next.lane != cur.node.lane;
      const int k = cur.lane_changes + (change ? 1 : 0);
      const std::size_t state = space.index(next, k);
      std::size_t slot = record_of[state];
      if (slot != kUnseen && records[slot].closed) continue;

      const CostModel::Step step = model.step(cur.node, next, cur.t);
      const double g = cur.g + step.breakdown.step();
      if (slot != kUnseen && !(g < records[slot].g)) continue;

      if (slot == kUnseen) {
        slot = records.size();
        record_of[state] = slot;
        records.emplace_back();
      }
      SearchRecord& rec = records[slot];
      rec.node = next;
      rec.lane_changes = k;
      rec.g = g;
      rec.h = step.breakdown.heuristic;
      rec.f = rec.g + rec.h;
      rec.t = cur.t + step.travel_time;
      rec.parent = current;
      rec.breakdown = step.breakdown;
      open.push({rec.f, rec.h, change, next.lane, state, rec.g});
    }
  }
  throw InvariantError("extended A*: open list exhausted before any goal");
}

Path extended_astar(const CostModel& model, const SearchOptions& options) {
  return extended_astar_full(model, options).path;
}

Path reconstruct(std::span<const SearchRecord> records,
                 std::size_t goal_index) {
  if (goal_index >= records.size()) {
    throw InvariantError("reconstruct: goal index out of range");
  }
  std::vector<std::size_t> chain;
  std::optional<std::size_t> at = goal_index;
  while (at) {
    if (*at >= records.size() || chain.size() > records.size()) {
      throw InvariantError("reconstruct: broken parent chain");
    }
    chain.push_back(*at);
    at = records[*at].parent;
  }
  std::reverse(chain.begin(), chain.end());

  Path path;
  const SearchRecord& goal = records[goal_index];
  path.goal = goal.node;
  path.g = goal.g;
  path.total_cost = goal.f;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const SearchRecord& r = records[chain[i]];
    if (i > 0) {
      const Node prev = path.nodes.back();
      if (r.node.column != prev.column + 1 ||
          std::abs(r.node.lane - prev.lane) > 1) {
        throw InvariantError("reconstruct: parent chain is not a lattice path");
      }
    }
    path.nodes.push_back(r.node);
    path.breakdowns.push_back(r.breakdown);
    path.times.push_back(r.t);
  }
  return path;
}

AdmissibilityReport verify_admissibility(const CostModel& model,
                                         double tolerance) {
  const Lattice& lattice = model.lattice();
  const StateSpace space(lattice, SearchMode::TimeExpanded);
  const double inf = std::numeric_limits<double>::infinity();

  // Forward pass: reachable states and their transition times, column by
  // column (every edge advances exactly one column).
  std::vector<char> reachable(space.size(), 0);
  std::vector<double> t_of(space.size(), 0.0);
  reachable[space.index(lattice.start(), 0)] = 1;
  for (int c = 0; c < lattice.n_columns(); ++c) {
    for (int lane = 1; lane <= lattice.n_lanes(); ++lane) {
      for (int k = 0; k <= c; ++k) {
        const Node n{c, lane};
        const std::size_t s = space.index(n, k);
        if (!reachable[s]) continue;
        for (const Node next : lattice.successors(n)) {
          const int k2 = k + (next.lane != lane ? 1 : 0);
          const std::size_t s2 = space.index(next, k2);
          if (!reachable[s2]) {
            reachable[s2] = 1;
            t_of[s2] = t_of[s] +
                       travel_time(lattice, n, next, model.context().speed);
          }
        }
      }
    }
  }

  // Backward pass.
  std::vector<double> cost_to_go(space.size(), inf);
  for (int c = lattice.n_columns(); c >= 0; --c) {
    for (int lane = 1; lane <= lattice.n_lanes(); ++lane) {
      for (int k = 0; k <= c; ++k) {
        const Node n{c, lane};
        const std::size_t s = space.index(n, k);
        if (!reachable[s]) continue;
        if (lattice.is_goal(n)) {
          cost_to_go[s] = model.heuristic(n);
          continue;
        }
        double best = inf;
        for (const Node next : lattice.successors(n)) {
          const int k2 = k + (next.lane != lane ? 1 : 0);
          const double edge = model.step(n, next, t_of[s]).breakdown.step();
          best = std::min(best, edge + cost_to_go[space.index(next, k2)]);
        }
        cost_to_go[s] = best;
      }
    }
  }

  AdmissibilityReport report;
  report.lambda_goal = model.context().lambda_goal;
  report.sufficient_condition =
      report.lambda_goal <= model.weights().lambda_lng;
  for (int c = 0; c <= lattice.n_columns(); ++c) {
    for (int lane = 1; lane <= lattice.n_lanes(); ++lane) {
      for (int k = 0; k <= c; ++k) {
        const Node n{c, lane};
        const std::size_t s = space.index(n, k);
        if (!reachable[s]) continue;
        ++report.states_checked;
        const double h = model.heuristic(n);
        if (h > cost_to_go[s] + tolerance) {
          report.violations.push_back({n, k, t_of[s], h, cost_to_go[s]});
        }
      }
    }
  }
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "goal-distance heuristic (lambda_goal=" << report.lambda_goal
        << ", lambda_lng=" << model.weights().lambda_lng << ")";
    report.offending_term = msg.str();
  }
  return report;
}

}  // namespace easter
