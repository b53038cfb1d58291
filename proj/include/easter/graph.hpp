#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <vector>

#include "easter/frame.hpp"

namespace easter {

// Lattice vertex. Columns count longitudinal steps ahead of the ego (0 is the
// ego's own position); lanes are 1-based from the left.
struct Node {
  int column = 0;
  int lane = 1;

  friend auto operator<=>(const Node&, const Node&) = default;
};

struct LatticeParams {
  int horizon = 10;          // columns ahead of the start node
  double step_time = 1.0;    // seconds per column at the planning speed
  double speed_floor = 1.0;  // m/s, keeps the column spacing positive
};

// Fixed-capacity successor list: at most left / keep / right.
class Successors {
 public:
  void push(Node n) { items_[count_++] = n; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  const Node& operator[](std::size_t i) const { return items_[i]; }
  const Node* begin() const { return items_.data(); }
  const Node* end() const { return items_.data() + count_; }

 private:
  std::array<Node, 3> items_{};
  std::size_t count_ = 0;
};

class Lattice {
 public:
  Lattice(int n_lanes, int n_columns, double dx, double lane_width,
          Node start);

  int n_lanes() const { return n_lanes_; }
  int n_columns() const { return n_columns_; }
  double dx() const { return dx_; }
  double lane_width() const { return lane_width_; }
  const Node& start() const { return start_; }

  bool contains(Node n) const {
    return n.column >= 0 && n.column <= n_columns_ && n.lane >= 1 &&
           n.lane <= n_lanes_;
  }
  bool is_goal(Node n) const { return n.column == n_columns_; }

  // Projected-frame position of a node, metres.
  Vec2 position(Node n) const {
    return {n.column * dx_, (n.lane - 1) * lane_width_};
  }

  Successors successors(Node n) const;
  std::vector<Node> surrogate_goals() const;

  std::size_t node_count() const {
    return static_cast<std::size_t>(n_columns_ + 1) * n_lanes_;
  }
  std::size_t index(Node n) const {
    return static_cast<std::size_t>(n.column) * n_lanes_ + (n.lane - 1);
  }

 private:
  int n_lanes_;
  int n_columns_;
  double dx_;
  double lane_width_;
  Node start_;
};

// Euclidean node distance in the projected frame.
double node_distance(const Lattice& lattice, Node a, Node b);

// Speed-scaled lattice anchored at the ego's snapped lane. Throws ConfigError
// when the horizon cannot reach every lane end (horizon < lanes - 1) or when
// horizon / step time are non-positive.
Lattice build_lattice(const ProjectedScene& scene, double ego_speed,
                      const LatticeParams& params = {});

}  // namespace easter
