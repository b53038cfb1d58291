#pragma once

#include <optional>
#include <span>
#include <vector>

namespace easter {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Vec2 a, Vec2 b);

// Absolute-frame vehicle observation. `heading` is measured relative to the
// road angle, `accel` is the most recent observed longitudinal acceleration.
struct VehicleState {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double heading = 0.0;
  double accel = 0.0;
};

// Lane centre lines of a straight road segment, expressed as lateral offsets
// in the rotated (Eastbound) frame. Lane 1 is the leftmost lane and comes
// first; offsets are strictly increasing with uniform spacing.
struct LaneGeometry {
  std::vector<double> centerline_offsets;

  int count() const { return static_cast<int>(centerline_offsets.size()); }
  double width() const;
};

struct WorldState {
  VehicleState ego;
  std::vector<VehicleState> others;
  LaneGeometry lanes;
  double road_angle = 0.0;
  Vec2 goal;
  double time_now = 0.0;

  // Throws ConfigError when lane geometry or vehicle states are malformed.
  void validate() const;
};

struct ProjectedVehicle {
  int id = 0;
  double x = 0.0;          // metres, relative to the ego
  double lat_lanes = 0.0;  // lane widths from the leftmost lane centre
  double v = 0.0;
  double heading = 0.0;
};

// Ego-relative scene. Longitudinal positions are shifted so that the ego sits
// at x = 0; lateral positions are measured from the leftmost lane centre.
struct ProjectedScene {
  int lane_count = 0;
  double lane_width = 0.0;

  int ego_lane = 1;          // j*, 1-based from the left
  double ego_lat = 0.0;      // snapped: (j* - 1) * lane_width
  double ego_lat_raw = 0.0;  // continuous lateral position of the ego
  double ego_offset_delta = 0.0;
  double ego_speed = 0.0;

  Vec2 goal;  // projected goal position
  std::vector<ProjectedVehicle> others;

  // Rotated-frame origin used for the shift; needed to bring longer-lived
  // data (trajectory histories) into this scene's frame.
  double origin_x = 0.0;
  double lane1_y = 0.0;

  double lane_center(int lane) const { return (lane - 1) * lane_width; }
  // Nearest lane of a lateral position given in metres.
  int lane_of(double lat_m) const;
};

// Rotation onto the Eastbound frame. The matrix has determinant -1, so it is
// its own inverse.
Vec2 rotate(double x, double y, double psi);

// 1-based index of the lane centre closest to `y_r`; ties resolve to the
// smaller index. Throws ConfigError on an empty list.
int nearest_lane(double y_r, std::span<const double> lane_offsets);

ProjectedScene project_scene(const WorldState& world,
                             std::optional<double> prev_target_lat);

}  // namespace easter
