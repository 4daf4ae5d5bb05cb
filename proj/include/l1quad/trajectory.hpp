#pragma once

#include <string>

#include "l1quad/geometric_controller.hpp"

namespace l1quad {

/// Constant position and yaw, all derivatives zero.
Trajectory trajectory_hover(const Vec3& position, double yaw = 0.0);

/// Horizontal circle of `radius` around (0, 0, -altitude) at constant `speed`,
/// starting at (radius, 0, -altitude).
Trajectory trajectory_circle(double radius, double speed, double altitude);

/// x = 2 sin(vt/2.51), y = 1.5 sin(2vt/2.51), z = 0.2 sin(vt/2.51) - 1 (NED, so z = -1 is 1 m up).
Trajectory trajectory_figure8(double v_max);

/// Wraps a position-only reference and fills velocity through snap with 5-point
/// central differences of step h (O(h^4) truncation).
Trajectory trajectory_from_samples(std::function<Vec3(double)> position, double yaw, double h);

/// Serializable description of one of the built-in references.
struct TrajectorySpec {
  enum class Kind { Hover, Circle, Figure8 };
  Kind kind = Kind::Hover;
  Vec3 position = Vec3(0.0, 0.0, -1.0);  // hover point
  double yaw = 0.0;
  double radius = 1.0;
  double speed = 0.0;
  double altitude = 1.0;
  double v_max = 1.0;
};

Trajectory make_trajectory(const TrajectorySpec& spec);
std::string to_string(TrajectorySpec::Kind kind);

}  // namespace l1quad
