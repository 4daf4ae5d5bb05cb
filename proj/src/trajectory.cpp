#include "l1quad/trajectory.hpp"

#include <cmath>

#include "l1quad/errors.hpp"

namespace l1quad {

Trajectory trajectory_hover(const Vec3& position, double yaw) {
  return [position, yaw](double) {
    TrajectoryPoint p;
    p.position = position;
    p.yaw = yaw;
    return p;
  };
}

Trajectory trajectory_circle(double radius, double speed, double altitude) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "circle radius must be positive");
  if (!(speed >= 0.0)) throw Error(ErrorCode::InvalidArgument, "circle speed must be non-negative");
  const double w = speed / radius;
  const Vec3 center(0.0, 0.0, -altitude);
  return [=](double t) {
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    TrajectoryPoint p;
    p.position = center + radius * Vec3(c, s, 0.0);
    p.velocity = radius * w * Vec3(-s, c, 0.0);
    p.acceleration = -radius * w * w * Vec3(c, s, 0.0);
    p.jerk = radius * w * w * w * Vec3(s, -c, 0.0);
    p.snap = radius * w * w * w * w * Vec3(c, s, 0.0);
    return p;
  };
}

Trajectory trajectory_figure8(double v_max) {
  if (!(v_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "figure-8 speed must be non-negative");
  const double a = v_max / 2.51;
  return [a](double t) {
    // Each axis is amp * sin(k a t) (+ offset); the n-th derivative is amp (k a)^n sin(k a t + n pi/2).
    auto axis = [t, a](double amp, double k, int order) {
      const double w = k * a;
      const double phase = w * t;
      switch (order) {
        case 0: return amp * std::sin(phase);
        case 1: return amp * w * std::cos(phase);
        case 2: return -amp * w * w * std::sin(phase);
        case 3: return -amp * w * w * w * std::cos(phase);
        default: return amp * w * w * w * w * std::sin(phase);
      }
    };
    auto vec = [&](int order) { return Vec3(axis(2.0, 1.0, order), axis(1.5, 2.0, order), axis(0.2, 1.0, order)); };
    TrajectoryPoint p;
    p.position = vec(0) + Vec3(0.0, 0.0, -1.0);
    p.velocity = vec(1);
    p.acceleration = vec(2);
    p.jerk = vec(3);
    p.snap = vec(4);
    return p;
  };
}

Trajectory trajectory_from_samples(std::function<Vec3(double)> position, double yaw, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "difference step must be positive");
  return [position = std::move(position), yaw, h](double t) {
    Vec3 s[7];
    for (int i = 0; i < 7; ++i) s[i] = position(t + (i - 3) * h);
    // Offsets -3h..3h; fourth-order central stencils.
    TrajectoryPoint p;
    p.position = s[3];
    p.velocity = (s[1] - 8.0 * s[2] + 8.0 * s[4] - s[5]) / (12.0 * h);
    p.acceleration = (-s[1] + 16.0 * s[2] - 30.0 * s[3] + 16.0 * s[4] - s[5]) / (12.0 * h * h);
    p.jerk = (s[0] - 8.0 * s[1] + 13.0 * s[2] - 13.0 * s[4] + 8.0 * s[5] - s[6]) / (8.0 * h * h * h);
    p.snap = (-s[0] + 12.0 * s[1] - 39.0 * s[2] + 56.0 * s[3] - 39.0 * s[4] + 12.0 * s[5] - s[6]) /
             (6.0 * h * h * h * h);
    p.yaw = yaw;
    return p;
  };
}

Trajectory make_trajectory(const TrajectorySpec& spec) {
  switch (spec.kind) {
    case TrajectorySpec::Kind::Hover: return trajectory_hover(spec.position, spec.yaw);
    case TrajectorySpec::Kind::Circle: return trajectory_circle(spec.radius, spec.speed, spec.altitude);
    case TrajectorySpec::Kind::Figure8: return trajectory_figure8(spec.v_max);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown trajectory kind");
}

std::string to_string(TrajectorySpec::Kind kind) {
  switch (kind) {
    case TrajectorySpec::Kind::Hover: return "hover";
    case TrajectorySpec::Kind::Circle: return "circle";
    case TrajectorySpec::Kind::Figure8: return "figure8";
  }
  return "unknown";
}

}  // namespace l1quad
