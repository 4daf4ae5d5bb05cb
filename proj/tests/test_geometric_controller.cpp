#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "l1quad/errors.hpp"
#include "l1quad/geometric_controller.hpp"
#include "l1quad/so3.hpp"
#include "l1quad/trajectory.hpp"

using namespace l1quad;

namespace {

constexpr double kPi = std::numbers::pi;

State tracking_state(const TrajectoryPoint& tp, const VehicleParams& p, const GainSet& g) {
  State x;
  x.p = tp.position;
  x.v = tp.velocity;
  const Vec3 F = desired_force(Vec3::Zero(), Vec3::Zero(), tp.acceleration, g, p);
  const DesiredAttitude d = desired_attitude(F, tp, p);
  x.R = d.R;
  x.omega = d.omega;
  return x;
}

}  // namespace

TEST(GeometricController, DesiredForceAtEquilibrium) {
  const VehicleParams p;
  const GainSet g;
  const Vec3 F = desired_force(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), g, p);
  EXPECT_LE((F - Vec3(0, 0, -6.0822)).norm(), 1e-12);
}

TEST(GeometricController, DesiredForceSingleAxis) {
  const VehicleParams p;
  const GainSet g;
  const Vec3 F = desired_force(kE1, Vec3::Zero(), Vec3::Zero(), g, p);
  EXPECT_LE((F - Vec3(-14, 0, -p.mass * p.gravity)).norm(), 1e-12);
}

TEST(GeometricController, DesiredForceIsAffine) {
  const VehicleParams p;
  const GainSet g;
  const Vec3 ep(0.3, -0.2, 0.5), ev(0.1, 0.2, -0.3), acc(1, 2, 3);
  const Vec3 diff = desired_force(2 * ep, ev, acc, g, p) - desired_force(ep, ev, acc, g, p);
  EXPECT_LE((diff + g.kp * ep).norm(), 1e-13);
}

TEST(GeometricController, ThrustCommand) {
  const VehicleParams p;
  EXPECT_NEAR(thrust_command(Vec3(0, 0, -p.mass * p.gravity), Mat3::Identity()), p.mass * p.gravity, 1e-15);
  const Mat3 r = rotation_about(Vec3(1, 2, 0), 0.8);
  const Vec3 perp = (r * kE3).cross(Vec3(0.3, 0.1, 0.7));
  EXPECT_NEAR(thrust_command(perp, r), 0.0, 1e-15);
  EXPECT_NEAR(thrust_command(Vec3(0, 0, -10), rotation_about(kE2, kPi / 4)), 7.0710678118654755, 1e-12);
}

TEST(GeometricController, LevelHoverAttitude) {
  const VehicleParams p;
  TrajectoryPoint tp;
  const DesiredAttitude d = desired_attitude(Vec3(0, 0, -p.mass * p.gravity), tp, p);
  EXPECT_LE((d.R - Mat3::Identity()).norm(), 1e-15);
  EXPECT_TRUE(d.omega.isZero(0.0));
  EXPECT_TRUE(d.omega_dot.isZero(0.0));
}

TEST(GeometricController, PureYawAttitude) {
  const VehicleParams p;
  TrajectoryPoint tp;
  tp.yaw = kPi / 2;
  const DesiredAttitude d = desired_attitude(Vec3(0, 0, -p.mass * p.gravity), tp, p);
  EXPECT_LE((d.R - rotation_about(kE3, kPi / 2)).norm(), 1e-15);
}

TEST(GeometricController, AttitudeStructure) {
  const VehicleParams p;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 F(u(rng), u(rng), u(rng) - 6.0);
    TrajectoryPoint tp;
    tp.yaw = u(rng);
    const DesiredAttitude d = desired_attitude(F, tp, p);
    EXPECT_TRUE(is_rotation(d.R));
    EXPECT_LE((d.R.col(2) + F.normalized()).norm(), 1e-12);
    // b1 lies in the vertical plane spanned by b3 and the heading.
    const Vec3 heading(std::cos(tp.yaw), std::sin(tp.yaw), 0.0);
    EXPECT_NEAR(d.R.col(0).dot(d.R.col(2).cross(heading)), 0.0, 1e-12);
    EXPECT_GT(d.R.col(0).dot(heading), 0.0);
  }
}

TEST(GeometricController, DegenerateForceThrows) {
  const VehicleParams p;
  try {
    desired_attitude(Vec3(0, 0, 1e-7), TrajectoryPoint{}, p);
    FAIL() << "expected DegenerateForce";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateForce);
  }
}

TEST(GeometricController, CircleRatesMatchFiniteDifferences) {
  const VehicleParams p;
  const GainSet g;
  const Trajectory traj = trajectory_circle(1.0, 2.5, 1.0);
  const double h = 1e-5;
  auto att = [&](double t) {
    const TrajectoryPoint tp = traj(t);
    return desired_attitude(desired_force(Vec3::Zero(), Vec3::Zero(), tp.acceleration, g, p), tp, p);
  };
  for (double t : {0.0, 0.37, 1.2, 2.9}) {
    const DesiredAttitude d = att(t);
    const Mat3 rdot = (att(t + h).R - att(t - h).R) / (2 * h);
    const Vec3 w_fd = vee(0.5 * (d.R.transpose() * rdot - rdot.transpose() * d.R));
    EXPECT_LE((w_fd - d.omega).norm(), 1e-6);
    const Vec3 wdot_fd = (att(t + h).omega - att(t - h).omega) / (2 * h);
    EXPECT_LE((wdot_fd - d.omega_dot).norm(), 1e-5);
  }
}

TEST(GeometricController, FigureEightRatesMatchFiniteDifferences) {
  const VehicleParams p;
  const GainSet g;
  const Trajectory traj = trajectory_figure8(2.0);
  const double h = 1e-5;
  auto att = [&](double t) {
    TrajectoryPoint tp = traj(t);
    tp.yaw = 0.3 * std::sin(t);
    tp.yaw_rate = 0.3 * std::cos(t);
    tp.yaw_acceleration = -0.3 * std::sin(t);
    return desired_attitude(desired_force(Vec3::Zero(), Vec3::Zero(), tp.acceleration, g, p), tp, p);
  };
  for (double t : {0.1, 1.7, 4.4}) {
    const DesiredAttitude d = att(t);
    const Mat3 rdot = (att(t + h).R - att(t - h).R) / (2 * h);
    EXPECT_LE((vee(0.5 * (d.R.transpose() * rdot - rdot.transpose() * d.R)) - d.omega).norm(), 1e-6);
    EXPECT_LE(((att(t + h).omega - att(t - h).omega) / (2 * h) - d.omega_dot).norm(), 1e-5);
  }
}

TEST(GeometricController, MomentZeroAtTrackingEquilibrium) {
  const VehicleParams p;
  const GainSet g;
  EXPECT_TRUE(moment_command(Mat3::Identity(), Vec3::Zero(), DesiredAttitude{}, g, p).isZero(0.0));
  std::mt19937 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    DesiredAttitude d;
    d.R = exp_map(Vec3(n(rng), n(rng), n(rng)));
    d.omega = Vec3(n(rng), n(rng), n(rng));
    d.omega_dot = Vec3(n(rng), n(rng), n(rng));
    // Perfect tracking: R = Rd, Omega = Omega_d; the moment then equals the feedforward J Omega_d'.
    const Vec3 m = moment_command(d.R, d.omega, d, g, p);
    const Vec3 ff = d.omega.cross(p.inertia * d.omega) + p.inertia * d.omega_dot;
    EXPECT_LE((m - ff).norm(), 1e-14);
  }
}

TEST(GeometricController, MomentRateDamping) {
  const VehicleParams p;
  const GainSet g;
  const Vec3 m = moment_command(Mat3::Identity(), Vec3(0.1, 0, 0), DesiredAttitude{}, g, p);
  EXPECT_LE((m - Vec3(-0.0035, 0, 0)).norm(), 1e-15);
}

TEST(GeometricController, MomentAttitudeFeedback) {
  const VehicleParams p;
  const GainSet g;
  const Mat3 r = rotation_about(kE3, kPi / 6);
  ASSERT_LE((rotation_error(r, Mat3::Identity()) - Vec3(0, 0, 0.5)).norm(), 1e-15);
  const Vec3 m = moment_command(r, Vec3::Zero(), DesiredAttitude{}, g, p);
  EXPECT_LE((m - Vec3(0, 0, -0.075)).norm(), 1e-15);
}

TEST(GeometricController, BaselineHoverExactTracking) {
  const VehicleParams p;
  const GainSet g;
  TrajectoryPoint tp;
  tp.position = Vec3(0, 0, -1);
  State x;
  x.p = tp.position;
  const BaselineOutput out = baseline_control(x, tp, g, p);
  EXPECT_NEAR(out.wrench.thrust, p.mass * p.gravity, 1e-14);
  EXPECT_TRUE(out.wrench.moment.isZero(1e-15));
}

TEST(GeometricController, BaselineCircleForceBalance) {
  const VehicleParams p;
  const GainSet g;
  const Trajectory traj = trajectory_circle(1.0, 2.5, 1.0);
  for (double t : {0.0, 0.8, 2.1}) {
    const TrajectoryPoint tp = traj(t);
    const BaselineOutput out = baseline_control(tracking_state(tp, p, g), tp, g, p);
    EXPECT_NEAR(out.wrench.thrust, p.mass * (p.gravity * kE3 - tp.acceleration).norm(), 1e-12);
    EXPECT_LE(out.errors.ep.norm() + out.errors.ev.norm() + out.errors.eR.norm() + out.errors.eOmega.norm(), 1e-12);
  }
}

TEST(GeometricController, BaselinePerturbedAltitude) {
  const VehicleParams p;
  const GainSet g;
  TrajectoryPoint tp;
  State x;
  x.p = Vec3(0, 0, 0.1);
  const BaselineOutput out = baseline_control(x, tp, g, p);
  EXPECT_NEAR(out.wrench.thrust, p.mass * p.gravity + 1.5, 1e-12);
}

TEST(GeometricController, GainValidation) {
  GainSet g;
  EXPECT_NO_THROW(g.validate());
  g.kp(1, 1) = 0.0;
  EXPECT_THROW(g.validate(), Error);
  g = GainSet{};
  g.c1 = -1.0;
  EXPECT_THROW(g.validate(), Error);
}
