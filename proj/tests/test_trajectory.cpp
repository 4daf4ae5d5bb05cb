#include <gtest/gtest.h>

#include <cmath>

#include "l1quad/geometric_controller.hpp"
#include "l1quad/trajectory.hpp"

using namespace l1quad;

TEST(Trajectory, HoverIsConstant) {
  const Trajectory tr = trajectory_hover(Vec3(1, 2, -3), 0.4);
  for (double t : {0.0, 1.0, 100.0}) {
    const TrajectoryPoint tp = tr(t);
    EXPECT_EQ(tp.position, Vec3(1, 2, -3));
    EXPECT_TRUE(tp.velocity.isZero(0.0));
    EXPECT_TRUE(tp.acceleration.isZero(0.0));
    EXPECT_TRUE(tp.jerk.isZero(0.0));
    EXPECT_TRUE(tp.snap.isZero(0.0));
    EXPECT_EQ(tp.yaw, 0.4);
    EXPECT_EQ(tp.yaw_rate, 0.0);
  }
}

TEST(Trajectory, HoverFeedsEquilibriumControl) {
  const VehicleParams p;
  const GainSet g;
  const Trajectory tr = trajectory_hover(Vec3(0, 0, -1));
  State x;
  x.p = Vec3(0, 0, -1);
  const BaselineOutput out = baseline_control(x, tr(3.0), g, p);
  EXPECT_NEAR(out.wrench.thrust, p.mass * p.gravity, 1e-14);
  EXPECT_TRUE(out.wrench.moment.isZero(1e-15));
}

TEST(Trajectory, CircleZeroSpeedHovers) {
  const Trajectory tr = trajectory_circle(1.0, 0.0, 1.0);
  const TrajectoryPoint tp = tr(5.0);
  EXPECT_LE((tp.position - Vec3(1, 0, -1)).norm(), 1e-15);
  EXPECT_TRUE(tp.velocity.isZero(0.0));
  EXPECT_TRUE(tp.acceleration.isZero(0.0));
}

TEST(Trajectory, CircleCentripetalAndSnap) {
  const Trajectory tr = trajectory_circle(1.0, 2.5, 1.0);
  for (double t : {0.0, 0.3, 1.9}) {
    const TrajectoryPoint tp = tr(t);
    EXPECT_NEAR(tp.velocity.norm(), 2.5, 1e-12);
    EXPECT_NEAR(tp.acceleration.norm(), 6.25, 1e-12);
    EXPECT_NEAR(tp.snap.norm(), std::pow(2.5, 4), 1e-10);
    EXPECT_NEAR((tp.position - Vec3(0, 0, -1)).norm(), 1.0, 1e-12);
  }
  const TrajectoryPoint r2 = trajectory_circle(2.0, 1.0, 1.0)(0.5);
  EXPECT_NEAR(r2.snap.norm(), 2.0 * std::pow(0.5, 4), 1e-14);
}

TEST(Trajectory, CircleDerivativesConsistent) {
  const Trajectory tr = trajectory_circle(1.3, 1.7, 2.0);
  const double h = 1e-5;
  for (double t : {0.2, 1.1}) {
    const TrajectoryPoint a = tr(t - h), b = tr(t + h), c = tr(t);
    EXPECT_LE(((b.position - a.position) / (2 * h) - c.velocity).norm(), 1e-8);
    EXPECT_LE(((b.velocity - a.velocity) / (2 * h) - c.acceleration).norm(), 1e-8);
    EXPECT_LE(((b.acceleration - a.acceleration) / (2 * h) - c.jerk).norm(), 1e-7);
    EXPECT_LE(((b.jerk - a.jerk) / (2 * h) - c.snap).norm(), 1e-7);
  }
}

TEST(Trajectory, FigureEightShape) {
  const Trajectory tr = trajectory_figure8(1.5);
  EXPECT_LE((tr(0.0).position - Vec3(0, 0, -1)).norm(), 1e-15);
  double xmax = 0.0, ymax = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const TrajectoryPoint tp = tr(i * 1e-3);
    xmax = std::max(xmax, std::abs(tp.position.x()));
    ymax = std::max(ymax, std::abs(tp.position.y()));
  }
  EXPECT_NEAR(xmax, 2.0, 1e-4);
  EXPECT_NEAR(ymax, 1.5, 1e-4);
  const TrajectoryPoint still = trajectory_figure8(0.0)(7.0);
  EXPECT_LE((still.position - Vec3(0, 0, -1)).norm(), 1e-15);
  EXPECT_TRUE(still.velocity.isZero(0.0));
}

TEST(Trajectory, FigureEightDerivativesConsistent) {
  const Trajectory tr = trajectory_figure8(2.0);
  const double h = 1e-5;
  const TrajectoryPoint a = tr(1.0 - h), b = tr(1.0 + h), c = tr(1.0);
  EXPECT_LE(((b.position - a.position) / (2 * h) - c.velocity).norm(), 1e-8);
  EXPECT_LE(((b.jerk - a.jerk) / (2 * h) - c.snap).norm(), 1e-7);
}

TEST(Trajectory, SampledMatchesAnalytic) {
  const Trajectory ref = trajectory_circle(1.0, 1.0, 1.0);
  const Trajectory num = trajectory_from_samples([&](double t) { return ref(t).position; }, 0.0, 1e-2);
  const TrajectoryPoint a = ref(0.7), b = num(0.7);
  EXPECT_LE((a.velocity - b.velocity).norm(), 1e-7);
  EXPECT_LE((a.acceleration - b.acceleration).norm(), 1e-6);
  EXPECT_LE((a.jerk - b.jerk).norm(), 1e-4);
  EXPECT_LE((a.snap - b.snap).norm(), 1e-3);
}

TEST(Trajectory, SpecDispatch) {
  TrajectorySpec s;
  EXPECT_EQ(to_string(s.kind), "hover");
  EXPECT_EQ(make_trajectory(s)(1.0).position, Vec3(0, 0, -1));
  s.kind = TrajectorySpec::Kind::Circle;
  s.speed = 1.0;
  EXPECT_NEAR(make_trajectory(s)(0.5).velocity.norm(), 1.0, 1e-12);
  s.kind = TrajectorySpec::Kind::Figure8;
  EXPECT_EQ(to_string(s.kind), "figure8");
}
