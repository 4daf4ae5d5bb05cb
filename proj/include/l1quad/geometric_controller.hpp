#pragma once

#include <functional>

#include "l1quad/dynamics.hpp"
#include "l1quad/types.hpp"

namespace l1quad {

/// Diagonal positive-definite gains of the tracking controller. c1 and c2 are the
/// Lyapunov cross-term weights; they do not affect the control law.
struct GainSet {
  Mat3 kp = Vec3(14.0, 15.0, 15.0).asDiagonal();
  Mat3 kv = Vec3(1.5, 0.9, 1.1).asDiagonal();
  Mat3 kr = Vec3(0.55, 0.35, 0.15).asDiagonal();
  Mat3 komega = Vec3(0.035, 0.03, 0.004).asDiagonal();
  double c1 = 1.0;
  double c2 = 1.0;

  /// Throws Error(RangeError) unless every gain diagonal entry and c1, c2 are positive.
  void validate() const;
};

/// Reference position with derivatives through snap, and yaw with two derivatives.
struct TrajectoryPoint {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Vec3 jerk = Vec3::Zero();
  Vec3 snap = Vec3::Zero();
  double yaw = 0.0;
  double yaw_rate = 0.0;
  double yaw_acceleration = 0.0;
};

using Trajectory = std::function<TrajectoryPoint(double t)>;

struct DesiredAttitude {
  Mat3 R = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
  Vec3 omega_dot = Vec3::Zero();
};

/// A force vector with its first two time derivatives.
struct ForceJet {
  Vec3 value;
  Vec3 rate;
  Vec3 accel;
};

struct TrackingErrors {
  Vec3 ep = Vec3::Zero();
  Vec3 ev = Vec3::Zero();
  Vec3 eR = Vec3::Zero();
  Vec3 eOmega = Vec3::Zero();
};

struct BaselineOutput {
  ControlWrench wrench;
  Vec3 desired_force = Vec3::Zero();
  DesiredAttitude desired;
  TrackingErrors errors;
};

/// F_d = -K_p e_p - K_v e_v - m g e3 + m p''_d.
Vec3 desired_force(const Vec3& ep, const Vec3& ev, const Vec3& acc_d, const GainSet& gains,
                   const VehicleParams& params);

/// f_b = -F_d . (R e3).
double thrust_command(const Vec3& force, const Mat3& R);

/// Flat-output attitude: b3 = -F/|F|, b1 from the heading projected orthogonal to b3,
/// b2 = b3 x b1. Omega_d and its derivative come from the analytic derivatives of
/// those columns. Throws Error(DegenerateForce) if |F| < 1e-6 N.
DesiredAttitude desired_attitude(const ForceJet& force, double yaw, double yaw_rate, double yaw_acceleration);

/// Feedforward variant: the force derivatives are taken as m * jerk and m * snap.
DesiredAttitude desired_attitude(const Vec3& force, const TrajectoryPoint& traj, const VehicleParams& params);

/// M_b = -K_R e_R - K_Omega e_Omega + Omega x J Omega - J(Omega^ R^T Rd Omega_d - R^T Rd Omega_d').
Vec3 moment_command(const Mat3& R, const Vec3& omega, const DesiredAttitude& desired, const GainSet& gains,
                    const VehicleParams& params);

/// Thrust and moment for state x tracking traj. The force derivatives that feed the
/// desired angular rate include the feedback terms, using the nominal model for v'.
BaselineOutput baseline_control(const State& x, const TrajectoryPoint& traj, const GainSet& gains,
                                const VehicleParams& params);

}  // namespace l1quad
