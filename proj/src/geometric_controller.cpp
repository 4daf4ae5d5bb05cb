#include "l1quad/geometric_controller.hpp"

#include <cmath>

#include "l1quad/errors.hpp"
#include "l1quad/so3.hpp"

namespace l1quad {

void GainSet::validate() const {
  for (const Mat3* k : {&kp, &kv, &kr, &komega}) {
    if (!(k->diagonal().minCoeff() > 0.0) || !k->allFinite()) {
      throw Error(ErrorCode::RangeError, "gain diagonals must be positive");
    }
  }
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error(ErrorCode::RangeError, "c1 and c2 must be positive");
}

Vec3 desired_force(const Vec3& ep, const Vec3& ev, const Vec3& acc_d, const GainSet& gains,
                   const VehicleParams& params) {
  return -gains.kp * ep - gains.kv * ev - params.mass * params.gravity * kE3 + params.mass * acc_d;
}

double thrust_command(const Vec3& force, const Mat3& R) {
  return -force.dot(R.col(2));
}

namespace {

// Unit vector u = w/|w| and its first two derivatives.
struct UnitJet {
  Vec3 u;
  Vec3 u_dot;
  Vec3 u_ddot;
};

UnitJet normalize_jet(const Vec3& w, const Vec3& w_dot, const Vec3& w_ddot) {
  const double n = w.norm();
  UnitJet j;
  j.u = w / n;
  const double n_dot = j.u.dot(w_dot);
  j.u_dot = (w_dot - j.u * n_dot) / n;
  const double n_ddot = j.u_dot.dot(w_dot) + j.u.dot(w_ddot);
  j.u_ddot = (w_ddot - 2.0 * j.u_dot * n_dot - j.u * n_ddot) / n;
  return j;
}

}  // namespace

DesiredAttitude desired_attitude(const ForceJet& force, double yaw, double yaw_rate, double yaw_acceleration) {
  if (force.value.norm() < 1e-6) {
    throw Error(ErrorCode::DegenerateForce, "desired force magnitude below 1e-6 N");
  }
  const UnitJet f = normalize_jet(force.value, force.rate, force.accel);
  const Vec3 b3 = -f.u;
  const Vec3 b3_dot = -f.u_dot;
  const Vec3 b3_ddot = -f.u_ddot;

  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const Vec3 h(c, s, 0.0);
  const Vec3 h_dot = yaw_rate * Vec3(-s, c, 0.0);
  const Vec3 h_ddot = yaw_acceleration * Vec3(-s, c, 0.0) - yaw_rate * yaw_rate * h;

  // Heading projected onto the plane orthogonal to b3.
  const double hb = h.dot(b3);
  const double hb_dot = h_dot.dot(b3) + h.dot(b3_dot);
  const double hb_ddot = h_ddot.dot(b3) + 2.0 * h_dot.dot(b3_dot) + h.dot(b3_ddot);
  const Vec3 w = h - hb * b3;
  if (w.norm() < 1e-6) {
    throw Error(ErrorCode::DegenerateForce, "heading is parallel to the thrust axis");
  }
  const Vec3 w_dot = h_dot - hb_dot * b3 - hb * b3_dot;
  const Vec3 w_ddot = h_ddot - hb_ddot * b3 - 2.0 * hb_dot * b3_dot - hb * b3_ddot;
  const UnitJet b1 = normalize_jet(w, w_dot, w_ddot);

  const Vec3 b2 = b3.cross(b1.u);
  const Vec3 b2_dot = b3_dot.cross(b1.u) + b3.cross(b1.u_dot);
  const Vec3 b2_ddot = b3_ddot.cross(b1.u) + 2.0 * b3_dot.cross(b1.u_dot) + b3.cross(b1.u_ddot);

  DesiredAttitude d;
  d.R << b1.u, b2, b3;
  Mat3 r_dot;
  r_dot << b1.u_dot, b2_dot, b3_dot;
  Mat3 r_ddot;
  r_ddot << b1.u_ddot, b2_ddot, b3_ddot;

  // R' = R W^ and R'' = R (W^ W^ + W'^).
  const Mat3 w_hat = d.R.transpose() * r_dot;
  d.omega = 0.5 * vee(w_hat - w_hat.transpose());
  const Mat3 wd_hat = d.R.transpose() * r_ddot - hat(d.omega) * hat(d.omega);
  d.omega_dot = 0.5 * vee(wd_hat - wd_hat.transpose());
  return d;
}

DesiredAttitude desired_attitude(const Vec3& force, const TrajectoryPoint& traj, const VehicleParams& params) {
  return desired_attitude(ForceJet{force, params.mass * traj.jerk, params.mass * traj.snap}, traj.yaw,
                          traj.yaw_rate, traj.yaw_acceleration);
}

Vec3 moment_command(const Mat3& R, const Vec3& omega, const DesiredAttitude& desired, const GainSet& gains,
                    const VehicleParams& params) {
  const Mat3& J = params.inertia;
  const Vec3 e_r = rotation_error(R, desired.R);
  const Vec3 e_omega = angular_velocity_error(omega, R, desired.R, desired.omega);
  const Mat3 rel = R.transpose() * desired.R;
  return -gains.kr * e_r - gains.komega * e_omega + omega.cross(J * omega) -
         J * (hat(omega) * rel * desired.omega - rel * desired.omega_dot);
}

BaselineOutput baseline_control(const State& x, const TrajectoryPoint& traj, const GainSet& gains,
                                const VehicleParams& params) {
  const double m = params.mass;
  BaselineOutput out;
  out.errors.ep = x.p - traj.position;
  out.errors.ev = x.v - traj.velocity;

  const Vec3 force = desired_force(out.errors.ep, out.errors.ev, traj.acceleration, gains, params);
  const double thrust = thrust_command(force, x.R);
  const Vec3 b3 = x.R.col(2);
  const Vec3 b3_dot = x.R * hat(x.omega) * kE3;

  // Nominal translational model: v' = g e3 - (f/m) R e3.
  const Vec3 ev_dot = params.gravity * kE3 - (thrust / m) * b3 - traj.acceleration;
  const Vec3 force_rate = -gains.kp * out.errors.ev - gains.kv * ev_dot + m * traj.jerk;
  const double thrust_rate = -force_rate.dot(b3) - force.dot(b3_dot);
  const Vec3 ev_ddot = -(thrust_rate / m) * b3 - (thrust / m) * b3_dot - traj.jerk;
  const Vec3 force_accel = -gains.kp * ev_dot - gains.kv * ev_ddot + m * traj.snap;

  out.desired_force = force;
  out.desired = desired_attitude(ForceJet{force, force_rate, force_accel}, traj.yaw, traj.yaw_rate,
                                 traj.yaw_acceleration);
  out.errors.eR = rotation_error(x.R, out.desired.R);
  out.errors.eOmega = angular_velocity_error(x.omega, x.R, out.desired.R, out.desired.omega);
  out.wrench.thrust = thrust;
  out.wrench.moment = moment_command(x.R, x.omega, out.desired, gains, params);
  return out;
}

}  // namespace l1quad
