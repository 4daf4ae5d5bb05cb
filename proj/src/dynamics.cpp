#include "l1quad/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "l1quad/errors.hpp"
#include "l1quad/so3.hpp"

namespace l1quad {

void VehicleParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorCode::RangeError, "vehicle mass must be positive");
  if (!(gravity > 0.0) || !std::isfinite(gravity)) throw Error(ErrorCode::RangeError, "gravity must be positive");
  if (!(inertia.diagonal().minCoeff() > 0.0) || !inertia.allFinite()) {
    throw Error(ErrorCode::RangeError, "inertia diagonal must be positive");
  }
  const Mat3 off = inertia - Mat3(inertia.diagonal().asDiagonal());
  if (off.norm() != 0.0) throw Error(ErrorCode::RangeError, "inertia must be diagonal");
  if (!(arm_diagonal > 0.0)) throw Error(ErrorCode::RangeError, "arm_diagonal must be positive");
  if (!(torque_coefficient > 0.0)) throw Error(ErrorCode::RangeError, "torque_coefficient must be positive");
  if (!(max_motor_thrust > 0.0)) throw Error(ErrorCode::RangeError, "max_motor_thrust must be positive");
}

BMatrices b_matrices(const Mat3& R, const VehicleParams& params) {
  const double m = params.mass;
  const Mat3& J = params.inertia;
  const Vec3 d = J.diagonal();

  BMatrices out;
  out.B.setZero();
  out.B.block<3, 1>(0, 0) = -R.col(2) / m;
  out.B.block<3, 3>(3, 1) = Vec3(1.0 / d.x(), 1.0 / d.y(), 1.0 / d.z()).asDiagonal();

  out.B_perp.setZero();
  out.B_perp.block<3, 1>(0, 0) = R.col(0) / m;
  out.B_perp.block<3, 1>(0, 1) = R.col(1) / m;

  out.B_bar << out.B, out.B_perp;

  // Force block of B_bar is R [-e3 e1 e2] / m, an orthogonal matrix over m,
  // so its inverse is m [-e3 e1 e2]^T R^T. The moment block inverts to J.
  out.B_bar_inv.setZero();
  out.B_bar_inv.block<1, 3>(0, 0) = -m * R.col(2).transpose();
  out.B_bar_inv.block<1, 3>(4, 0) = m * R.col(0).transpose();
  out.B_bar_inv.block<1, 3>(5, 0) = m * R.col(1).transpose();
  out.B_bar_inv.block<3, 3>(1, 3) = J;
  return out;
}

PartialState partial_drift(const PartialState& z, const VehicleParams& params) {
  const Vec3 omega = z.tail<3>();
  const Mat3& J = params.inertia;
  PartialState f;
  f.head<3>() = params.gravity * kE3;
  f.tail<3>() = -J.diagonal().cwiseInverse().cwiseProduct(omega.cross(J * omega));
  return f;
}

StateDerivative nominal_derivative(const State& x, const ControlWrench& u, const VehicleParams& params) {
  return uncertain_derivative(x, u, UncertaintyVector{}, params);
}

StateDerivative uncertain_derivative(const State& x, const ControlWrench& u, const UncertaintyVector& sigma,
                                     const VehicleParams& params) {
  const double m = params.mass;
  const Mat3& J = params.inertia;
  const double thrust = u.thrust + sigma.matched(0);
  const Vec3 moment = u.moment + sigma.matched.tail<3>();

  StateDerivative d;
  d.p_dot = x.v;
  d.v_dot = params.gravity * kE3 - (thrust / m) * x.R.col(2) +
            (sigma.unmatched(0) / m) * x.R.col(0) + (sigma.unmatched(1) / m) * x.R.col(1);
  d.R_dot = x.R * hat(x.omega);
  d.omega_dot = J.diagonal().cwiseInverse().cwiseProduct(moment - x.omega.cross(J * x.omega));
  return d;
}

Mat4 allocation_matrix(const VehicleParams& params) {
  // Motors on the diagonals at 45, 135, 225, 315 degrees in the body x-y plane;
  // diagonal pairs share a spin direction.
  const double r = 0.5 * params.arm_diagonal;
  const double k = params.torque_coefficient;
  constexpr double kPi = std::numbers::pi;
  const double angles[4] = {0.25 * kPi, 0.75 * kPi, 1.25 * kPi, 1.75 * kPi};
  const double spin[4] = {1.0, -1.0, 1.0, -1.0};

  Mat4 a;
  for (int i = 0; i < 4; ++i) {
    const double px = r * std::cos(angles[i]);
    const double py = r * std::sin(angles[i]);
    // Thrust T along -body z at (px, py, 0) gives moment (px,py,0) x (0,0,-T) = (-py T, px T, 0).
    a(0, i) = 1.0;
    a(1, i) = -py;
    a(2, i) = px;
    a(3, i) = spin[i] * k;
  }
  return a;
}

MotorCommand motor_mixing(const ControlWrench& u, const VehicleParams& params) {
  MotorCommand cmd;
  cmd.thrusts = allocation_matrix(params).partialPivLu().solve(u.as_vector());
  if (params.saturate_motors) {
    for (int i = 0; i < 4; ++i) {
      const double clamped = std::clamp(cmd.thrusts(i), 0.0, params.max_motor_thrust);
      if (clamped != cmd.thrusts(i)) cmd.saturated = true;
      cmd.thrusts(i) = clamped;
    }
  }
  return cmd;
}

ControlWrench wrench_from_thrusts(const Vec4& thrusts, const VehicleParams& params) {
  return ControlWrench::from_vector(allocation_matrix(params) * thrusts);
}

namespace {

// Truncated dexp^{-1}_{-u}(w) for R = R0 exp(u^) with R' = R w^; enough terms for fourth-order RKMK.
Vec3 dexp_inv(const Vec3& u, const Vec3& w) {
  return w + 0.5 * u.cross(w) + (1.0 / 12.0) * u.cross(u.cross(w));
}

struct Stage {
  Vec3 p_dot;
  Vec3 v_dot;
  Vec3 omega_dot;
  Vec3 body_rate;
};

Stage evaluate(const State& x, double t, const ControlWrench& u, const UncertaintySource& sigma,
               const VehicleParams& params) {
  const UncertaintyVector s = sigma ? sigma(t, x) : UncertaintyVector{};
  const StateDerivative d = uncertain_derivative(x, u, s, params);
  if (!d.p_dot.allFinite() || !d.v_dot.allFinite() || !d.omega_dot.allFinite()) {
    throw Error(ErrorCode::NonFinite, "state derivative is not finite");
  }
  return {d.p_dot, d.v_dot, d.omega_dot, x.omega};
}

}  // namespace

State step(const State& x, const ControlWrench& u, const UncertaintySource& sigma, double t, double dt,
           const VehicleParams& params) {
  if (!(dt > 0.0) || dt > 0.01) {
    throw Error(ErrorCode::InvalidArgument, "integration step must satisfy 0 < dt <= 0.01 s");
  }

  auto stage_state = [&](const Stage& k, const Vec3& rot_increment, double scale) {
    State s;
    s.p = x.p + scale * k.p_dot;
    s.v = x.v + scale * k.v_dot;
    s.omega = x.omega + scale * k.omega_dot;
    s.R = x.R * exp_map(rot_increment);
    return s;
  };

  const Stage k1 = evaluate(x, t, u, sigma, params);
  const Vec3 r1 = dt * k1.body_rate;

  const Vec3 u2 = 0.5 * r1;
  const Stage k2 = evaluate(stage_state(k1, u2, 0.5 * dt), t + 0.5 * dt, u, sigma, params);
  const Vec3 r2 = dt * dexp_inv(u2, k2.body_rate);

  const Vec3 u3 = 0.5 * r2;
  const Stage k3 = evaluate(stage_state(k2, u3, 0.5 * dt), t + 0.5 * dt, u, sigma, params);
  const Vec3 r3 = dt * dexp_inv(u3, k3.body_rate);

  const Vec3 u4 = r3;
  const Stage k4 = evaluate(stage_state(k3, u4, dt), t + dt, u, sigma, params);
  const Vec3 r4 = dt * dexp_inv(u4, k4.body_rate);

  State out;
  out.p = x.p + (dt / 6.0) * (k1.p_dot + 2.0 * k2.p_dot + 2.0 * k3.p_dot + k4.p_dot);
  out.v = x.v + (dt / 6.0) * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
  out.omega = x.omega + (dt / 6.0) * (k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot + k4.omega_dot);
  out.R = orthonormalize(x.R * exp_map((r1 + 2.0 * r2 + 2.0 * r3 + r4) / 6.0));
  return out;
}

}  // namespace l1quad
