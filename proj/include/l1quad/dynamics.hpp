#pragma once

#include <functional>

#include "l1quad/types.hpp"

namespace l1quad {

/// Rigid-body parameters plus the X-configuration motor geometry used for mixing.
/// Defaults are the experimental vehicle's values.
struct VehicleParams {
  double mass = 0.62;                                       // kg
  Mat3 inertia = Vec3(3.0e-3, 1.8e-3, 3.2e-3).asDiagonal();  // kg m^2, diagonal
  double gravity = 9.81;                                    // m/s^2
  double arm_diagonal = 0.22;        // motor-to-motor distance across the diagonal, m
  double torque_coefficient = 0.01;  // yaw torque per unit thrust, m
  double max_motor_thrust = 8.0;     // N, only used when saturate_motors is set
  bool saturate_motors = false;

  double min_inertia() const { return inertia.diagonal().minCoeff(); }
  double max_inertia() const { return inertia.diagonal().maxCoeff(); }

  /// Throws Error(RangeError) when mass, gravity or inertia are not positive,
  /// or the inertia is not diagonal.
  void validate() const;
};

/// Vehicle state in north-east-down frames: R maps body to inertial, omega is body rate.
struct State {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
};

struct StateDerivative {
  Vec3 p_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
  Mat3 R_dot = Mat3::Zero();
  Vec3 omega_dot = Vec3::Zero();
};

/// Collective thrust (N, along -body z) and body moment (N m).
struct ControlWrench {
  double thrust = 0.0;
  Vec3 moment = Vec3::Zero();

  Vec4 as_vector() const { return {thrust, moment.x(), moment.y(), moment.z()}; }
  static ControlWrench from_vector(const Vec4& u) { return {u(0), u.tail<3>()}; }
};

/// Matched (thrust + 3 moments) and unmatched (body x/y force) uncertainty.
struct UncertaintyVector {
  Vec4 matched = Vec4::Zero();
  Vec2 unmatched = Vec2::Zero();

  Vec6 stacked() const {
    Vec6 s;
    s << matched, unmatched;
    return s;
  }
  static UncertaintyVector from_stacked(const Vec6& s) { return {s.head<4>(), s.tail<2>()}; }

  UncertaintyVector& operator+=(const UncertaintyVector& o) {
    matched += o.matched;
    unmatched += o.unmatched;
    return *this;
  }
  friend UncertaintyVector operator+(UncertaintyVector a, const UncertaintyVector& b) { return a += b; }
};

/// Partial state z = [v; omega].
using PartialState = Vec6;

inline PartialState partial_state(const State& x) {
  PartialState z;
  z << x.v, x.omega;
  return z;
}

/// Input matrices of the partial-state dynamics.
struct BMatrices {
  Mat64 B;
  Mat62 B_perp;
  Mat6 B_bar;
  Mat6 B_bar_inv;  // closed form, no numeric inversion
};

BMatrices b_matrices(const Mat3& R, const VehicleParams& params);

/// Drift of the partial state: [g e3; -J^-1 (omega x J omega)].
PartialState partial_drift(const PartialState& z, const VehicleParams& params);

StateDerivative nominal_derivative(const State& x, const ControlWrench& u, const VehicleParams& params);

StateDerivative uncertain_derivative(const State& x, const ControlWrench& u, const UncertaintyVector& sigma,
                                     const VehicleParams& params);

/// Maps motor thrusts to (f, M): rows are thrust, roll, pitch, yaw.
Mat4 allocation_matrix(const VehicleParams& params);

struct MotorCommand {
  Vec4 thrusts = Vec4::Zero();
  bool saturated = false;
};

/// Solves the allocation for per-motor thrusts. When saturation is enabled the
/// thrusts are clamped to [0, max_motor_thrust] and `saturated` reports it.
MotorCommand motor_mixing(const ControlWrench& u, const VehicleParams& params);

ControlWrench wrench_from_thrusts(const Vec4& thrusts, const VehicleParams& params);

/// Time- and state-dependent uncertainty; an empty function means none.
using UncertaintySource = std::function<UncertaintyVector(double t, const State& x)>;

/// One RK4 step of length dt (0 < dt <= 0.01 s) holding u constant. Attitude is
/// advanced with Munthe-Kaas exponential increments and re-projected onto SO(3).
/// Throws Error(NonFinite) if a stage derivative is not finite.
State step(const State& x, const ControlWrench& u, const UncertaintySource& sigma, double t, double dt,
           const VehicleParams& params);

}  // namespace l1quad
