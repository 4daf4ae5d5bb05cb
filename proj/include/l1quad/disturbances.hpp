#pragma once

#include <array>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "l1quad/dynamics.hpp"
#include "l1quad/trajectory.hpp"

namespace l1quad {

struct Sinusoid {
  double amplitude = 0.0;
  double angular_frequency = 0.0;  // rad/s
  double phase = 0.0;              // rad
};

/// Additive signal per channel (f, Mx, My, Mz, fx, fy): offset plus a sum of
/// sinusoids, active on [start, end] and zero outside.
struct InjectedSignal {
  std::array<std::vector<Sinusoid>, 6> channels;
  Vec6 offset = Vec6::Zero();
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
};

/// Inertial force and body moment, active on [start, end].
struct ConstantWrench {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
};

struct MassMismatch {
  double real_mass = 0.62;  // kg
};

struct ThrustScale {
  Vec4 scales = Vec4::Ones();
};

/// Cell voltage decays exponentially from initial to final; thrust scales with (V/V0)^2.
struct VoltageDrop {
  double initial_voltage = 4.2;
  double final_voltage = 3.2;
  double time_constant = 10.0;  // s
};

/// Extra thrust kappa f exp(-(h - surface)/decay) with h = -p_z.
struct GroundEffect {
  double surface_height = 0.0;  // m
  double gain = 0.1;
  double decay_length = 0.1;  // m
};

/// Point mass on a rigid massless cord, attached at a body-frame offset.
struct SlungPayload {
  double mass = 0.1;         // kg
  double cord_length = 0.4;  // m
  Vec3 attach_offset = Vec3::Zero();
};

using DisturbanceTerm =
    std::variant<InjectedSignal, ConstantWrench, MassMismatch, ThrustScale, VoltageDrop, GroundEffect, SlungPayload>;

/// Throws Error(RangeError) on a non-physical parameter.
void validate(const DisturbanceTerm& term);

struct L1Switch {
  double time = 0.0;
  bool enabled = true;
};

struct Scenario {
  std::string name = "hover";
  std::vector<DisturbanceTerm> terms;
  double duration = 10.0;  // s
  TrajectorySpec trajectory;
  bool l1_enabled = true;          // state before the first switch
  std::vector<L1Switch> schedule;  // sorted by time

  bool l1_active(double t) const;
  /// Throws Error(RangeError) if duration <= 0, the schedule is unsorted or a term is invalid.
  void validate() const;
};

/// Unit cord direction (inertial, quad to payload) and its rate.
struct PendulumState {
  Vec3 n = kE3;
  Vec3 n_dot = Vec3::Zero();
};

/// Pendulum sub-states, one per SlungPayload term in scenario order.
struct DisturbanceState {
  std::vector<PendulumState> pendulums;
};

DisturbanceState initial_disturbance_state(const Scenario& scenario);

/// Maps an inertial force and body moment acting on the vehicle into the matched and
/// unmatched channels: sigma_m = (-F.Re3, M), sigma_um = (F.Re1, F.Re2).
UncertaintyVector external_wrench(const Vec3& force, const Vec3& moment, const Mat3& R);

/// Terms that need pendulum state (SlungPayload) are evaluated hanging at rest below the attachment.
UncertaintyVector evaluate(const DisturbanceTerm& term, double t, const State& x, const ControlWrench& u_cmd,
                           const VehicleParams& params);

/// 0.6 sin(2 pi t) + 0.6 sin(pi t) on the thrust channel for t in [0, 16], zero elsewhere.
UncertaintyVector injected_sinusoid(double t);
InjectedSignal injected_sinusoid_signal();

struct ThrustScaleResult {
  UncertaintyVector sigma;
  bool saturated = false;
};

/// sigma_m = (f_real, M_real) - (f, M) with per-motor real thrust scale .* mixed thrust.
ThrustScaleResult thrust_scale_effect(const Vec4& scales, const ControlWrench& u_cmd, const VehicleParams& params);

/// Voltage-drop thrust scale at time t.
double voltage_scale(const VoltageDrop& drop, double t);

struct PayloadCoupling {
  UncertaintyVector sigma;
  PendulumState derivative;
  double tension = 0.0;
};

/// Cord tension from the joint vehicle/payload acceleration under the commanded thrust,
/// clipped at zero when slack, projected as an external wrench.
PayloadCoupling slung_payload_coupling(const PendulumState& pendulum, const SlungPayload& payload, const State& x,
                                       const ControlWrench& u_cmd, const VehicleParams& params);

/// Sum over all terms. Pendulum terms read `dstate` when given.
UncertaintyVector compose(const Scenario& scenario, double t, const State& x, const ControlWrench& u_cmd,
                          const VehicleParams& params, const DisturbanceState* dstate = nullptr);

/// Advances every pendulum by one RK4 step of dt with the vehicle state and command held.
void advance(DisturbanceState& dstate, const Scenario& scenario, const State& x, const ControlWrench& u_cmd,
             double dt, const VehicleParams& params);

std::string term_name(const DisturbanceTerm& term);

}  // namespace l1quad
