#pragma once

#include "l1quad/dynamics.hpp"
#include "l1quad/types.hpp"

namespace l1quad {

/// Tuning of the adaptive loop. Channel order of `bandwidth` is (f, M_x, M_y, M_z).
struct L1Params {
  Vec6 as_diagonal = (Vec6() << -5.0, -5.0, -5.0, -10.0, -10.0, -10.0).finished();  // 1/s, Hurwitz
  double sample_time = 0.0025;                                                      // s
  Vec4 bandwidth = Vec4(30.0, 15.0, 15.0, 5.0);                                     // rad/s
  /// Per-channel clamp on the matched estimate: +-4 m g on thrust, +-1 N m on moments.
  Vec4 estimate_limit = Vec4(4.0 * 0.62 * 9.81, 1.0, 1.0, 1.0);

  /// Throws Error(RangeError) unless A_s is Hurwitz, T_s > 0 and every bandwidth and limit is positive.
  void validate() const;
};

/// Memory of the adaptive loop between ticks.
struct L1State {
  bool initialized = false;
  PartialState z_hat = PartialState::Zero();
  PartialState z_tilde = PartialState::Zero();
  UncertaintyVector sigma_hat;
  Vec4 u_ad = Vec4::Zero();
  // Values at the previous tick, consumed by the next predictor update.
  PartialState prev_z = PartialState::Zero();
  Mat3 prev_R = Mat3::Identity();
  Vec4 prev_u_b = Vec4::Zero();
  long clamp_count = 0;
};

/// Forward-Euler predictor update evaluated with the previous tick's measurements:
/// z_hat + T_s [f(z) + B(R)(u_b + u_ad + sigma_hat_m) + B_perp(R) sigma_hat_um + A_s z_tilde].
PartialState predictor_step(const L1State& l1, const PartialState& z_prev, const Mat3& R_prev,
                            const ControlWrench& u_b_prev, const VehicleParams& params, const L1Params& l1p);

/// Per-channel gain of Phi^-1 exp(A_s T_s), i.e. a e^{aT} / (e^{aT} - 1).
Vec6 adaptation_gain(const L1Params& l1p);

/// Piecewise-constant law sigma_hat = -B_bar(R)^-1 Phi^-1 exp(A_s T_s) z_tilde.
UncertaintyVector adaptation_update(const PartialState& z_tilde, const Mat3& R, const L1Params& l1p,
                                    const VehicleParams& params);

/// Discretized C(s) = w/(s+w): u_ad(k) = e^{-w T_s} u_ad(k-1) - (1 - e^{-w T_s}) sigma_hat_m(k).
Vec4 lpf_update(const Vec4& u_ad_prev, const Vec4& sigma_hat_m, const L1Params& l1p);

/// One tick of the adaptive loop: predictor, prediction error, adaptation, filter.
/// The first call initializes z_hat to z and returns zero. `u_b` is this tick's
/// baseline command, stored for the next predictor update.
Vec4 l1_step(L1State& l1, const PartialState& z, const Mat3& R, const ControlWrench& u_b,
             const VehicleParams& params, const L1Params& l1p);

}  // namespace l1quad
