#include "l1quad/l1_controller.hpp"

#include <algorithm>
#include <cmath>

#include "l1quad/errors.hpp"

namespace l1quad {

void L1Params::validate() const {
  if (!(as_diagonal.maxCoeff() < 0.0) || !as_diagonal.allFinite()) {
    throw Error(ErrorCode::RangeError, "A_s diagonal must be strictly negative");
  }
  if (!(sample_time > 0.0) || !std::isfinite(sample_time)) {
    throw Error(ErrorCode::RangeError, "sample time must be positive");
  }
  if (!(bandwidth.minCoeff() > 0.0) || !bandwidth.allFinite()) {
    throw Error(ErrorCode::RangeError, "filter bandwidths must be positive");
  }
  if (!(estimate_limit.minCoeff() > 0.0)) {
    throw Error(ErrorCode::RangeError, "estimate limits must be positive");
  }
}

PartialState predictor_step(const L1State& l1, const PartialState& z_prev, const Mat3& R_prev,
                            const ControlWrench& u_b_prev, const VehicleParams& params, const L1Params& l1p) {
  const BMatrices b = b_matrices(R_prev, params);
  const PartialState z_tilde = l1.z_hat - z_prev;
  const PartialState rate = partial_drift(z_prev, params) +
                            b.B * (u_b_prev.as_vector() + l1.u_ad + l1.sigma_hat.matched) +
                            b.B_perp * l1.sigma_hat.unmatched + l1p.as_diagonal.cwiseProduct(z_tilde);
  return l1.z_hat + l1p.sample_time * rate;
}

Vec6 adaptation_gain(const L1Params& l1p) {
  Vec6 gain;
  for (int i = 0; i < 6; ++i) {
    const double a = l1p.as_diagonal(i);
    const double e = std::exp(a * l1p.sample_time);
    gain(i) = a * e / std::expm1(a * l1p.sample_time);
  }
  return gain;
}

UncertaintyVector adaptation_update(const PartialState& z_tilde, const Mat3& R, const L1Params& l1p,
                                    const VehicleParams& params) {
  const BMatrices b = b_matrices(R, params);
  const Vec6 mu = adaptation_gain(l1p).cwiseProduct(z_tilde);
  return UncertaintyVector::from_stacked(-b.B_bar_inv * mu);
}

Vec4 lpf_update(const Vec4& u_ad_prev, const Vec4& sigma_hat_m, const L1Params& l1p) {
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    const double decay = std::exp(-l1p.bandwidth(i) * l1p.sample_time);
    out(i) = decay * u_ad_prev(i) - (1.0 - decay) * sigma_hat_m(i);
  }
  return out;
}

Vec4 l1_step(L1State& l1, const PartialState& z, const Mat3& R, const ControlWrench& u_b,
             const VehicleParams& params, const L1Params& l1p) {
  if (!l1.initialized) {
    l1 = L1State{};
    l1.initialized = true;
    l1.z_hat = z;
    l1.prev_z = z;
    l1.prev_R = R;
    l1.prev_u_b = u_b.as_vector();
    return l1.u_ad;
  }

  l1.z_hat = predictor_step(l1, l1.prev_z, l1.prev_R, ControlWrench::from_vector(l1.prev_u_b), params, l1p);
  l1.z_tilde = l1.z_hat - z;
  UncertaintyVector sigma_hat = adaptation_update(l1.z_tilde, R, l1p, params);
  for (int i = 0; i < 4; ++i) {
    const double limit = l1p.estimate_limit(i);
    const double clamped = std::clamp(sigma_hat.matched(i), -limit, limit);
    if (clamped != sigma_hat.matched(i)) ++l1.clamp_count;
    sigma_hat.matched(i) = clamped;
  }
  l1.sigma_hat = sigma_hat;
  l1.u_ad = lpf_update(l1.u_ad, sigma_hat.matched, l1p);

  if (!l1.z_hat.allFinite() || !l1.u_ad.allFinite() || !l1.sigma_hat.stacked().allFinite()) {
    throw Error(ErrorCode::NonFinite, "adaptive loop produced a non-finite value");
  }
  l1.prev_z = z;
  l1.prev_R = R;
  l1.prev_u_b = u_b.as_vector();
  return l1.u_ad;
}

}  // namespace l1quad
