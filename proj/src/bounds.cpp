#include "l1quad/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "l1quad/errors.hpp"
#include "l1quad/so3.hpp"

namespace l1quad {

namespace {

template <int N>
double min_eig(const Eigen::Matrix<double, N, N>& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>>(a, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

template <int N>
double max_eig(const Eigen::Matrix<double, N, N>& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>>(a, Eigen::EigenvaluesOnly).eigenvalues()(N - 1);
}

constexpr double kPdTolerance = 1e-12;

double dmin(const Mat3& g) { return g.diagonal().minCoeff(); }
double dmax(const Mat3& g) { return g.diagonal().maxCoeff(); }

std::vector<double> geomspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 1) return {std::sqrt(lo * hi)};
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(a + (b - a) * i / (n - 1)));
  return out;
}

}  // namespace

std::string CertificateFlags::first_failed(bool include_tube) const {
  const std::pair<const char*, bool> order[] = {{"M11", M11}, {"M12", M12}, {"M21", M21}, {"M22", M22},
                                                {"W1", W1},   {"W2", W2},   {"W", W}};
  for (const auto& [name, ok] : order)
    if (!ok) return name;
  if (include_tube) {
    if (!bandwidth) return "bandwidth";
    if (!sample_time) return "sample_time";
    if (!unmatched_bound) return "unmatched_bound";
  }
  return {};
}

void CertificationInputs::validate() const {
  if (!(psi1 > 0.0 && psi1 < 1.0)) throw Error(ErrorCode::RangeError, "psi1 must lie in (0, 1)");
  if (!(H >= 0.0)) throw Error(ErrorCode::RangeError, "H must be non-negative");
  if (!(epsilon >= 0.0) || !(d0 >= 0.0) || !(V0 >= 0.0) || !(t1 >= 0.0))
    throw Error(ErrorCode::RangeError, "epsilon, d0, V0 and t1 must be non-negative");
  const UncertaintyBounds& b = bounds;
  for (double v : {b.delta_sigma, b.delta_sigma_m, b.delta_sigma_um, b.L_sigma_t, b.L_sigma_x, b.L_sigma_m_t,
                   b.L_sigma_m_x, b.delta_f, b.delta_ub, b.delta_sigma_hat})
    if (!(v >= 0.0)) throw Error(ErrorCode::RangeError, "uncertainty bounds must be non-negative");
}

LyapunovMatrices lyapunov_matrices(const CertificationInputs& ci) {
  const GainSet& k = ci.gains;
  const double m = ci.params.mass;
  const double jm = ci.params.min_inertia();
  const double jM = ci.params.max_inertia();
  const double c1 = k.c1, c2 = k.c2;
  const double psi1 = ci.psi1;
  const double H = ci.H;

  LyapunovMatrices L;
  L.alpha = std::sqrt(psi1 * (2.0 - psi1));
  const double a = L.alpha;
  const double off1 = -c1 * dmax(k.kv) / (2.0 * m) * (1.0 + a) - dmax(k.kp) * a / 2.0;
  L.W1 << c1 * dmin(k.kp) / m * (1.0 - a), off1, off1, dmin(k.kv) * (1.0 - a) - c1;
  L.W12 << c1 * H / m, 0.0, H, 0.0;
  const double off2 = -c2 * dmax(k.komega) / (2.0 * jm);
  L.W2 << c2 * dmin(k.kr) / jM, off2, off2, dmin(k.komega) - c2;
  L.W << L.W1, -L.W12 / 2.0, -L.W12.transpose() / 2.0, L.W2;
  L.M11 << dmin(k.kp), -c1, -c1, m;
  L.M11 *= 0.5;
  L.M12 << dmax(k.kp), c1, c1, m;
  L.M12 *= 0.5;
  L.M21 << dmin(k.kr), -c2, -c2, jm;
  L.M21 *= 0.5;
  L.M22 << 2.0 * dmax(k.kr) / (2.0 - psi1), c2, c2, jM;
  L.M22 *= 0.5;
  return L;
}

BoundCertificate certify_gains(const CertificationInputs& ci) {
  BoundCertificate c;
  c.matrices = lyapunov_matrices(ci);
  const LyapunovMatrices& L = c.matrices;
  CertificateFlags& f = c.flags;
  f.M11 = min_eig<2>(L.M11) > kPdTolerance;
  f.M12 = min_eig<2>(L.M12) > kPdTolerance;
  f.M21 = min_eig<2>(L.M21) > kPdTolerance;
  f.M22 = min_eig<2>(L.M22) > kPdTolerance;
  f.W1 = min_eig<2>(L.W1) > kPdTolerance;
  f.W2 = min_eig<2>(L.W2) > kPdTolerance;
  f.W = min_eig<4>(L.W) > kPdTolerance;
  const double top = std::max(max_eig<2>(L.M12), max_eig<2>(L.M22));
  c.beta = min_eig<4>(L.W) / top;
  c.gamma_lo = std::min(min_eig<2>(L.M11), min_eig<2>(L.M21));
  c.gamma_hi = top;
  return c;
}

double lyapunov_value(const Vec3& ep, const Vec3& ev, const Vec3& eR, const Vec3& eOmega, const Mat3& R,
                      const Mat3& Rd, const GainSet& gains, const VehicleParams& params) {
  return 0.5 * ep.dot(gains.kp * ep) + 0.5 * params.mass * ev.squaredNorm() + gains.c1 * ep.dot(ev) +
         0.5 * eOmega.dot(params.inertia * eOmega) + dmin(gains.kr) * attitude_error_psi(R, Rd) +
         gains.c2 * eR.dot(eOmega);
}

TrackingErrors tracking_errors(const State& x, const DesiredState& xd) {
  TrackingErrors e;
  e.ep = x.p - xd.p;
  e.ev = x.v - xd.v;
  e.eR = rotation_error(x.R, xd.R);
  e.eOmega = angular_velocity_error(x.omega, x.R, xd.R, xd.omega);
  return e;
}

double tracking_distance(const State& x, const DesiredState& xd) {
  const TrackingErrors e = tracking_errors(x, xd);
  return std::sqrt(e.ep.squaredNorm() + e.ev.squaredNorm() + e.eR.squaredNorm() + e.eOmega.squaredNorm());
}

StructuralConstants structural_constants(const GainSet& gains, const VehicleParams& params, double rho,
                                         double max_omega_d) {
  const double m = params.mass;
  const double jm = params.min_inertia();
  const double jM = params.max_inertia();
  StructuralConstants s;
  s.delta_B = std::max(1.0 / m, 1.0 / jm);
  s.delta_Bbar = s.delta_B;
  s.delta_Bbar_inv = std::max(m, jM);
  s.delta_BF = s.delta_B;
  s.delta_BbarF = s.delta_B;
  const double r1 = gains.c1 / m;
  const double r2 = gains.c2 / jm;
  s.c3 = std::sqrt(1.0 + std::max(r1 * r1, r2 * r2));
  s.c4 = std::sqrt(1.0 + r1 * r1);
  s.L_B = (rho + max_omega_d) / m;
  return s;
}

ZetaConstants zeta_constants(const CertificationInputs& ci, double beta) {
  return zeta_constants(ci, beta, ci.l1p.bandwidth.minCoeff(), ci.l1p.bandwidth.maxCoeff());
}

ZetaConstants zeta_constants(const CertificationInputs& ci, double beta, double omega_slow, double omega_fast) {
  if (std::abs(omega_slow - beta) < 1e-9)
    throw Error(ErrorCode::PoleCollision, fmt::format("filter bandwidth {} equals beta", omega_slow));
  const UncertaintyBounds& b = ci.bounds;
  const StructuralConstants& s = ci.structural;
  const double lam = ci.l1p.as_diagonal.cwiseAbs().maxCoeff();
  const double r6 = std::sqrt(6.0);
  ZetaConstants z;
  z.phi1 = b.delta_f + s.delta_Bbar * b.delta_sigma + s.delta_BF * (b.delta_ub + b.delta_sigma_hat);
  z.zeta1 = b.delta_sigma_m / std::abs(beta - omega_slow) + (b.L_sigma_m_t + b.L_sigma_m_x * z.phi1) / (beta * omega_slow);
  z.zeta2 = 2.0 * r6 * s.delta_Bbar * s.delta_Bbar_inv * (z.phi1 * b.L_sigma_x + b.L_sigma_t) +
            2.0 * r6 * s.delta_Bbar_inv * s.L_B * b.delta_sigma_hat +
            r6 * s.delta_Bbar_inv * (2.0 * s.L_B + lam * s.delta_Bbar) * b.delta_sigma;
  z.zeta3 = b.delta_sigma * omega_fast;
  z.zeta4 = z.zeta2 + z.zeta3;
  return z;
}

double tube_radius(double d0, double gamma_lo, double gamma_hi, double epsilon) {
  if (!(gamma_lo > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma_lo must be positive");
  return d0 * std::sqrt(gamma_hi / gamma_lo) + epsilon;
}

Feasibility feasibility_conditions(const CertificationInputs& ci, double rho, double gamma_lo,
                                   const ZetaConstants& z) {
  const StructuralConstants& s = ci.structural;
  const double dum = ci.bounds.delta_sigma_um;
  Feasibility f;
  const double lhs = gamma_lo * rho * rho;
  f.margin = lhs - s.c3 * rho * z.zeta1 - s.c4 * rho * dum - ci.V0;
  f.bandwidth = f.margin > 0.0;
  f.Ts_max = f.bandwidth ? (z.zeta4 > 0.0 ? f.margin / z.zeta4 : std::numeric_limits<double>::infinity()) : 0.0;
  f.sample_time = f.bandwidth && f.Ts_max > 0.0 && ci.l1p.sample_time <= f.Ts_max;
  f.unmatched_bound = s.c4 * rho > 0.0 && dum <= (lhs - ci.V0 - ci.epsilon) / (s.c4 * rho);
  return f;
}

double ultimate_bound(double Ts, double t1, const CertificationInputs& ci, double rho, double beta,
                      double gamma_lo, const ZetaConstants& z) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  const StructuralConstants& s = ci.structural;
  const double num = std::exp(-beta * t1) * ci.V0 + s.c3 * rho * z.zeta1 + z.zeta4 * Ts +
                     s.c4 * rho * ci.bounds.delta_sigma_um;
  return std::sqrt(num / gamma_lo);
}

bool region_of_attraction_check(const Mat3& R0, const Mat3& Rd0, const Vec3& eOmega0, double psi1, const Mat3& KR,
                                const Mat3& J) {
  const double psi0 = attitude_error_psi(R0, Rd0);
  if (!(psi0 < psi1 && psi1 < 1.0)) return false;
  const double threshold = 2.0 / J.diagonal().maxCoeff() * dmin(KR) * (psi1 - psi0);
  return eOmega0.squaredNorm() < threshold;
}

double estimation_error_bound(double zeta2, double Ts, double delta_sigma, double t) {
  return t < Ts ? delta_sigma : zeta2 * Ts;
}

double consistent_sigma_hat_bound(const CertificationInputs& ci, double beta) {
  CertificationInputs probe = ci;
  probe.bounds.delta_sigma_hat = 0.0;
  const double a = zeta_constants(probe, beta).zeta2;
  probe.bounds.delta_sigma_hat = 1.0;
  const double b = zeta_constants(probe, beta).zeta2 - a;
  const double Ts = ci.l1p.sample_time;
  if (b * Ts >= 1.0) return std::numeric_limits<double>::infinity();
  const double d = (ci.bounds.delta_sigma + a * Ts) / (1.0 - b * Ts);
  return std::max(d, ci.bounds.delta_sigma_hat);
}

BoundCertificate certify(CertificationInputs& ci, bool with_tube) {
  ci.validate();
  BoundCertificate c = certify_gains(ci);
  if (!with_tube) return c;
  c.tube_evaluated = true;
  c.omega = ci.l1p.bandwidth.minCoeff();
  if (!c.flags.gains_ok() || !(c.beta > 0.0) || !(c.gamma_lo > 0.0)) return c;
  c.rho = tube_radius(ci.d0, c.gamma_lo, c.gamma_hi, ci.epsilon);
  ci.structural = structural_constants(ci.gains, ci.params, c.rho, ci.max_omega_d);
  if (ci.inflate_sigma_hat) {
    const double d = consistent_sigma_hat_bound(ci, c.beta);
    if (!std::isfinite(d)) return c;
    ci.bounds.delta_sigma_hat = d;
  }
  const ZetaConstants z = zeta_constants(ci, c.beta);
  c.phi1 = z.phi1;
  c.zeta1 = z.zeta1;
  c.zeta2 = z.zeta2;
  c.zeta3 = z.zeta3;
  c.zeta4 = z.zeta4;
  const Feasibility f = feasibility_conditions(ci, c.rho, c.gamma_lo, z);
  c.flags.bandwidth = f.bandwidth;
  c.flags.sample_time = f.sample_time;
  c.flags.unmatched_bound = f.unmatched_bound;
  c.Ts_max = f.Ts_max;
  c.mu = ultimate_bound(ci.l1p.sample_time, ci.t1, ci, c.rho, c.beta, c.gamma_lo, z);
  return c;
}

double force_bound(const Trajectory& traj, double duration, double dt, const VehicleParams& params) {
  double h = 0.0;
  const long n = static_cast<long>(std::ceil(duration / dt));
  for (long i = 0; i <= n; ++i) {
    const TrajectoryPoint p = traj(std::min(i * dt, duration));
    h = std::max(h, (params.mass * (p.acceleration - params.gravity * kE3)).norm());
  }
  return h;
}

double max_desired_rate(const Trajectory& traj, double duration, double dt, const GainSet& gains,
                        const VehicleParams& params) {
  double w = 0.0;
  const long n = static_cast<long>(std::ceil(duration / dt));
  for (long i = 0; i <= n; ++i) {
    const TrajectoryPoint p = traj(std::min(i * dt, duration));
    const Vec3 F = desired_force(Vec3::Zero(), Vec3::Zero(), p.acceleration, gains, params);
    w = std::max(w, desired_attitude(F, p, params).omega.norm());
  }
  return w;
}

namespace {

struct Candidate {
  double c1, c2, psi1;
};

double infeasibility_score(const BoundCertificate& c) {
  const LyapunovMatrices& L = c.matrices;
  auto rel = [](const auto& a) {
    const double top = std::max(std::abs(max_eig(a)), 1e-300);
    return min_eig(a) / top;
  };
  const double worst = std::min({rel(L.M11), rel(L.M12), rel(L.M21), rel(L.M22), rel(L.W1), rel(L.W2), rel(L.W)});
  const CertificateFlags& f = c.flags;
  const int satisfied = f.M11 + f.M12 + f.M21 + f.M22 + f.W1 + f.W2 + f.W;
  return satisfied + 0.5 * std::tanh(worst);
}

}  // namespace

SearchResult search_certificate(const CertificationInputs& base, const SearchOptions& opts) {
  CertificationInputs ci = base;
  ci.H = opts.H_min * (1.0 + 1e-9) + 1e-12;
  const double psi_lo = std::max(opts.psi_floor * (1.0 + 1e-6) + 1e-12, 1e-6);
  if (!(psi_lo < 1.0)) throw Error(ErrorCode::InvalidArgument, "initial attitude error leaves no room for psi1");

  SearchResult best;
  bool have_feasible = false;
  double best_score = -std::numeric_limits<double>::infinity();

  auto consider = [&](const Candidate& k) {
    ci.gains.c1 = k.c1;
    ci.gains.c2 = k.c2;
    ci.psi1 = k.psi1;
    const BoundCertificate c = certify_gains(ci);
    ++best.evaluated;
    const bool ok = c.flags.gains_ok() && c.beta > 0.0;
    const double score = ok ? c.beta : infeasibility_score(c);
    if ((ok && (!have_feasible || score > best_score)) || (!ok && !have_feasible && score > best_score)) {
      have_feasible = have_feasible || ok;
      best_score = score;
      best.c1 = k.c1;
      best.c2 = k.c2;
      best.psi1 = k.psi1;
      best.certificate = c;
    }
  };

  auto axis = [&](const std::optional<double>& pinned, double lo, double hi, int n) {
    return pinned ? std::vector<double>{*pinned} : geomspace(lo, hi, n);
  };
  const int n = std::max(opts.grid, 2);
  const auto c1s = axis(opts.c1, 1e-4, 1e2, n);
  const auto c2s = axis(opts.c2, 1e-6, 1e1, n);
  const auto psis = axis(opts.psi1, psi_lo, 0.999, std::max(n / 3, 2));
  for (double a : c1s)
    for (double b : c2s)
      for (double p : psis) consider({a, b, p});

  double span = std::pow(1e2 / 1e-4, 1.0 / (n - 1));
  for (int r = 0; r < opts.refinements; ++r) {
    const Candidate center{best.c1, best.c2, best.psi1};
    const auto r1 = axis(opts.c1, center.c1 / span, center.c1 * span, 11);
    const auto r2 = axis(opts.c2, center.c2 / span, center.c2 * span, 11);
    const auto rp = axis(opts.psi1, std::max(center.psi1 / span, psi_lo), std::min(center.psi1 * span, 0.999), 7);
    for (double a : r1)
      for (double b : r2)
        for (double p : rp) consider({a, b, p});
    span = std::sqrt(span);
  }
  best.H = ci.H;
  return best;
}

namespace {

State perturbed(const State& x, const Eigen::Matrix<double, 12, 1>& d) {
  State y = x;
  y.p += d.segment<3>(0);
  y.v += d.segment<3>(3);
  y.R = x.R * exp_map(d.segment<3>(6));
  y.omega += d.segment<3>(9);
  return y;
}

double full_state_distance(const State& a, const State& b) {
  return std::sqrt((a.p - b.p).squaredNorm() + (a.v - b.v).squaredNorm() + (a.R - b.R).squaredNorm() +
                   (a.omega - b.omega).squaredNorm());
}

double drift_norm(const State& x, const VehicleParams& params) {
  const Vec3 w = x.omega;
  const Vec3 gyro = params.inertia.inverse() * w.cross(params.inertia * w);
  return std::sqrt(x.v.squaredNorm() + params.gravity * params.gravity + (x.R * hat(w)).squaredNorm() +
                   gyro.squaredNorm());
}

}  // namespace

CalibrationResult uncertainty_bound_calibration(const Scenario& scenario, const CalibrationProbe& probe) {
  if (!probe.trajectory) throw Error(ErrorCode::InvalidArgument, "calibration needs a trajectory");
  if (!(probe.rho > 0.0) || !(probe.duration > 0.0) || probe.time_samples < 1 || probe.state_samples < 1)
    throw Error(ErrorCode::InvalidArgument, "calibration grid must be non-empty with rho > 0");

  std::mt19937_64 rng(probe.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const VehicleParams& params = probe.params;
  UncertaintyBounds raw;
  double max_rate = 0.0;
  long samples = 0, skipped = 0;
  const double ht = 1e-4;
  const double hx = 1e-5;

  auto sigma_at = [&](double t, const State& x) -> std::optional<std::pair<UncertaintyVector, BaselineOutput>> {
    try {
      const BaselineOutput out = baseline_control(x, probe.trajectory(t), probe.gains, params);
      return std::make_pair(compose(scenario, t, x, out.wrench, params), out);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateForce) return std::nullopt;
      throw;
    }
  };
  auto check = [](double v) {
    if (!std::isfinite(v) || v > 1e9) throw Error(ErrorCode::UnboundedSample, "sampled bound diverged");
    return v;
  };

  for (int i = 0; i < probe.time_samples; ++i) {
    const double t = probe.time_samples == 1 ? 0.0 : probe.duration * i / (probe.time_samples - 1);
    const TrajectoryPoint tp = probe.trajectory(t);
    const Vec3 F = desired_force(Vec3::Zero(), Vec3::Zero(), tp.acceleration, probe.gains, params);
    const DesiredAttitude da = desired_attitude(F, tp, params);
    State xd{tp.position, tp.velocity, da.R, da.omega};
    for (int j = 0; j < probe.state_samples; ++j) {
      Eigen::Matrix<double, 12, 1> dir;
      for (int k = 0; k < 12; ++k) dir(k) = gauss(rng);
      dir.normalize();
      // First sample sits on the reference, the next few on the boundary, the rest inside.
      double r = 0.0;
      if (j > 0) r = j <= probe.state_samples / 4 ? probe.rho : probe.rho * std::pow(unit(rng), 1.0 / 12.0);
      Eigen::Matrix<double, 12, 1> d = r * dir;
      if (d.segment<3>(6).norm() > std::numbers::pi) d.segment<3>(6) *= std::numbers::pi / d.segment<3>(6).norm();
      State x = perturbed(xd, d);
      x.omega = d.segment<3>(9) + x.R.transpose() * xd.R * xd.omega;

      const auto base = sigma_at(t, x);
      if (!base) {
        ++skipped;
        continue;
      }
      ++samples;
      const UncertaintyVector& s = base->first;
      raw.delta_sigma = std::max(raw.delta_sigma, check(s.stacked().norm()));
      raw.delta_sigma_m = std::max(raw.delta_sigma_m, check(s.matched.norm()));
      raw.delta_sigma_um = std::max(raw.delta_sigma_um, check(s.unmatched.norm()));
      raw.delta_ub = std::max(raw.delta_ub, check(base->second.wrench.as_vector().norm()));
      raw.delta_f = std::max(raw.delta_f, check(drift_norm(x, params)));
      max_rate = std::max(max_rate, check(base->second.desired.omega.norm()));

      if (const auto later = sigma_at(t + ht, x)) {
        raw.L_sigma_t = std::max(raw.L_sigma_t, check((later->first.stacked() - s.stacked()).norm() / ht));
        raw.L_sigma_m_t = std::max(raw.L_sigma_m_t, check((later->first.matched - s.matched).norm() / ht));
      }
      Eigen::Matrix<double, 12, 1> dx;
      for (int k = 0; k < 12; ++k) dx(k) = gauss(rng);
      const State y = perturbed(x, hx * dx.normalized());
      const double dist = full_state_distance(x, y);
      if (const auto moved = sigma_at(t, y); moved && dist > 0.0) {
        raw.L_sigma_x = std::max(raw.L_sigma_x, check((moved->first.stacked() - s.stacked()).norm() / dist));
        raw.L_sigma_m_x = std::max(raw.L_sigma_m_x, check((moved->first.matched - s.matched).norm() / dist));
      }
    }
  }
  if (samples == 0) throw Error(ErrorCode::UnboundedSample, "no admissible sample in the tube");

  const double k = probe.margin;
  CalibrationResult out;
  UncertaintyBounds& b = out.bounds;
  b.delta_sigma = k * raw.delta_sigma;
  b.delta_sigma_m = k * raw.delta_sigma_m;
  b.delta_sigma_um = k * raw.delta_sigma_um;
  b.L_sigma_t = k * raw.L_sigma_t;
  b.L_sigma_x = k * raw.L_sigma_x;
  b.L_sigma_m_t = k * raw.L_sigma_m_t;
  b.L_sigma_m_x = k * raw.L_sigma_m_x;
  b.delta_f = k * raw.delta_f;
  b.delta_ub = k * raw.delta_ub;
  b.delta_sigma_hat = b.delta_sigma;
  out.max_omega_d = k * max_rate;
  out.grid = fmt::format(
      "{} times on [0, {}] x {} states per time (1 on reference, {} on the rho={} boundary, rest uniform in the "
      "ball); finite differences dt={} dx={}; margin {}; {} samples, {} skipped for degenerate force",
      probe.time_samples, probe.duration, probe.state_samples, probe.state_samples / 4, probe.rho, ht, hx, k,
      samples, skipped);
  return out;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string mat(const auto& a) {
  std::string s;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += (s.empty() ? "" : " ") + num(a(i, j));
  return s;
}

}  // namespace

std::string certificate_report(const BoundCertificate& c, const CertificationInputs& ci) {
  std::string r;
  auto line = [&r](const std::string& k, const std::string& v) { r += k + ": " + v + "\n"; };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  const std::string failed = c.flags.first_failed(c.tube_evaluated);
  line("verdict", c.feasible() ? "feasible" : "infeasible");
  line("failed_flag", failed.empty() ? "none" : failed);
  line("tube_evaluated", flag(c.tube_evaluated));
  line("c1", num(ci.gains.c1));
  line("c2", num(ci.gains.c2));
  line("psi1", num(ci.psi1));
  line("H", num(ci.H));
  line("alpha", num(c.matrices.alpha));
  line("beta", num(c.beta));
  line("gamma_lo", num(c.gamma_lo));
  line("gamma_hi", num(c.gamma_hi));
  line("phi1", num(c.phi1));
  line("zeta1", num(c.zeta1));
  line("zeta2", num(c.zeta2));
  line("zeta3", num(c.zeta3));
  line("zeta4", num(c.zeta4));
  line("rho", num(c.rho));
  line("mu", num(c.mu));
  line("Ts_max", num(c.Ts_max));
  line("Ts", num(ci.l1p.sample_time));
  line("omega", num(c.omega));
  line("d0", num(ci.d0));
  line("V0", num(ci.V0));
  line("epsilon", num(ci.epsilon));
  line("t1", num(ci.t1));
  const StructuralConstants& s = ci.structural;
  line("c3", num(s.c3));
  line("c4", num(s.c4));
  line("L_B", num(s.L_B));
  line("delta_B", num(s.delta_B));
  line("delta_Bbar", num(s.delta_Bbar));
  line("delta_Bbar_inv", num(s.delta_Bbar_inv));
  line("delta_BF", num(s.delta_BF));
  line("delta_BbarF", num(s.delta_BbarF));
  const UncertaintyBounds& b = ci.bounds;
  line("delta_sigma", num(b.delta_sigma));
  line("delta_sigma_m", num(b.delta_sigma_m));
  line("delta_sigma_um", num(b.delta_sigma_um));
  line("L_sigma_t", num(b.L_sigma_t));
  line("L_sigma_x", num(b.L_sigma_x));
  line("L_sigma_m_t", num(b.L_sigma_m_t));
  line("L_sigma_m_x", num(b.L_sigma_m_x));
  line("delta_f", num(b.delta_f));
  line("delta_ub", num(b.delta_ub));
  line("delta_sigma_hat", num(b.delta_sigma_hat));
  const CertificateFlags& f = c.flags;
  line("flag.M11", flag(f.M11));
  line("flag.M12", flag(f.M12));
  line("flag.M21", flag(f.M21));
  line("flag.M22", flag(f.M22));
  line("flag.W1", flag(f.W1));
  line("flag.W2", flag(f.W2));
  line("flag.W", flag(f.W));
  line("flag.bandwidth", flag(f.bandwidth));
  line("flag.sample_time", flag(f.sample_time));
  line("flag.unmatched_bound", flag(f.unmatched_bound));
  const LyapunovMatrices& L = c.matrices;
  line("W1", mat(L.W1));
  line("W12", mat(L.W12));
  line("W2", mat(L.W2));
  line("W", mat(L.W));
  line("M11", mat(L.M11));
  line("M12", mat(L.M12));
  line("M21", mat(L.M21));
  line("M22", mat(L.M22));
  return r;
}

namespace {

std::map<std::string, std::string> report_lines(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) {
    const auto pos = l.find(": ");
    if (pos == std::string::npos) continue;
    out[l.substr(0, pos)] = l.substr(pos + 2);
  }
  return out;
}

template <int R, int C>
void read_matrix(const std::string& s, Eigen::Matrix<double, R, C>& m) {
  std::istringstream in(s);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < C; ++j)
      if (!(in >> m(i, j))) throw Error(ErrorCode::ParseError, "malformed matrix in report");
}

}  // namespace

std::map<std::string, double> report_scalars(const std::string& text) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : report_lines(text)) {
    std::istringstream in(v);
    double d;
    std::string rest;
    if ((in >> d) && !(in >> rest)) out[k] = d;
  }
  return out;
}

BoundCertificate parse_certificate_report(const std::string& text) {
  const auto lines = report_lines(text);
  const auto scalars = report_scalars(text);
  auto get = [&](const std::string& k) {
    const auto it = scalars.find(k);
    if (it == scalars.end()) throw Error(ErrorCode::ParseError, "report is missing " + k);
    return it->second;
  };
  auto flag = [&](const std::string& k) {
    const auto it = lines.find(k);
    if (it == lines.end()) throw Error(ErrorCode::ParseError, "report is missing " + k);
    return it->second == "true";
  };
  BoundCertificate c;
  c.tube_evaluated = flag("tube_evaluated");
  c.matrices.alpha = get("alpha");
  c.beta = get("beta");
  c.gamma_lo = get("gamma_lo");
  c.gamma_hi = get("gamma_hi");
  c.phi1 = get("phi1");
  c.zeta1 = get("zeta1");
  c.zeta2 = get("zeta2");
  c.zeta3 = get("zeta3");
  c.zeta4 = get("zeta4");
  c.rho = get("rho");
  c.mu = get("mu");
  c.Ts_max = get("Ts_max");
  c.omega = get("omega");
  CertificateFlags& f = c.flags;
  f.M11 = flag("flag.M11");
  f.M12 = flag("flag.M12");
  f.M21 = flag("flag.M21");
  f.M22 = flag("flag.M22");
  f.W1 = flag("flag.W1");
  f.W2 = flag("flag.W2");
  f.W = flag("flag.W");
  f.bandwidth = flag("flag.bandwidth");
  f.sample_time = flag("flag.sample_time");
  f.unmatched_bound = flag("flag.unmatched_bound");
  LyapunovMatrices& L = c.matrices;
  read_matrix(lines.at("W1"), L.W1);
  read_matrix(lines.at("W12"), L.W12);
  read_matrix(lines.at("W2"), L.W2);
  read_matrix(lines.at("W"), L.W);
  read_matrix(lines.at("M11"), L.M11);
  read_matrix(lines.at("M12"), L.M12);
  read_matrix(lines.at("M21"), L.M21);
  read_matrix(lines.at("M22"), L.M22);
  return c;
}

}  // namespace l1quad
