#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "l1quad/disturbances.hpp"
#include "l1quad/dynamics.hpp"
#include "l1quad/geometric_controller.hpp"
#include "l1quad/l1_controller.hpp"

namespace l1quad {

/// Bounds and Lipschitz constants of the lumped uncertainty over the tube, plus the
/// state-dependent magnitudes that enter phi_1.
struct UncertaintyBounds {
  double delta_sigma = 0.0;
  double delta_sigma_m = 0.0;
  double delta_sigma_um = 0.0;
  double L_sigma_t = 0.0;
  double L_sigma_x = 0.0;
  double L_sigma_m_t = 0.0;
  double L_sigma_m_x = 0.0;
  double delta_f = 0.0;          // sup ||f_F(x)|| over the tube
  double delta_ub = 0.0;         // sup ||u_b||
  double delta_sigma_hat = 0.0;  // sup ||sigma_hat||
};

/// Constants that only depend on the vehicle, gains and tube radius.
struct StructuralConstants {
  double delta_B = 0.0;
  double delta_Bbar = 0.0;
  double delta_Bbar_inv = 0.0;
  double delta_BF = 0.0;
  double delta_BbarF = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double L_B = 0.0;
};

struct CertificationInputs {
  GainSet gains;
  VehicleParams params;
  L1Params l1p;
  double psi1 = 0.1;
  double H = 0.0;  // strict upper bound on ||-m g e3 + m p''_d||
  UncertaintyBounds bounds;
  StructuralConstants structural;
  double d0 = 0.0;             // d(x(0), x_d(0))
  double V0 = 0.0;             // V at t = 0
  double epsilon = 1e-3;
  double t1 = 1.0;             // s, ultimate-bound horizon
  double max_omega_d = 0.0;    // sup ||Omega_d|| along the reference, rad/s
  bool inflate_sigma_hat = true;  // raise delta_sigma_hat to delta_sigma + zeta2 T_s

  /// Throws Error(RangeError) if psi1 is outside (0, 1) or any bound is negative.
  void validate() const;
};

struct LyapunovMatrices {
  double alpha = 0.0;
  Mat2 W1, W12, W2;
  Mat4 W;
  Mat2 M11, M12, M21, M22;
};

/// Positive-definiteness and feasibility verdicts, in the order they are reported.
struct CertificateFlags {
  bool M11 = false, M12 = false, M21 = false, M22 = false;
  bool W1 = false, W2 = false, W = false;
  bool bandwidth = false, sample_time = false, unmatched_bound = false;

  bool gains_ok() const { return M11 && M12 && M21 && M22 && W1 && W2 && W; }
  bool tube_ok() const { return bandwidth && sample_time && unmatched_bound; }
  /// Name of the first false flag, empty when all are true. `include_tube` adds the
  /// sampling and unmatched-bound conditions.
  std::string first_failed(bool include_tube) const;
};

struct BoundCertificate {
  LyapunovMatrices matrices;
  CertificateFlags flags;
  double beta = 0.0;
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  double phi1 = 0.0, zeta1 = 0.0, zeta2 = 0.0, zeta3 = 0.0, zeta4 = 0.0;
  double rho = 0.0;
  double mu = 0.0;
  double Ts_max = 0.0;
  double omega = 0.0;  // filter bandwidth used in the tube conditions
  bool tube_evaluated = false;

  bool feasible() const { return flags.gains_ok() && (!tube_evaluated || flags.tube_ok()); }
};

/// Gains are reduced to scalars with the smallest eigenvalue for stabilizing entries and
/// the largest one for destabilizing entries.
LyapunovMatrices lyapunov_matrices(const CertificationInputs& ci);

/// Eigenvalue checks and the decay/sandwich constants. beta is set to its upper bound
/// lambda_m(W) / lambda_M(diag(M12, M22)). A failed check is reported in flags, not thrown.
BoundCertificate certify_gains(const CertificationInputs& ci);

/// V = 1/2 e_p.K_p e_p + 1/2 m |e_v|^2 + c1 e_p.e_v + 1/2 e_Omega.J e_Omega + k_R Psi + c2 e_R.e_Omega,
/// with k_R = lambda_m(K_R).
double lyapunov_value(const Vec3& ep, const Vec3& ev, const Vec3& eR, const Vec3& eOmega, const Mat3& R,
                      const Mat3& Rd, const GainSet& gains, const VehicleParams& params);

struct DesiredState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
};

TrackingErrors tracking_errors(const State& x, const DesiredState& xd);

/// Euclidean norm of (e_p, e_v, e_R, e_Omega).
double tracking_distance(const State& x, const DesiredState& xd);

/// Norms of the input matrices plus c3, c4 and L_B for a tube of radius rho.
StructuralConstants structural_constants(const GainSet& gains, const VehicleParams& params, double rho,
                                         double max_omega_d);

struct ZetaConstants {
  double phi1 = 0.0, zeta1 = 0.0, zeta2 = 0.0, zeta3 = 0.0, zeta4 = 0.0;
};

/// Filter bandwidth used by the tube conditions: zeta1 uses the slowest channel and
/// zeta3 the fastest.
ZetaConstants zeta_constants(const CertificationInputs& ci, double beta);
ZetaConstants zeta_constants(const CertificationInputs& ci, double beta, double omega_slow, double omega_fast);

double tube_radius(double d0, double gamma_lo, double gamma_hi, double epsilon);

struct Feasibility {
  bool bandwidth = false;        // margin > 0
  bool sample_time = false;      // T_s <= Ts_max
  bool unmatched_bound = false;  // delta_sigma_um small enough for the tube
  double Ts_max = 0.0;
  double margin = 0.0;  // gamma_lo rho^2 - c3 rho zeta1 - c4 rho delta_sigma_um - V0
};

Feasibility feasibility_conditions(const CertificationInputs& ci, double rho, double gamma_lo,
                                   const ZetaConstants& z);

double ultimate_bound(double Ts, double t1, const CertificationInputs& ci, double rho, double beta,
                      double gamma_lo, const ZetaConstants& z);

/// Psi(R0, Rd0) < psi1 < 1 and |e_Omega0|^2 < (2 / lambda_M(J)) lambda_m(K_R) (psi1 - Psi).
bool region_of_attraction_check(const Mat3& R0, const Mat3& Rd0, const Vec3& eOmega0, double psi1, const Mat3& KR,
                                const Mat3& J);

/// Delta_sigma for t < T_s, zeta2 T_s afterwards.
double estimation_error_bound(double zeta2, double Ts, double delta_sigma, double t);

/// Smallest d >= given with d = delta_sigma + zeta2(d) T_s. Infinity when no such d exists.
double consistent_sigma_hat_bound(const CertificationInputs& ci, double beta);

/// Gain certificate followed, when `with_tube` is set, by rho, the zeta constants, the
/// sampling/bandwidth conditions and mu. The structural constants are recomputed from rho.
BoundCertificate certify(CertificationInputs& ci, bool with_tube);

/// Smallest strict H: sup over the reference of ||-m g e3 + m p''_d||, sampled every dt.
double force_bound(const Trajectory& traj, double duration, double dt, const VehicleParams& params);
double max_desired_rate(const Trajectory& traj, double duration, double dt, const GainSet& gains,
                        const VehicleParams& params);

struct SearchOptions {
  std::optional<double> c1;    // pinned when set
  std::optional<double> c2;
  std::optional<double> psi1;
  double psi_floor = 0.0;      // Psi(R(0), R_d(0)); psi1 must exceed it
  double H_min = 0.0;
  int grid = 41;
  int refinements = 4;
};

struct SearchResult {
  double c1 = 0.0, c2 = 0.0, psi1 = 0.0, H = 0.0;
  BoundCertificate certificate;
  long evaluated = 0;
};

/// Grid search with log-spaced refinement over (c1, c2, psi1) that maximizes beta with
/// every gain flag true. H is fixed just above H_min. When nothing is feasible, the
/// returned certificate is the grid point with the most satisfied flags, ties broken by the
/// least negative relative eigenvalue.
SearchResult search_certificate(const CertificationInputs& base, const SearchOptions& opts);

struct CalibrationProbe {
  Trajectory trajectory;
  GainSet gains;
  VehicleParams params;
  double rho = 1.0;       // tube radius to sample
  double duration = 10.0;
  int time_samples = 1201;
  int state_samples = 40;
  double margin = 1.2;
  unsigned seed = 7;
};

struct CalibrationResult {
  UncertaintyBounds bounds;
  std::string grid;  // sampling description
  double max_omega_d = 0.0;
};

/// Samples sigma(t, x) of the scenario, the baseline command and the drift over states with
/// tracking distance <= rho and inflates every maximum by the probe margin. Pendulum terms
/// are sampled hanging at rest. Throws Error(UnboundedSample) on non-finite or huge samples.
CalibrationResult uncertainty_bound_calibration(const Scenario& scenario, const CalibrationProbe& probe);

/// Key: value report of every matrix, scalar and flag.
std::string certificate_report(const BoundCertificate& cert, const CertificationInputs& ci);

/// Reads the scalar and flag lines of a report back into a certificate.
BoundCertificate parse_certificate_report(const std::string& text);

/// All "key: number" lines of a report.
std::map<std::string, double> report_scalars(const std::string& text);

}  // namespace l1quad
