#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "l1quad/bounds.hpp"
#include "l1quad/disturbances.hpp"
#include "l1quad/geometric_controller.hpp"
#include "l1quad/l1_controller.hpp"

namespace l1quad {

/// Offset added to the exactly-tracking initial state. With `align_attitude` the initial
/// attitude and rate are set to the desired ones produced by the perturbed p and v before
/// the attitude offsets are applied.
struct InitialPerturbation {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 rotation = Vec3::Zero();  // rotation vector applied in the body frame
  Vec3 omega = Vec3::Zero();
  double random_scale = 0.0;  // std dev of extra Gaussian offsets drawn from `seed`
  bool align_attitude = true;
};

struct SimConfig {
  VehicleParams params;
  GainSet gains;
  L1Params l1p;
  Scenario scenario;
  double duration = 10.0;  // s
  int substeps = 1;        // physics steps per controller tick, 1..10
  unsigned seed = 0;
  InitialPerturbation initial;
  double abort_radius = 10.0;
  int log_stride = 1;  // store every n-th tick
  bool store_log = true;

  /// Throws Error(RangeError) on an invalid field.
  void validate() const;
};

struct TickRecord {
  double t = 0.0;
  State x;
  DesiredState xd;
  Vec4 u_b = Vec4::Zero();
  Vec4 u_ad = Vec4::Zero();
  Vec6 sigma = Vec6::Zero();
  Vec6 sigma_hat = Vec6::Zero();
  Vec6 z_tilde = Vec6::Zero();
  double d = 0.0;
  double V = 0.0;
  bool l1_on = false;
};

struct SimLog {
  std::vector<TickRecord> ticks;
  double sample_time = 0.0;
  long tick_count = 0;  // ticks executed, including those not stored
  double rmse = 0.0;    // over every executed tick
  double max_distance = 0.0;
  long saturation_count = 0;
  long clamp_count = 0;
  bool diverged = false;
  double diverged_time = 0.0;
  std::string diverged_reason;
};

using TickObserver = std::function<void(const TickRecord&)>;

/// Initial state for the configuration (exact tracking plus the configured perturbation).
State initial_state(const SimConfig& cfg);

/// Runs the closed loop at the L1 sample time. Each tick: baseline control, L1 step when
/// scheduled, u = u_b + u_ad, true uncertainty, log, then `substeps` RK4 physics steps.
/// Divergence (distance above the abort radius or a non-finite state) stops the run and
/// sets `diverged`. `observer` sees every tick, stored or not.
SimLog run_closed_loop(const SimConfig& cfg, const TickObserver& observer = {});

/// Root mean square of |e_p| over stored ticks with t in [t0, t1]. Throws Error(EmptyWindow).
double rmse(const SimLog& log, double t0, double t1);

struct TubeCheck {
  bool ok = true;
  double max_d = 0.0;
  double first_violation_t = -1.0;
};

TubeCheck tube_check(const SimLog& log, double rho);

std::string csv_header();
void write_csv(std::ostream& out, const SimLog& log);

struct SweepGrid {
  std::vector<double> speeds;   // m/s, circle of radius 1 m at 1 m altitude
  std::vector<double> weights;  // kg added to the real mass
  std::vector<bool> modes;      // L1 on/off
  double radius = 1.0;
  double altitude = 1.0;
  double settle_time = 2.0;  // RMSE window starts here
};

struct SweepRow {
  double speed = 0.0;
  double weight = 0.0;
  bool l1_on = false;
  double rmse = 0.0;
  double max_d = 0.0;
  bool crashed = false;
};

/// One run per cell, executed on up to `threads` workers (0 = hardware concurrency).
/// Rows are ordered speed-major, then weight, then mode, independent of scheduling.
std::vector<SweepRow> benchmark_sweep(const SweepGrid& grid, const SimConfig& base, unsigned threads = 0);

std::string sweep_csv_header();
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct EstimationPoint {
  double sample_time = 0.0;
  double max_error = 0.0;  // max |sigma - sigma_hat| over ticks with t >= T_s
};

struct EstimationStudy {
  std::vector<EstimationPoint> points;
  double slope = 0.0;  // least-squares slope of log(max_error) against log(T_s)
  bool degenerate = false;  // every error below 1e-12, slope not meaningful
};

/// Re-runs `base` with each sample time and measures the estimation error.
EstimationStudy estimation_error_study(const SimConfig& base, const std::vector<double>& sample_times);

}  // namespace l1quad
