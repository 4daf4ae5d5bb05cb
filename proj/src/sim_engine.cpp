#include "l1quad/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "l1quad/errors.hpp"
#include "l1quad/so3.hpp"
#include "l1quad/trajectory.hpp"

namespace l1quad {

void SimConfig::validate() const {
  params.validate();
  gains.validate();
  l1p.validate();
  scenario.validate();
  if (!(duration > 0.0)) throw Error(ErrorCode::RangeError, "duration must be positive");
  if (substeps < 1 || substeps > 10) throw Error(ErrorCode::RangeError, "substeps must lie in 1..10");
  if (!(abort_radius > 0.0)) throw Error(ErrorCode::RangeError, "abort radius must be positive");
  if (log_stride < 1) throw Error(ErrorCode::RangeError, "log stride must be at least 1");
  if (l1p.sample_time / substeps > 0.01) throw Error(ErrorCode::RangeError, "physics step exceeds 0.01 s");
}

State initial_state(const SimConfig& cfg) {
  const Trajectory traj = make_trajectory(cfg.scenario.trajectory);
  const TrajectoryPoint tp = traj(0.0);
  const InitialPerturbation& ip = cfg.initial;

  Vec3 dp = ip.position, dv = ip.velocity, dr = ip.rotation, dw = ip.omega;
  if (ip.random_scale > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> n(0.0, ip.random_scale);
    for (Vec3* v : {&dp, &dv, &dr, &dw})
      for (int i = 0; i < 3; ++i) (*v)(i) += n(rng);
  }

  State x;
  x.p = tp.position + dp;
  x.v = tp.velocity + dv;
  const Vec3 F = desired_force(Vec3::Zero(), Vec3::Zero(), tp.acceleration, cfg.gains, cfg.params);
  const DesiredAttitude nominal = desired_attitude(F, tp, cfg.params);
  x.R = nominal.R;
  x.omega = nominal.omega;
  if (ip.align_attitude) {
    for (int i = 0; i < 50; ++i) {
      const BaselineOutput out = baseline_control(x, tp, cfg.gains, cfg.params);
      const double change = (out.desired.R - x.R).norm() + (out.desired.omega - x.omega).norm();
      x.R = out.desired.R;
      x.omega = out.desired.omega;
      if (change < 1e-15) break;
    }
  }
  const Mat3 offset = exp_map(dr);
  x.R = orthonormalize(x.R * offset);
  x.omega = dw + offset.transpose() * x.omega;
  return x;
}

SimLog run_closed_loop(const SimConfig& cfg, const TickObserver& observer) {
  cfg.validate();
  const Trajectory traj = make_trajectory(cfg.scenario.trajectory);
  const VehicleParams& params = cfg.params;
  const double Ts = cfg.l1p.sample_time;
  const long n = std::lround(cfg.duration / Ts);
  const double h = Ts / cfg.substeps;

  SimLog log;
  log.sample_time = Ts;
  if (cfg.store_log) log.ticks.reserve(static_cast<std::size_t>(n / cfg.log_stride + 2));

  State x = initial_state(cfg);
  L1State l1;
  DisturbanceState dstate = initial_disturbance_state(cfg.scenario);
  double sum_sq = 0.0;

  for (long k = 0; k <= n; ++k) {
    const double t = k * Ts;
    TickRecord rec;
    rec.t = t;
    rec.x = x;
    ControlWrench u;
    try {
      const TrajectoryPoint tp = traj(t);
      const BaselineOutput out = baseline_control(x, tp, cfg.gains, params);
      rec.xd = {tp.position, tp.velocity, out.desired.R, out.desired.omega};
      rec.u_b = out.wrench.as_vector();
      rec.l1_on = cfg.scenario.l1_active(t);
      if (rec.l1_on) {
        rec.u_ad = l1_step(l1, partial_state(x), x.R, out.wrench, params, cfg.l1p);
        rec.sigma_hat = l1.sigma_hat.stacked();
        rec.z_tilde = l1.z_tilde;
      } else {
        l1 = L1State{};
      }
      u = ControlWrench::from_vector(rec.u_b + rec.u_ad);
      if (params.saturate_motors) {
        const MotorCommand mix = motor_mixing(u, params);
        if (mix.saturated) ++log.saturation_count;
        u = wrench_from_thrusts(mix.thrusts, params);
      }
      rec.sigma = compose(cfg.scenario, t, x, u, params, &dstate).stacked();
      const TrackingErrors e = out.errors;
      rec.d = std::sqrt(e.ep.squaredNorm() + e.ev.squaredNorm() + e.eR.squaredNorm() + e.eOmega.squaredNorm());
      rec.V = lyapunov_value(e.ep, e.ev, e.eR, e.eOmega, x.R, out.desired.R, cfg.gains, params);
      sum_sq += e.ep.squaredNorm();
    } catch (const Error& err) {
      log.diverged = true;
      log.diverged_time = t;
      log.diverged_reason = err.what();
      break;
    }

    ++log.tick_count;
    log.max_distance = std::max(log.max_distance, rec.d);
    if (observer) observer(rec);
    if (cfg.store_log && (k % cfg.log_stride == 0 || k == n)) log.ticks.push_back(rec);
    if (!(rec.d <= cfg.abort_radius)) {
      log.diverged = true;
      log.diverged_time = t;
      log.diverged_reason = fmt::format("tracking distance {} exceeds abort radius {}", rec.d, cfg.abort_radius);
      break;
    }
    if (k == n) break;

    try {
      for (int s = 0; s < cfg.substeps; ++s) {
        const double ts = t + s * h;
        const UncertaintySource source = [&](double tau, const State& y) {
          return compose(cfg.scenario, tau, y, u, params, &dstate);
        };
        const State next = step(x, u, source, ts, h, params);
        if (!dstate.pendulums.empty()) advance(dstate, cfg.scenario, x, u, h, params);
        x = next;
      }
    } catch (const Error& err) {
      log.diverged = true;
      log.diverged_time = t;
      log.diverged_reason = err.what();
      break;
    }
  }
  log.clamp_count = l1.clamp_count;
  log.rmse = log.tick_count > 0 ? std::sqrt(sum_sq / log.tick_count) : 0.0;
  return log;
}

double rmse(const SimLog& log, double t0, double t1) {
  double sum = 0.0;
  long count = 0;
  for (const auto& r : log.ticks) {
    if (r.t < t0 || r.t > t1) continue;
    sum += (r.x.p - r.xd.p).squaredNorm();
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::EmptyWindow, fmt::format("no ticks in [{}, {}]", t0, t1));
  return std::sqrt(sum / count);
}

TubeCheck tube_check(const SimLog& log, double rho) {
  TubeCheck c;
  for (const auto& r : log.ticks) {
    c.max_d = std::max(c.max_d, r.d);
    if (c.ok && !(r.d <= rho)) {
      c.ok = false;
      c.first_violation_t = r.t;
    }
  }
  return c;
}

std::string csv_header() {
  std::string h = "t";
  auto add = [&h](const std::string& prefix, int n) {
    for (int i = 0; i < n; ++i) h += fmt::format(",{}{}", prefix, i);
  };
  h += ",p_x,p_y,p_z,v_x,v_y,v_z";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h += fmt::format(",R_{}{}", i, j);
  h += ",omega_x,omega_y,omega_z,pd_x,pd_y,pd_z,ub_f,ub_mx,ub_my,ub_mz,uad_f,uad_mx,uad_my,uad_mz";
  add("sigma_", 6);
  add("sigma_hat_", 6);
  add("ztilde_", 6);
  h += ",d,V";
  return h;
}

void write_csv(std::ostream& out, const SimLog& log) {
  out << csv_header() << '\n';
  std::string line;
  for (const auto& r : log.ticks) {
    line = fmt::format("{:.17g}", r.t);
    auto put = [&line](const auto& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) line += fmt::format(",{:.17g}", v(i));
    };
    put(r.x.p);
    put(r.x.v);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) line += fmt::format(",{:.17g}", r.x.R(i, j));
    put(r.x.omega);
    put(r.xd.p);
    put(r.u_b);
    put(r.u_ad);
    put(r.sigma);
    put(r.sigma_hat);
    put(r.z_tilde);
    line += fmt::format(",{:.17g},{:.17g}\n", r.d, r.V);
    out << line;
  }
}

std::vector<SweepRow> benchmark_sweep(const SweepGrid& grid, const SimConfig& base, unsigned threads) {
  if (grid.speeds.empty() || grid.weights.empty() || grid.modes.empty())
    throw Error(ErrorCode::InvalidArgument, "sweep grid must be non-empty");
  std::vector<SweepRow> rows;
  for (double s : grid.speeds)
    for (double w : grid.weights)
      for (bool m : grid.modes) rows.push_back({s, w, m});

  auto run_cell = [&](SweepRow& row) {
    SimConfig cfg = base;
    cfg.store_log = false;
    TrajectorySpec& ts = cfg.scenario.trajectory;
    ts.kind = TrajectorySpec::Kind::Circle;
    ts.radius = grid.radius;
    ts.speed = row.speed;
    ts.altitude = grid.altitude;
    if (row.weight > 0.0) cfg.scenario.terms.push_back(MassMismatch{cfg.params.mass + row.weight});
    cfg.scenario.l1_enabled = row.l1_on;
    cfg.scenario.schedule.clear();
    double sum = 0.0;
    long count = 0;
    const SimLog log = run_closed_loop(cfg, [&](const TickRecord& r) {
      if (r.t < grid.settle_time) return;
      sum += (r.x.p - r.xd.p).squaredNorm();
      ++count;
    });
    row.crashed = log.diverged;
    row.max_d = log.max_distance;
    row.rmse = count > 0 ? std::sqrt(sum / count) : 0.0;
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(rows.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(rows.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        run_cell(rows[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string sweep_csv_header() { return "speed,weight,mode,rmse,max_d,crashed"; }

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << sweep_csv_header() << '\n';
  for (const auto& r : rows)
    out << fmt::format("{:.17g},{:.17g},{},{:.17g},{:.17g},{}\n", r.speed, r.weight, r.l1_on ? "l1_on" : "l1_off",
                       r.rmse, r.max_d, r.crashed ? 1 : 0);
}

EstimationStudy estimation_error_study(const SimConfig& base, const std::vector<double>& sample_times) {
  if (sample_times.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two sample times");
  EstimationStudy study;
  for (double Ts : sample_times) {
    SimConfig cfg = base;
    cfg.l1p.sample_time = Ts;
    cfg.store_log = false;
    EstimationPoint p{Ts, 0.0};
    const SimLog log = run_closed_loop(cfg, [&](const TickRecord& r) {
      if (r.l1_on && r.t >= Ts - 1e-12) p.max_error = std::max(p.max_error, (r.sigma - r.sigma_hat).norm());
    });
    if (log.diverged) throw Error(ErrorCode::NonFinite, "estimation run diverged: " + log.diverged_reason);
    study.points.push_back(p);
  }
  study.degenerate = std::all_of(study.points.begin(), study.points.end(),
                                 [](const EstimationPoint& p) { return p.max_error < 1e-12; });
  if (study.degenerate) return study;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(study.points.size());
  for (const auto& p : study.points) {
    const double lx = std::log(p.sample_time), ly = std::log(std::max(p.max_error, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  study.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return study;
}

}  // namespace l1quad
