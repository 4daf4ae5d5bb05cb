#include "l1quad/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "l1quad/so3.hpp"

namespace l1quad {

namespace {

AppConfig load(const RunManifest& m) {
  return m.config_path.empty() ? parse_config("", m.overrides) : load_config(m.config_path, m.overrides);
}

std::ofstream open_out(const RunManifest& m, const std::string& name, std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(m.out_dir, ec);
  path = (std::filesystem::path(m.out_dir) / name).string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  return f;
}

void close_out(std::ofstream& f, const std::string& path) {
  f.close();
  if (!f) throw Error(ErrorCode::Io, "failed writing " + path);
}

std::string summary(const SimLog& log, const char* label) {
  return fmt::format(
      "{}.rmse: {:.17g}\n{}.max_distance: {:.17g}\n{}.saturation_count: {}\n{}.clamp_count: {}\n{}.diverged: {}\n",
      label, log.rmse, label, log.max_distance, label, log.saturation_count, label, log.clamp_count, label,
      log.diverged ? "true" : "false");
}

}  // namespace

CertificationRun run_certification(const AppConfig& cfg) {
  CertificationRun run;
  CertificationInputs& ci = run.inputs;
  ci = cfg.cert;
  ci.gains = cfg.sim.gains;
  ci.params = cfg.sim.params;
  ci.l1p = cfg.sim.l1p;
  const CertifySettings& cs = cfg.certify;

  const Trajectory traj = make_trajectory(cfg.sim.scenario.trajectory);
  const State x0 = initial_state(cfg.sim);
  const BaselineOutput out0 = baseline_control(x0, traj(0.0), ci.gains, ci.params);
  run.psi0 = attitude_error_psi(x0.R, out0.desired.R);

  SearchOptions so;
  so.c1 = cs.c1;
  so.c2 = cs.c2;
  so.psi1 = cs.psi1;
  so.psi_floor = run.psi0;
  so.H_min = cs.H ? *cs.H : force_bound(traj, cfg.sim.duration, ci.l1p.sample_time, ci.params);
  so.grid = cs.search_grid;
  if (cs.H) so.H_min = *cs.H / (1.0 + 1e-9);
  run.search = search_certificate(ci, so);
  ci.gains.c1 = run.search.c1;
  ci.gains.c2 = run.search.c2;
  ci.psi1 = run.search.psi1;
  ci.H = cs.H ? *cs.H : run.search.H;

  const TrackingErrors& e = out0.errors;
  ci.d0 = std::sqrt(e.ep.squaredNorm() + e.ev.squaredNorm() + e.eR.squaredNorm() + e.eOmega.squaredNorm());
  ci.V0 = lyapunov_value(e.ep, e.ev, e.eR, e.eOmega, x0.R, out0.desired.R, ci.gains, ci.params);
  run.region_of_attraction =
      region_of_attraction_check(x0.R, out0.desired.R, e.eOmega, ci.psi1, ci.gains.kr, ci.params.inertia);

  const BoundCertificate gains_only = certify_gains(ci);
  if (cs.tube && gains_only.flags.gains_ok() && gains_only.gamma_lo > 0.0) {
    const double rho = tube_radius(ci.d0, gains_only.gamma_lo, gains_only.gamma_hi, ci.epsilon);
    if (cs.calibrate && !cs.bounds_given) {
      CalibrationProbe probe;
      probe.trajectory = traj;
      probe.gains = ci.gains;
      probe.params = ci.params;
      probe.rho = rho;
      probe.duration = cfg.sim.duration;
      probe.time_samples = cs.time_samples;
      probe.state_samples = cs.state_samples;
      probe.margin = cs.margin;
      probe.seed = cfg.sim.seed + 7;
      const CalibrationResult cal = uncertainty_bound_calibration(cfg.sim.scenario, probe);
      ci.bounds = cal.bounds;
      if (ci.max_omega_d == 0.0) ci.max_omega_d = cal.max_omega_d;
      run.calibration_grid = cal.grid;
    } else if (ci.max_omega_d == 0.0) {
      ci.max_omega_d = max_desired_rate(traj, cfg.sim.duration, ci.l1p.sample_time, ci.gains, ci.params);
    }
  }
  run.certificate = certify(ci, cs.tube);
  return run;
}

int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const AppConfig cfg = load(m);
  const SimLog log = run_closed_loop(cfg.sim);
  std::string path;
  auto csv = open_out(m, "sim.csv", path);
  write_csv(csv, log);
  close_out(csv, path);

  std::string report = fmt::format("scenario: {}\nticks: {}\nsample_time: {:.17g}\n", cfg.sim.scenario.name,
                                   log.tick_count, log.sample_time);
  const char* label = cfg.sim.scenario.l1_enabled ? "l1_on" : "l1_off";
  report += summary(log, label);
  if (log.diverged) report += fmt::format("diverged_time: {:.17g}\ndiverged_reason: {}\n", log.diverged_time, log.diverged_reason);
  if (cfg.certify.rho) {
    const TubeCheck tc = tube_check(log, *cfg.certify.rho);
    report += fmt::format("tube.rho: {:.17g}\ntube.ok: {}\ntube.max_d: {:.17g}\ntube.first_violation_t: {:.17g}\n",
                          *cfg.certify.rho, tc.ok ? "true" : "false", tc.max_d, tc.first_violation_t);
  }
  bool diverged = log.diverged;
  if (cfg.compare_modes) {
    SimConfig other = cfg.sim;
    other.scenario.l1_enabled = !other.scenario.l1_enabled;
    other.scenario.schedule.clear();
    const SimLog alt = run_closed_loop(other);
    const char* alt_label = other.scenario.l1_enabled ? "l1_on" : "l1_off";
    std::string alt_path;
    auto alt_csv = open_out(m, fmt::format("sim_{}.csv", alt_label), alt_path);
    write_csv(alt_csv, alt);
    close_out(alt_csv, alt_path);
    report += summary(alt, alt_label);
    diverged = diverged || alt.diverged;
  }
  auto rep = open_out(m, "summary.txt", path);
  rep << report;
  close_out(rep, path);
  if (!m.quiet) out << report;
  if (diverged) err << "simulation diverged\n";
  return diverged ? kExitFailure : kExitOk;
}

int cmd_certify(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const AppConfig cfg = load(m);
  const CertificationRun run = run_certification(cfg);
  std::string report = certificate_report(run.certificate, run.inputs);
  report += fmt::format("psi0: {:.17g}\nregion_of_attraction: {}\nsearch_evaluations: {}\n", run.psi0,
                        run.region_of_attraction ? "true" : "false", run.search.evaluated);
  if (!run.calibration_grid.empty()) report += "calibration_grid: " + run.calibration_grid + "\n";
  std::string path;
  auto f = open_out(m, "certificate.txt", path);
  f << report;
  close_out(f, path);
  if (!m.quiet) out << report;
  if (!run.certificate.feasible()) {
    err << "infeasible: " << run.certificate.flags.first_failed(run.certificate.tube_evaluated) << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_sweep(const RunManifest& m, std::ostream& out, std::ostream&) {
  const AppConfig cfg = load(m);
  const auto rows = benchmark_sweep(cfg.sweep, cfg.sim, cfg.sweep_threads);
  std::string path;
  auto f = open_out(m, "sweep.csv", path);
  write_sweep_csv(f, rows);
  close_out(f, path);
  if (!m.quiet) write_sweep_csv(out, rows);
  return kExitOk;
}

int cmd_estimate_check(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const AppConfig cfg = load(m);
  const EstimationStudy study = estimation_error_study(cfg.sim, cfg.estimate_sample_times);
  std::string report = "sample_time,max_error\n";
  for (const auto& p : study.points) report += fmt::format("{:.17g},{:.17g}\n", p.sample_time, p.max_error);
  std::string path;
  auto f = open_out(m, "estimate.csv", path);
  f << report;
  close_out(f, path);
  const bool in_band = study.slope >= 0.85 && study.slope <= 1.15;
  std::string verdict = study.degenerate ? "slope: skipped (estimation error is zero for every sample time)\n"
                                         : fmt::format("slope: {:.6f}\nin_band: {}\n", study.slope, in_band ? "true" : "false");
  if (!m.quiet) out << report << verdict;
  if (study.degenerate) return kExitOk;
  if (!in_band) err << "slope outside [0.85, 1.15]\n";
  return in_band ? kExitOk : kExitFailure;
}

int run_command(const RunManifest& m, std::ostream& out, std::ostream& err) {
  try {
    if (m.subcommand == "simulate") return cmd_simulate(m, out, err);
    if (m.subcommand == "certify") return cmd_certify(m, out, err);
    if (m.subcommand == "sweep") return cmd_sweep(m, out, err);
    if (m.subcommand == "estimate-check") return cmd_estimate_check(m, out, err);
    err << "unknown subcommand '" << m.subcommand << "'\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ParseError:
      case ErrorCode::UnknownKey:
      case ErrorCode::RangeError:
      case ErrorCode::Io:
        return kExitUsage;
      default:
        return kExitFailure;
    }
  }
}

}  // namespace l1quad
