#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "l1quad/dynamics.hpp"
#include "l1quad/errors.hpp"
#include "l1quad/sim_engine.hpp"
#include "l1quad/so3.hpp"

using namespace l1quad;

namespace {

constexpr double kPi = std::numbers::pi;

SimLog synthetic_log(const std::vector<double>& errors, double dt) {
  SimLog log;
  log.sample_time = dt;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    TickRecord r;
    r.t = static_cast<double>(i) * dt;
    r.x.p = Vec3(errors[i], 0, 0);
    r.d = std::abs(errors[i]);
    log.ticks.push_back(r);
  }
  return log;
}

std::string csv_of(const SimLog& log) {
  std::ostringstream s;
  write_csv(s, log);
  return s.str();
}

double max_ep(const SimLog& log, double t0, double t1) {
  double m = 0.0;
  for (const auto& r : log.ticks)
    if (r.t >= t0 && r.t <= t1) m = std::max(m, (r.x.p - r.xd.p).norm());
  return m;
}

}  // namespace

TEST(SimEngine, ZeroUncertaintyHoverStaysPut) {
  SimConfig cfg;
  const SimLog log = run_closed_loop(cfg);
  ASSERT_FALSE(log.diverged);
  EXPECT_EQ(log.tick_count, 4001);
  EXPECT_LT(log.rmse, 1e-6);
  EXPECT_LT(rmse(log, 0.0, 10.0), 1e-6);
  double uad = 0.0;
  for (const auto& r : log.ticks) uad = std::max(uad, r.u_ad.norm());
  EXPECT_LT(uad, 1e-9);
}

TEST(SimEngine, NoSelfExcitationOnCircle) {
  SimConfig cfg;
  cfg.scenario.trajectory.kind = TrajectorySpec::Kind::Circle;
  cfg.scenario.trajectory.speed = 1.0;
  cfg.duration = 5.0;
  const SimLog log = run_closed_loop(cfg);
  ASSERT_FALSE(log.diverged);
  double uad = 0.0;
  for (const auto& r : log.ticks) uad = std::max(uad, r.u_ad.norm());
  // Only the predictor's sampling residue remains on a moving reference.
  EXPECT_LT(uad, 1e-5);
}

TEST(SimEngine, TickSpacingUniform) {
  SimConfig cfg;
  cfg.duration = 1.0;
  cfg.substeps = 4;
  const SimLog log = run_closed_loop(cfg);
  ASSERT_EQ(log.ticks.size(), 401u);
  for (std::size_t i = 0; i < log.ticks.size(); ++i) EXPECT_EQ(log.ticks[i].t, i * 0.0025);
}

TEST(SimEngine, LogStrideKeepsEndpoints) {
  SimConfig cfg;
  cfg.duration = 1.0;
  cfg.log_stride = 7;
  const SimLog log = run_closed_loop(cfg);
  EXPECT_EQ(log.tick_count, 401);
  EXPECT_EQ(log.ticks.front().t, 0.0);
  EXPECT_EQ(log.ticks.back().t, 400 * 0.0025);
  EXPECT_EQ(log.ticks.size(), 59u);
}

TEST(SimEngine, DeterministicCsv) {
  SimConfig cfg;
  cfg.duration = 2.0;
  cfg.scenario.terms = {injected_sinusoid_signal()};
  cfg.initial.random_scale = 0.05;
  cfg.seed = 3;
  const std::string a = csv_of(run_closed_loop(cfg));
  const std::string b = csv_of(run_closed_loop(cfg));
  EXPECT_EQ(a, b);
  cfg.seed = 4;
  EXPECT_NE(a, csv_of(run_closed_loop(cfg)));
}

TEST(SimEngine, CsvSchema) {
  const std::string h = csv_header();
  EXPECT_EQ(std::count(h.begin(), h.end(), ',') + 1, 50);
  EXPECT_EQ(h.rfind("t,p_x,p_y,p_z,v_x", 0), 0u);
  EXPECT_EQ(h.substr(h.size() - 4), ",d,V");
  SimConfig cfg;
  cfg.duration = 0.01;
  const std::string csv = csv_of(run_closed_loop(cfg));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, h);
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 49);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST(SimEngine, FreeFallMatchesAnalytic) {
  const VehicleParams p;
  State x;
  const double dt = 0.0025;
  for (int k = 0; k < 400; ++k) x = step(x, ControlWrench{}, {}, k * dt, dt, p);
  EXPECT_NEAR(x.p.z(), 0.5 * p.gravity, 1e-12);
  EXPECT_NEAR(x.v.z(), p.gravity, 1e-12);
  EXPECT_TRUE(x.p.head<2>().isZero(0.0));
}

TEST(SimEngine, InjectedSinusoidCompensation) {
  SimConfig cfg;
  cfg.scenario.terms = {injected_sinusoid_signal()};
  const SimLog on = run_closed_loop(cfg);
  cfg.scenario.l1_enabled = false;
  const SimLog off = run_closed_loop(cfg);
  ASSERT_FALSE(on.diverged);
  ASSERT_FALSE(off.diverged);
  EXPECT_LT(on.rmse, 0.5 * off.rmse);
  for (const auto& r : off.ticks) EXPECT_TRUE(r.u_ad.isZero(0.0));
}

TEST(SimEngine, SwitchOffDegradesTracking) {
  SimConfig cfg;
  cfg.duration = 10.0;
  cfg.scenario.trajectory.kind = TrajectorySpec::Kind::Circle;
  cfg.scenario.trajectory.speed = 1.0;
  cfg.scenario.terms = {ThrustScale{Vec4(0.8, 1.0, 1.0, 1.0)}};
  cfg.scenario.schedule = {{5.0, false}};
  const SimLog log = run_closed_loop(cfg);
  ASSERT_FALSE(log.diverged);
  EXPECT_TRUE(log.ticks[1000].l1_on);
  EXPECT_FALSE(log.ticks[2400].l1_on);
  EXPECT_GT(max_ep(log, 7.0, 10.0), 2.0 * max_ep(log, 3.0, 5.0));
}

TEST(SimEngine, DivergenceStopsRun) {
  SimConfig cfg;
  cfg.abort_radius = 0.1;
  cfg.initial.position = Vec3(0.5, 0, 0);
  const SimLog log = run_closed_loop(cfg);
  EXPECT_TRUE(log.diverged);
  EXPECT_EQ(log.diverged_time, 0.0);
  EXPECT_EQ(log.tick_count, 1);
  EXPECT_FALSE(log.diverged_reason.empty());
}

TEST(SimEngine, InitialPerturbation) {
  SimConfig cfg;
  cfg.initial.position = Vec3(0.1, 0, 0);
  cfg.initial.rotation = Vec3(0, 0, 0.2);
  cfg.initial.align_attitude = false;
  const State x = initial_state(cfg);
  EXPECT_LE((x.p - Vec3(0.1, 0, -1)).norm(), 1e-15);
  EXPECT_TRUE(is_rotation(x.R));
  EXPECT_NEAR(std::acos(std::clamp((x.R.trace() - 1.0) / 2.0, -1.0, 1.0)), 0.2, 1e-9);
}

TEST(SimEngine, Validation) {
  SimConfig cfg;
  cfg.substeps = 0;
  EXPECT_THROW(run_closed_loop(cfg), Error);
  cfg = SimConfig{};
  cfg.substeps = 11;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = SimConfig{};
  cfg.duration = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(SimEngine, RmseExamples) {
  EXPECT_EQ(rmse(synthetic_log(std::vector<double>(10, 0.0), 0.1), 0.0, 1.0), 0.0);
  EXPECT_NEAR(rmse(synthetic_log(std::vector<double>(10, 0.3), 0.1), 0.0, 1.0), 0.3, 1e-15);
  std::vector<double> s;
  for (int i = 0; i < 1000; ++i) s.push_back(0.7 * std::sin(2 * kPi * i / 100.0));
  EXPECT_NEAR(rmse(synthetic_log(s, 0.01), 0.0, 9.995), 0.7 / std::sqrt(2.0), 1e-12);
}

TEST(SimEngine, RmseEmptyWindow) {
  try {
    rmse(synthetic_log({1.0, 1.0}, 0.1), 5.0, 6.0);
    FAIL() << "expected EmptyWindow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyWindow);
  }
}

TEST(SimEngine, TubeCheckExamples) {
  const SimLog log = synthetic_log({0.1, 0.4, 0.2}, 0.5);
  EXPECT_TRUE(tube_check(log, 1e9).ok);
  const TubeCheck zero = tube_check(log, 0.0);
  EXPECT_FALSE(zero.ok);
  EXPECT_EQ(zero.first_violation_t, 0.0);
  const TubeCheck mid = tube_check(log, 0.3);
  EXPECT_FALSE(mid.ok);
  EXPECT_EQ(mid.first_violation_t, 0.5);
  EXPECT_EQ(mid.max_d, 0.4);
}

TEST(SimEngine, SingleCellSweepEqualsRun) {
  SimConfig base;
  base.duration = 3.0;
  SweepGrid grid;
  grid.speeds = {1.5};
  grid.weights = {0.2};
  grid.modes = {true};
  grid.settle_time = 0.0;
  const auto rows = benchmark_sweep(grid, base, 1);
  ASSERT_EQ(rows.size(), 1u);

  SimConfig cfg = base;
  cfg.scenario.trajectory.kind = TrajectorySpec::Kind::Circle;
  cfg.scenario.trajectory.speed = 1.5;
  cfg.scenario.terms = {MassMismatch{base.params.mass + 0.2}};
  const SimLog log = run_closed_loop(cfg);
  EXPECT_EQ(rows[0].rmse, log.rmse);
  EXPECT_EQ(rows[0].max_d, log.max_distance);
  EXPECT_FALSE(rows[0].crashed);
}

TEST(SimEngine, SweepOrderIndependentOfThreads) {
  SimConfig base;
  base.duration = 2.0;
  SweepGrid grid;
  grid.speeds = {0.0, 1.0, 2.0};
  grid.weights = {0.0, 0.3};
  grid.modes = {true, false};
  grid.settle_time = 0.5;
  const auto a = benchmark_sweep(grid, base, 1);
  const auto b = benchmark_sweep(grid, base, 4);
  ASSERT_EQ(a.size(), 12u);
  std::ostringstream sa, sb;
  write_sweep_csv(sa, a);
  write_sweep_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a[0].speed, 0.0);
  EXPECT_TRUE(a[0].l1_on);
  EXPECT_EQ(a[1].weight, 0.0);
  EXPECT_FALSE(a[1].l1_on);
  EXPECT_EQ(a[2].weight, 0.3);
  EXPECT_EQ(a[11].speed, 2.0);
}

TEST(SimEngine, SweepRecordsCrash) {
  SimConfig base;
  base.duration = 1.0;
  base.abort_radius = 1e-3;
  base.initial.position = Vec3(0.01, 0, 0);
  SweepGrid grid;
  grid.speeds = {0.0};
  grid.weights = {0.0};
  grid.modes = {true};
  const auto rows = benchmark_sweep(grid, base, 1);
  EXPECT_TRUE(rows[0].crashed);
  EXPECT_THROW(benchmark_sweep(SweepGrid{}, base), Error);
}

TEST(SimEngine, EstimationSlopeConstantSigma) {
  SimConfig cfg;
  cfg.duration = 2.0;
  InjectedSignal s;
  s.offset << 0.3, 0.01, -0.02, 0.005, 0.0, 0.0;
  cfg.scenario.terms = {s};
  const EstimationStudy st = estimation_error_study(cfg, {0.005, 0.0025, 0.00125, 0.000625});
  ASSERT_FALSE(st.degenerate);
  EXPECT_NEAR(st.slope, 1.0, 0.15);
  for (std::size_t i = 1; i < st.points.size(); ++i) EXPECT_LT(st.points[i].max_error, st.points[i - 1].max_error);
}

TEST(SimEngine, EstimationZeroSigmaDegenerate) {
  SimConfig cfg;
  cfg.duration = 1.0;
  const EstimationStudy st = estimation_error_study(cfg, {0.005, 0.0025});
  EXPECT_TRUE(st.degenerate);
}
