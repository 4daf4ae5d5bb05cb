#include "l1quad/disturbances.hpp"

#include <cmath>
#include <numbers>

#include "l1quad/errors.hpp"

namespace l1quad {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool in_window(double t, double start, double end) { return t >= start && t <= end; }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::RangeError, what);
}

PendulumState pendulum_derivative(const PendulumState& s, const SlungPayload& payload, double tension,
                                  const Vec3& control_force, double vehicle_mass) {
  const double ml = payload.mass;
  const double m = vehicle_mass;
  PendulumState d;
  d.n = s.n_dot;
  Vec3 rel = -control_force / m;
  if (ml > 0.0) rel -= tension * s.n * (m + ml) / (ml * m);
  d.n_dot = rel / payload.cord_length;
  return d;
}

}  // namespace

void validate(const DisturbanceTerm& term) {
  std::visit(Overloaded{
                 [](const InjectedSignal& s) {
                   require(s.start <= s.end, "injected signal window start must not exceed end");
                   require(s.offset.allFinite(), "injected signal offset must be finite");
                 },
                 [](const ConstantWrench& w) {
                   require(w.start <= w.end, "wrench window start must not exceed end");
                   require(w.force.allFinite() && w.moment.allFinite(), "wrench must be finite");
                 },
                 [](const MassMismatch& m) { require(m.real_mass > 0.0, "real mass must be positive"); },
                 [](const ThrustScale& s) {
                   require((s.scales.array() > 0.0).all() && (s.scales.array() <= 2.0).all(),
                           "thrust scales must lie in (0, 2]");
                 },
                 [](const VoltageDrop& v) {
                   require(v.initial_voltage > 0.0 && v.final_voltage > 0.0, "voltages must be positive");
                   require(v.time_constant > 0.0, "voltage time constant must be positive");
                   const double s = v.final_voltage / v.initial_voltage;
                   require(s * s <= 2.0, "final thrust scale must not exceed 2");
                 },
                 [](const GroundEffect& g) {
                   require(g.gain >= 0.0, "ground effect gain must be non-negative");
                   require(g.decay_length > 0.0, "ground effect decay length must be positive");
                 },
                 [](const SlungPayload& p) {
                   require(p.mass >= 0.0, "payload mass must be non-negative");
                   require(p.cord_length > 0.0, "cord length must be positive");
                 },
             },
             term);
}

bool Scenario::l1_active(double t) const {
  bool on = l1_enabled;
  for (const auto& s : schedule) {
    if (s.time > t) break;
    on = s.enabled;
  }
  return on;
}

void Scenario::validate() const {
  require(duration > 0.0, "scenario duration must be positive");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    require(schedule[i - 1].time <= schedule[i].time, "L1 schedule times must be sorted");
  for (const auto& term : terms) l1quad::validate(term);
}

DisturbanceState initial_disturbance_state(const Scenario& scenario) {
  DisturbanceState d;
  for (const auto& term : scenario.terms)
    if (std::holds_alternative<SlungPayload>(term)) d.pendulums.emplace_back();
  return d;
}

UncertaintyVector external_wrench(const Vec3& force, const Vec3& moment, const Mat3& R) {
  UncertaintyVector s;
  s.matched << -force.dot(R.col(2)), moment;
  s.unmatched << force.dot(R.col(0)), force.dot(R.col(1));
  return s;
}

UncertaintyVector injected_sinusoid(double t) {
  UncertaintyVector s;
  if (t >= 0.0 && t <= 16.0) s.matched(0) = 0.6 * std::sin(2.0 * std::numbers::pi * t) + 0.6 * std::sin(std::numbers::pi * t);
  return s;
}

InjectedSignal injected_sinusoid_signal() {
  InjectedSignal s;
  s.channels[0] = {{0.6, 2.0 * std::numbers::pi, 0.0}, {0.6, std::numbers::pi, 0.0}};
  s.start = 0.0;
  s.end = 16.0;
  return s;
}

ThrustScaleResult thrust_scale_effect(const Vec4& scales, const ControlWrench& u_cmd, const VehicleParams& params) {
  if (!((scales.array() > 0.0).all() && (scales.array() <= 2.0).all()))
    throw Error(ErrorCode::RangeError, "thrust scales must lie in (0, 2]");
  const MotorCommand mix = motor_mixing(u_cmd, params);
  const ControlWrench real = wrench_from_thrusts(scales.cwiseProduct(mix.thrusts), params);
  ThrustScaleResult r;
  r.sigma.matched = real.as_vector() - u_cmd.as_vector();
  r.saturated = mix.saturated;
  return r;
}

double voltage_scale(const VoltageDrop& drop, double t) {
  const double tt = std::max(t, 0.0);
  const double v = drop.final_voltage + (drop.initial_voltage - drop.final_voltage) * std::exp(-tt / drop.time_constant);
  const double r = v / drop.initial_voltage;
  return r * r;
}

PayloadCoupling slung_payload_coupling(const PendulumState& pendulum, const SlungPayload& payload, const State& x,
                                       const ControlWrench& u_cmd, const VehicleParams& params) {
  const double m = params.mass;
  const double ml = payload.mass;
  const Vec3 control_force = -u_cmd.thrust * x.R.col(2);
  double tension = 0.0;
  if (ml > 0.0) {
    const double reduced = ml * m / (m + ml);
    tension = reduced * (payload.cord_length * pendulum.n_dot.squaredNorm() - control_force.dot(pendulum.n) / m);
    tension = std::max(tension, 0.0);
  }
  PayloadCoupling c;
  c.tension = tension;
  const Vec3 force = tension * pendulum.n;
  c.sigma = external_wrench(force, payload.attach_offset.cross(x.R.transpose() * force), x.R);
  c.derivative = pendulum_derivative(pendulum, payload, tension, control_force, m);
  return c;
}

UncertaintyVector evaluate(const DisturbanceTerm& term, double t, const State& x, const ControlWrench& u_cmd,
                           const VehicleParams& params) {
  return std::visit(
      Overloaded{
          [&](const InjectedSignal& s) {
            Vec6 out = Vec6::Zero();
            if (!in_window(t, s.start, s.end)) return UncertaintyVector{};
            out = s.offset;
            for (int i = 0; i < 6; ++i)
              for (const auto& w : s.channels[static_cast<std::size_t>(i)])
                out(i) += w.amplitude * std::sin(w.angular_frequency * t + w.phase);
            return UncertaintyVector::from_stacked(out);
          },
          [&](const ConstantWrench& w) {
            if (!in_window(t, w.start, w.end)) return UncertaintyVector{};
            return external_wrench(w.force, w.moment, x.R);
          },
          [&](const MassMismatch& mm) {
            UncertaintyVector s;
            s.matched(0) = (params.mass - mm.real_mass) * u_cmd.thrust / mm.real_mass;
            return s;
          },
          [&](const ThrustScale& s) { return thrust_scale_effect(s.scales, u_cmd, params).sigma; },
          [&](const VoltageDrop& v) {
            return thrust_scale_effect(Vec4::Constant(voltage_scale(v, t)), u_cmd, params).sigma;
          },
          [&](const GroundEffect& g) {
            UncertaintyVector s;
            const double h = -x.p.z();
            s.matched(0) = g.gain * u_cmd.thrust * std::exp(-(h - g.surface_height) / g.decay_length);
            return s;
          },
          [&](const SlungPayload& p) { return slung_payload_coupling(PendulumState{}, p, x, u_cmd, params).sigma; },
      },
      term);
}

UncertaintyVector compose(const Scenario& scenario, double t, const State& x, const ControlWrench& u_cmd,
                          const VehicleParams& params, const DisturbanceState* dstate) {
  UncertaintyVector total;
  std::size_t pendulum = 0;
  for (const auto& term : scenario.terms) {
    if (const auto* p = std::get_if<SlungPayload>(&term); p && dstate) {
      total += slung_payload_coupling(dstate->pendulums.at(pendulum), *p, x, u_cmd, params).sigma;
      ++pendulum;
      continue;
    }
    total += evaluate(term, t, x, u_cmd, params);
  }
  return total;
}

void advance(DisturbanceState& dstate, const Scenario& scenario, const State& x, const ControlWrench& u_cmd,
             double dt, const VehicleParams& params) {
  std::size_t k = 0;
  for (const auto& term : scenario.terms) {
    const auto* p = std::get_if<SlungPayload>(&term);
    if (!p) continue;
    PendulumState& s = dstate.pendulums.at(k++);
    auto f = [&](const PendulumState& y) { return slung_payload_coupling(y, *p, x, u_cmd, params).derivative; };
    auto add = [](const PendulumState& y, const PendulumState& d, double h) {
      return PendulumState{y.n + h * d.n, y.n_dot + h * d.n_dot};
    };
    const PendulumState k1 = f(s);
    const PendulumState k2 = f(add(s, k1, dt / 2));
    const PendulumState k3 = f(add(s, k2, dt / 2));
    const PendulumState k4 = f(add(s, k3, dt));
    s.n += dt / 6 * (k1.n + 2 * k2.n + 2 * k3.n + k4.n);
    s.n_dot += dt / 6 * (k1.n_dot + 2 * k2.n_dot + 2 * k3.n_dot + k4.n_dot);
    s.n.normalize();
    s.n_dot -= s.n.dot(s.n_dot) * s.n;
    if (!s.n.allFinite() || !s.n_dot.allFinite()) throw Error(ErrorCode::NonFinite, "payload pendulum state");
  }
}

std::string term_name(const DisturbanceTerm& term) {
  return std::visit(Overloaded{
                        [](const InjectedSignal&) { return std::string("injected_signal"); },
                        [](const ConstantWrench&) { return std::string("constant_wrench"); },
                        [](const MassMismatch&) { return std::string("mass_mismatch"); },
                        [](const ThrustScale&) { return std::string("thrust_scale"); },
                        [](const VoltageDrop&) { return std::string("voltage_drop"); },
                        [](const GroundEffect&) { return std::string("ground_effect"); },
                        [](const SlungPayload&) { return std::string("slung_payload"); },
                    },
                    term);
}

}  // namespace l1quad
