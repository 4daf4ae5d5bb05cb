#include "l1quad/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace l1quad {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
  int key_col = 0;
  int value_col = 0;
};

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    if (lead) *lead = s.size();
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  if (lead) *lead = b;
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

[[noreturn]] void fail(ErrorCode code, const Entry& e, const std::string& what, bool at_value = true) {
  throw ConfigError(code, e.line, at_value ? e.value_col : e.key_col, what);
}

std::vector<Entry> lex(const std::string& text) {
  std::vector<Entry> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.resize(i);
        break;
      }
    }
    std::size_t lead = 0;
    const std::string body = trim(line, &lead);
    if (body.empty()) continue;
    const int col = static_cast<int>(lead) + 1;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw ConfigError(ErrorCode::ParseError, line_no, col + static_cast<int>(body.size()), "expected ']'");
      section = trim(body.substr(1, body.size() - 2));
      if (!valid_name(section)) throw ConfigError(ErrorCode::ParseError, line_no, col + 1, "invalid section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(ErrorCode::ParseError, line_no, col, "expected 'key = value'");
    if (section.empty()) throw ConfigError(ErrorCode::ParseError, line_no, col, "key outside of a section");
    Entry e;
    e.section = section;
    e.key = trim(body.substr(0, eq));
    std::size_t vlead = 0;
    e.value = trim(body.substr(eq + 1), &vlead);
    e.line = line_no;
    e.key_col = col;
    e.value_col = col + static_cast<int>(eq) + 1 + static_cast<int>(vlead);
    if (!valid_name(e.key) || e.key.find('.') != std::string::npos)
      throw ConfigError(ErrorCode::ParseError, line_no, col, "invalid key name");
    if (e.value.empty()) throw ConfigError(ErrorCode::ParseError, line_no, e.value_col, "missing value");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> tokens(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double to_number(const std::string& s, const Entry& e) {
  double d = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), d);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorCode::ParseError, e, "not a number: '" + s + "'");
  return d;
}

double number(const Entry& e) {
  const auto t = tokens(e.value);
  if (t.size() != 1) fail(ErrorCode::ParseError, e, "expected one number");
  return to_number(t[0], e);
}

std::vector<double> list(const Entry& e) {
  std::vector<double> out;
  for (const auto& t : tokens(e.value)) out.push_back(to_number(t, e));
  if (out.empty()) fail(ErrorCode::ParseError, e, "expected numbers");
  return out;
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const Entry& e, bool allow_scalar = false) {
  const auto v = list(e);
  Eigen::Matrix<double, N, 1> out;
  if (allow_scalar && v.size() == 1) return Eigen::Matrix<double, N, 1>::Constant(v[0]);
  if (static_cast<int>(v.size()) != N) fail(ErrorCode::ParseError, e, fmt::format("expected {} numbers", N));
  for (int i = 0; i < N; ++i) out(i) = v[static_cast<std::size_t>(i)];
  return out;
}

bool boolean(const Entry& e) {
  const std::string& v = e.value;
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  fail(ErrorCode::ParseError, e, "expected on/off");
}

int integer(const Entry& e) {
  const double d = number(e);
  if (d != std::floor(d) || std::abs(d) > 1e9) fail(ErrorCode::ParseError, e, "expected an integer");
  return static_cast<int>(d);
}

double positive(const Entry& e) {
  const double d = number(e);
  if (!(d > 0.0)) fail(ErrorCode::RangeError, e, e.section + "." + e.key + " must be positive");
  return d;
}

double non_negative(const Entry& e) {
  const double d = number(e);
  if (!(d >= 0.0)) fail(ErrorCode::RangeError, e, e.section + "." + e.key + " must be non-negative");
  return d;
}

template <int N>
Eigen::Matrix<double, N, 1> positive_vec(const Entry& e, bool allow_scalar = false) {
  const auto v = vec<N>(e, allow_scalar);
  if (!(v.array() > 0.0).all()) fail(ErrorCode::RangeError, e, e.section + "." + e.key + " must be positive");
  return v;
}

using Setter = std::function<void(const Entry&)>;
using Table = std::map<std::string, Setter>;

const std::map<std::string, int> kChannels = {{"f", 0}, {"mx", 1}, {"my", 2}, {"mz", 3}, {"fx", 4}, {"fy", 5}};

Table disturbance_table(DisturbanceTerm& term) {
  Table t;
  t["type"] = [](const Entry&) {};
  if (auto* s = std::get_if<InjectedSignal>(&term)) {
    t["offset"] = [s](const Entry& e) { s->offset = vec<6>(e); };
    t["start"] = [s](const Entry& e) { s->start = number(e); };
    t["end"] = [s](const Entry& e) { s->end = number(e); };
    for (const auto& [name, idx] : kChannels) {
      t["sine_" + name] = [s, idx = idx](const Entry& e) {
        const auto v = list(e);
        if (v.size() % 3 != 0) fail(ErrorCode::ParseError, e, "expected amplitude, rad/s, phase triples");
        auto& ch = s->channels[static_cast<std::size_t>(idx)];
        ch.clear();
        for (std::size_t i = 0; i < v.size(); i += 3) ch.push_back({v[i], v[i + 1], v[i + 2]});
      };
    }
  } else if (auto* w = std::get_if<ConstantWrench>(&term)) {
    t["force"] = [w](const Entry& e) { w->force = vec<3>(e); };
    t["moment"] = [w](const Entry& e) { w->moment = vec<3>(e); };
    t["start"] = [w](const Entry& e) { w->start = number(e); };
    t["end"] = [w](const Entry& e) { w->end = number(e); };
  } else if (auto* m = std::get_if<MassMismatch>(&term)) {
    t["real_mass"] = [m](const Entry& e) { m->real_mass = positive(e); };
  } else if (auto* s = std::get_if<ThrustScale>(&term)) {
    t["scales"] = [s](const Entry& e) {
      s->scales = vec<4>(e, true);
      if (!((s->scales.array() > 0.0).all() && (s->scales.array() <= 2.0).all()))
        fail(ErrorCode::RangeError, e, "thrust scales must lie in (0, 2]");
    };
  } else if (auto* v = std::get_if<VoltageDrop>(&term)) {
    t["initial_voltage"] = [v](const Entry& e) { v->initial_voltage = positive(e); };
    t["final_voltage"] = [v](const Entry& e) { v->final_voltage = positive(e); };
    t["time_constant"] = [v](const Entry& e) { v->time_constant = positive(e); };
  } else if (auto* g = std::get_if<GroundEffect>(&term)) {
    t["surface_height"] = [g](const Entry& e) { g->surface_height = number(e); };
    t["gain"] = [g](const Entry& e) { g->gain = non_negative(e); };
    t["decay_length"] = [g](const Entry& e) { g->decay_length = positive(e); };
  } else if (auto* p = std::get_if<SlungPayload>(&term)) {
    t["mass"] = [p](const Entry& e) { p->mass = non_negative(e); };
    t["cord_length"] = [p](const Entry& e) { p->cord_length = positive(e); };
    t["attach_offset"] = [p](const Entry& e) { p->attach_offset = vec<3>(e); };
  }
  return t;
}

DisturbanceTerm make_term(const Entry& type) {
  const std::string& v = type.value;
  if (v == "injected_signal") return InjectedSignal{};
  if (v == "injected_sinusoid") return injected_sinusoid_signal();
  if (v == "constant_wrench") return ConstantWrench{};
  if (v == "mass_mismatch") return MassMismatch{};
  if (v == "thrust_scale") return ThrustScale{};
  if (v == "voltage_drop") return VoltageDrop{};
  if (v == "ground_effect") return GroundEffect{};
  if (v == "slung_payload") return SlungPayload{};
  fail(ErrorCode::ParseError, type, "unknown disturbance type '" + v + "'");
}

std::map<std::string, Table> build_tables(AppConfig& c, bool& limit_set) {
  std::map<std::string, Table> t;
  VehicleParams& vp = c.sim.params;
  GainSet& g = c.sim.gains;
  L1Params& l1 = c.sim.l1p;
  Scenario& sc = c.sim.scenario;
  SimConfig& sim = c.sim;
  CertifySettings& cs = c.certify;
  CertificationInputs& ci = c.cert;
  SweepGrid& sw = c.sweep;

  t["vehicle"] = {
      {"m", [&](const Entry& e) { vp.mass = positive(e); }},
      {"J", [&](const Entry& e) { vp.inertia = positive_vec<3>(e).asDiagonal(); }},
      {"g", [&](const Entry& e) { vp.gravity = positive(e); }},
      {"arm_diagonal", [&](const Entry& e) { vp.arm_diagonal = positive(e); }},
      {"torque_coefficient", [&](const Entry& e) { vp.torque_coefficient = positive(e); }},
      {"max_motor_thrust", [&](const Entry& e) { vp.max_motor_thrust = positive(e); }},
      {"saturate_motors", [&](const Entry& e) { vp.saturate_motors = boolean(e); }},
  };
  t["gains"] = {
      {"kp", [&](const Entry& e) { g.kp = positive_vec<3>(e, true).asDiagonal(); }},
      {"kv", [&](const Entry& e) { g.kv = positive_vec<3>(e, true).asDiagonal(); }},
      {"kr", [&](const Entry& e) { g.kr = positive_vec<3>(e, true).asDiagonal(); }},
      {"komega", [&](const Entry& e) { g.komega = positive_vec<3>(e, true).asDiagonal(); }},
      {"c1", [&](const Entry& e) { g.c1 = positive(e); }},
      {"c2", [&](const Entry& e) { g.c2 = positive(e); }},
  };
  t["l1"] = {
      {"As",
       [&](const Entry& e) {
         l1.as_diagonal = vec<6>(e, true);
         if (!(l1.as_diagonal.array() < 0.0).all()) fail(ErrorCode::RangeError, e, "l1.As must be negative");
       }},
      {"Ts", [&](const Entry& e) { l1.sample_time = positive(e); }},
      {"omega", [&](const Entry& e) { l1.bandwidth = positive_vec<4>(e, true); }},
      {"omega_f", [&](const Entry& e) { l1.bandwidth(0) = positive(e); }},
      {"omega_mx", [&](const Entry& e) { l1.bandwidth(1) = positive(e); }},
      {"omega_my", [&](const Entry& e) { l1.bandwidth(2) = positive(e); }},
      {"omega_mz", [&](const Entry& e) { l1.bandwidth(3) = positive(e); }},
      {"estimate_limit",
       [&](const Entry& e) {
         l1.estimate_limit = positive_vec<4>(e);
         limit_set = true;
       }},
  };
  t["scenario"] = {
      {"name", [&](const Entry& e) { sc.name = e.value; }},
      {"duration",
       [&](const Entry& e) {
         sc.duration = positive(e);
         sim.duration = sc.duration;
       }},
      {"trajectory",
       [&](const Entry& e) {
         if (e.value == "hover") sc.trajectory.kind = TrajectorySpec::Kind::Hover;
         else if (e.value == "circle") sc.trajectory.kind = TrajectorySpec::Kind::Circle;
         else if (e.value == "figure8") sc.trajectory.kind = TrajectorySpec::Kind::Figure8;
         else fail(ErrorCode::ParseError, e, "trajectory must be hover, circle or figure8");
       }},
      {"position", [&](const Entry& e) { sc.trajectory.position = vec<3>(e); }},
      {"yaw", [&](const Entry& e) { sc.trajectory.yaw = number(e); }},
      {"radius", [&](const Entry& e) { sc.trajectory.radius = positive(e); }},
      {"speed", [&](const Entry& e) { sc.trajectory.speed = non_negative(e); }},
      {"altitude", [&](const Entry& e) { sc.trajectory.altitude = number(e); }},
      {"v_max", [&](const Entry& e) { sc.trajectory.v_max = non_negative(e); }},
      {"l1", [&](const Entry& e) { sc.l1_enabled = boolean(e); }},
      {"schedule",
       [&](const Entry& e) {
         sc.schedule.clear();
         for (const auto& tok : tokens(e.value)) {
           const auto colon = tok.find(':');
           if (colon == std::string::npos) fail(ErrorCode::ParseError, e, "schedule items are time:on or time:off");
           Entry part = e;
           part.value = tok.substr(colon + 1);
           sc.schedule.push_back({to_number(tok.substr(0, colon), e), boolean(part)});
         }
         for (std::size_t i = 1; i < sc.schedule.size(); ++i)
           if (sc.schedule[i].time < sc.schedule[i - 1].time)
             fail(ErrorCode::RangeError, e, "schedule times must be sorted");
       }},
  };
  t["sim"] = {
      {"substeps",
       [&](const Entry& e) {
         sim.substeps = integer(e);
         if (sim.substeps < 1 || sim.substeps > 10) fail(ErrorCode::RangeError, e, "sim.substeps must lie in 1..10");
       }},
      {"seed", [&](const Entry& e) { sim.seed = static_cast<unsigned>(integer(e)); }},
      {"abort_radius", [&](const Entry& e) { sim.abort_radius = positive(e); }},
      {"log_stride",
       [&](const Entry& e) {
         sim.log_stride = integer(e);
         if (sim.log_stride < 1) fail(ErrorCode::RangeError, e, "sim.log_stride must be at least 1");
       }},
      {"perturb_position", [&](const Entry& e) { sim.initial.position = vec<3>(e); }},
      {"perturb_velocity", [&](const Entry& e) { sim.initial.velocity = vec<3>(e); }},
      {"perturb_rotation", [&](const Entry& e) { sim.initial.rotation = vec<3>(e); }},
      {"perturb_omega", [&](const Entry& e) { sim.initial.omega = vec<3>(e); }},
      {"random_scale", [&](const Entry& e) { sim.initial.random_scale = non_negative(e); }},
      {"align_attitude", [&](const Entry& e) { sim.initial.align_attitude = boolean(e); }},
      {"compare_modes", [&](const Entry& e) { c.compare_modes = boolean(e); }},
  };
  auto bound = [&](double UncertaintyBounds::*field) {
    return [&, field](const Entry& e) {
      ci.bounds.*field = non_negative(e);
      cs.bounds_given = true;
    };
  };
  t["bounds"] = {
      {"c1", [&](const Entry& e) { cs.c1 = positive(e); }},
      {"c2", [&](const Entry& e) { cs.c2 = positive(e); }},
      {"psi1",
       [&](const Entry& e) {
         const double v = number(e);
         if (!(v > 0.0 && v < 1.0)) fail(ErrorCode::RangeError, e, "bounds.psi1 must lie in (0, 1)");
         cs.psi1 = v;
       }},
      {"H", [&](const Entry& e) { cs.H = positive(e); }},
      {"epsilon", [&](const Entry& e) { ci.epsilon = non_negative(e); }},
      {"t1", [&](const Entry& e) { ci.t1 = non_negative(e); }},
      {"calibrate", [&](const Entry& e) { cs.calibrate = boolean(e); }},
      {"tube", [&](const Entry& e) { cs.tube = boolean(e); }},
      {"inflate_sigma_hat", [&](const Entry& e) { ci.inflate_sigma_hat = boolean(e); }},
      {"search_grid",
       [&](const Entry& e) {
         cs.search_grid = integer(e);
         if (cs.search_grid < 2) fail(ErrorCode::RangeError, e, "bounds.search_grid must be at least 2");
       }},
      {"time_samples",
       [&](const Entry& e) {
         cs.time_samples = integer(e);
         if (cs.time_samples < 1) fail(ErrorCode::RangeError, e, "bounds.time_samples must be positive");
       }},
      {"state_samples",
       [&](const Entry& e) {
         cs.state_samples = integer(e);
         if (cs.state_samples < 1) fail(ErrorCode::RangeError, e, "bounds.state_samples must be positive");
       }},
      {"margin",
       [&](const Entry& e) {
         cs.margin = number(e);
         if (!(cs.margin >= 1.0)) fail(ErrorCode::RangeError, e, "bounds.margin must be at least 1");
       }},
      {"rho", [&](const Entry& e) { cs.rho = positive(e); }},
      {"max_omega_d", [&](const Entry& e) { ci.max_omega_d = non_negative(e); }},
      {"delta_sigma", bound(&UncertaintyBounds::delta_sigma)},
      {"delta_sigma_m", bound(&UncertaintyBounds::delta_sigma_m)},
      {"delta_sigma_um", bound(&UncertaintyBounds::delta_sigma_um)},
      {"L_sigma_t", bound(&UncertaintyBounds::L_sigma_t)},
      {"L_sigma_x", bound(&UncertaintyBounds::L_sigma_x)},
      {"L_sigma_m_t", bound(&UncertaintyBounds::L_sigma_m_t)},
      {"L_sigma_m_x", bound(&UncertaintyBounds::L_sigma_m_x)},
      {"delta_f", bound(&UncertaintyBounds::delta_f)},
      {"delta_ub", bound(&UncertaintyBounds::delta_ub)},
      {"delta_sigma_hat", bound(&UncertaintyBounds::delta_sigma_hat)},
  };
  t["sweep"] = {
      {"speeds",
       [&](const Entry& e) {
         sw.speeds = list(e);
         for (double v : sw.speeds)
           if (v < 0.0) fail(ErrorCode::RangeError, e, "sweep.speeds must be non-negative");
       }},
      {"weights",
       [&](const Entry& e) {
         sw.weights = list(e);
         for (double v : sw.weights)
           if (v < 0.0) fail(ErrorCode::RangeError, e, "sweep.weights must be non-negative");
       }},
      {"modes",
       [&](const Entry& e) {
         sw.modes.clear();
         for (const auto& tok : tokens(e.value)) {
           Entry part = e;
           part.value = tok;
           sw.modes.push_back(boolean(part));
         }
         if (sw.modes.empty()) fail(ErrorCode::ParseError, e, "expected on/off values");
       }},
      {"radius", [&](const Entry& e) { sw.radius = positive(e); }},
      {"altitude", [&](const Entry& e) { sw.altitude = number(e); }},
      {"settle_time", [&](const Entry& e) { sw.settle_time = non_negative(e); }},
      {"threads", [&](const Entry& e) { c.sweep_threads = static_cast<unsigned>(std::max(0, integer(e))); }},
  };
  t["estimate"] = {
      {"sample_times",
       [&](const Entry& e) {
         c.estimate_sample_times = list(e);
         for (double v : c.estimate_sample_times)
           if (!(v > 0.0)) fail(ErrorCode::RangeError, e, "estimate.sample_times must be positive");
       }},
  };
  return t;
}

void apply_override(std::vector<Entry>& entries, const std::string& ov) {
  const auto eq = ov.find('=');
  if (eq == std::string::npos) throw ConfigError(ErrorCode::ParseError, 0, 0, "override '" + ov + "' lacks '='");
  const std::string path = trim(ov.substr(0, eq));
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
    throw ConfigError(ErrorCode::UnknownKey, 0, 0, "override key '" + path + "' must be section.key");
  Entry e;
  e.section = path.substr(0, dot);
  e.key = path.substr(dot + 1);
  e.value = trim(ov.substr(eq + 1));
  if (e.value.empty()) throw ConfigError(ErrorCode::ParseError, 0, 0, "override '" + ov + "' has no value");
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->section == e.section && it->key == e.key) {
      it->value = e.value;
      it->line = it->key_col = it->value_col = 0;
      return;
    }
  }
  if (e.section.rfind("disturbance.", 0) == 0) {
    const bool exists = std::any_of(entries.begin(), entries.end(), [&](const Entry& x) { return x.section == e.section; });
    if (!exists) throw ConfigError(ErrorCode::UnknownKey, 0, 0, "override names unknown section '" + e.section + "'");
    if (e.key == "type") throw ConfigError(ErrorCode::UnknownKey, 0, 0, "disturbance type cannot be overridden");
  }
  entries.push_back(std::move(e));
}

}  // namespace

AppConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  std::vector<Entry> entries = lex(text);
  for (const auto& ov : overrides) apply_override(entries, ov);

  AppConfig c;
  c.sweep.speeds = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  c.sweep.weights = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  c.sweep.modes = {true, false};
  bool limit_set = false;
  auto tables = build_tables(c, limit_set);

  std::vector<std::string> term_order;
  std::map<std::string, std::vector<const Entry*>> term_entries;
  std::map<std::string, std::map<std::string, int>> seen;
  for (const Entry& e : entries) {
    if (e.line > 0 && seen[e.section][e.key]++ > 0) fail(ErrorCode::ParseError, e, "duplicate key '" + e.key + "'", false);
    if (e.section.rfind("disturbance.", 0) == 0) {
      if (!term_entries.count(e.section)) term_order.push_back(e.section);
      term_entries[e.section].push_back(&e);
      continue;
    }
    const auto table = tables.find(e.section);
    if (table == tables.end())
      throw ConfigError(ErrorCode::UnknownKey, e.line, e.key_col, "unknown section '" + e.section + "'");
    const auto setter = table->second.find(e.key);
    if (setter == table->second.end())
      throw ConfigError(ErrorCode::UnknownKey, e.line, e.key_col, "unknown key '" + e.section + "." + e.key + "'");
    setter->second(e);
  }

  for (const auto& name : term_order) {
    const auto& es = term_entries[name];
    const auto type = std::find_if(es.begin(), es.end(), [](const Entry* e) { return e->key == "type"; });
    if (type == es.end())
      throw ConfigError(ErrorCode::ParseError, es.front()->line, 1, "section '" + name + "' needs a type");
    DisturbanceTerm term = make_term(**type);
    Table table = disturbance_table(term);
    for (const Entry* e : es) {
      const auto setter = table.find(e->key);
      if (setter == table.end())
        throw ConfigError(ErrorCode::UnknownKey, e->line, e->key_col, "unknown key '" + name + "." + e->key + "'");
      setter->second(*e);
    }
    try {
      validate(term);
    } catch (const Error& err) {
      throw ConfigError(ErrorCode::RangeError, (*type)->line, 1, name + ": " + err.what());
    }
    c.sim.scenario.terms.push_back(std::move(term));
  }

  if (!limit_set) c.sim.l1p.estimate_limit(0) = 4.0 * c.sim.params.mass * c.sim.params.gravity;
  try {
    c.sim.validate();
  } catch (const Error& err) {
    throw ConfigError(ErrorCode::RangeError, 0, 0, err.what());
  }
  c.cert.gains = c.sim.gains;
  c.cert.params = c.sim.params;
  c.cert.l1p = c.sim.l1p;
  return c;
}

AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

}  // namespace l1quad
