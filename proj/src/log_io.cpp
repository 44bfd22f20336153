#include "exo/log_io.hpp"

#include "exo/config.hpp"

#include <charconv>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace exo {

namespace {

enum class Group { kState, kJointErrors, kSyncErrors, kChi, kChiSync, kInputs };

struct Column {
  std::string name;
  Group group;
  std::function<double(const TickRecord&)> get;
  std::function<void(TickRecord&, double)> set;
};

template <typename Member>
void add_vec4(std::vector<Column>& cols, const std::string& prefix, Group g, Member m) {
  for (int j = 0; j < kJoints; ++j) {
    cols.push_back({prefix + "_" + std::to_string(j), g,
                    [m, j](const TickRecord& r) { return (r.*m)[j]; },
                    [m, j](TickRecord& r, double v) { (r.*m)[j] = v; }});
  }
}

double as_flag(double v, const std::string& column) {
  if (v != 0.0 && v != 1.0) throw ConfigError("column '" + column + "' must hold 0 or 1");
  return v;
}

std::vector<Column> build_columns() {
  std::vector<Column> c;
  using S = Group;
  c.push_back({"t", S::kState, [](const TickRecord& r) { return r.t; },
               [](TickRecord& r, double v) { r.t = v; }});
  add_vec4(c, "q", S::kState, &TickRecord::q);
  add_vec4(c, "qdot", S::kState, &TickRecord::qdot);
  add_vec4(c, "q_d", S::kState, &TickRecord::q_d);
  add_vec4(c, "qdot_d", S::kState, &TickRecord::qdot_d);
  add_vec4(c, "u_joint", S::kInputs, &TickRecord::u);
  c.push_back({"u_sat", S::kInputs, [](const TickRecord& r) { return r.saturated ? 1.0 : 0.0; },
               [](TickRecord& r, double v) { r.saturated = as_flag(v, "u_sat") == 1.0; }});
  for (int n = 0; n < kMotors; ++n) {
    c.push_back({"theta_" + std::to_string(n), S::kState,
                 [n](const TickRecord& r) { return r.motors[n].theta; },
                 [n](TickRecord& r, double v) { r.motors[n].theta = v; }});
  }
  for (int n = 0; n < kMotors; ++n) {
    c.push_back({"thetadot_" + std::to_string(n), S::kState,
                 [n](const TickRecord& r) { return r.motors[n].thetadot; },
                 [n](TickRecord& r, double v) { r.motors[n].thetadot = v; }});
  }
  for (int n = 0; n < kMotors; ++n) {
    c.push_back({"u_" + std::to_string(n), S::kInputs,
                 [n](const TickRecord& r) { return r.u_motor[n]; },
                 [n](TickRecord& r, double v) { r.u_motor[n] = v; }});
  }
  for (int n = 0; n < kMotors; ++n) {
    const std::string name = "sigma_" + std::to_string(n);
    c.push_back({name, S::kInputs, [n](const TickRecord& r) { return double(r.sigma[n]); },
                 [n, name](TickRecord& r, double v) { r.sigma[n] = int(as_flag(v, name)); }});
  }
  add_vec4(c, "xi", S::kJointErrors, &TickRecord::xi);
  add_vec4(c, "eta", S::kJointErrors, &TickRecord::eta);
  add_vec4(c, "e", S::kSyncErrors, &TickRecord::e);
  add_vec4(c, "r", S::kSyncErrors, &TickRecord::r);
  c.push_back({"V", S::kJointErrors, [](const TickRecord& r) { return r.V; },
               [](TickRecord& r, double v) { r.V = v; }});
  add_vec4(c, "V_sync", S::kSyncErrors, &TickRecord::V_sync);
  // lead_j: 0 = flexion motor leads, 1 = extension motor leads.
  for (int j = 0; j < kJoints; ++j) {
    const std::string name = "lead_" + std::to_string(j);
    c.push_back({name, S::kState,
                 [j](const TickRecord& r) { return r.lead[j] == MotorRole::kExtension ? 1.0 : 0.0; },
                 [j, name](TickRecord& r, double v) {
                   r.lead[j] = as_flag(v, name) == 1.0 ? MotorRole::kExtension : MotorRole::kFlexion;
                 }});
  }
  c.push_back({"chi", S::kChi, [](const TickRecord& r) { return r.chi_norm; },
               [](TickRecord& r, double v) { r.chi_norm = v; }});
  c.push_back({"rho", S::kChi, [](const TickRecord& r) { return r.rho_value; },
               [](TickRecord& r, double v) { r.rho_value = v; }});
  add_vec4(c, "chi_sync", S::kChiSync, &TickRecord::chi_sync);
  return c;
}

const std::vector<Column>& columns() {
  static const std::vector<Column> table = build_columns();
  return table;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::vector<std::string> log_columns() {
  std::vector<std::string> out;
  for (const Column& c : columns()) out.push_back(c.name);
  return out;
}

void write_log_csv(std::ostream& out, const std::vector<TickRecord>& ticks) {
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].name;
  out << '\n';
  std::string line;
  for (const TickRecord& r : ticks) {
    line.clear();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) line += ',';
      line += format_double(cols[i].get(r));
    }
    line += '\n';
    out << line;
  }
}

LoadedLog read_log_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("log is empty");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  std::map<std::string, const Column*> by_name;
  for (const Column& c : columns()) by_name.emplace(c.name, &c);

  std::vector<const Column*> layout;
  std::map<std::string, bool> present;
  for (std::string_view name : split_csv(header)) {
    const auto it = by_name.find(std::string(name));
    if (it == by_name.end()) throw ConfigError("unknown log column '" + std::string(name) + "'");
    if (present[it->first]) throw ConfigError("duplicate log column '" + it->first + "'");
    present[it->first] = true;
    layout.push_back(it->second);
  }

  LoadedLog out;
  for (const Column& c : columns()) {
    if (present[c.name]) continue;
    switch (c.group) {
      case Group::kState: throw ConfigError("log is missing required column '" + c.name + "'");
      case Group::kJointErrors: out.missing.joint_errors = true; break;
      case Group::kSyncErrors: out.missing.sync_errors = true; break;
      case Group::kChi: out.missing.chi = true; break;
      case Group::kChiSync: out.missing.chi_sync = true; break;
      case Group::kInputs: out.missing.inputs = true; break;
    }
  }

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != layout.size())
      throw ConfigError("log line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " fields, expected " +
                        std::to_string(layout.size()));
    TickRecord r;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
      if (cells[i].empty() || ec != std::errc() || ptr != cells[i].data() + cells[i].size())
        throw ConfigError("log line " + std::to_string(line_no) + ": bad number in column '" +
                          layout[i]->name + "'");
      layout[i]->set(r, v);
    }
    out.ticks.push_back(r);
  }
  return out;
}

void recompute_missing(LoadedLog& log, const Scenario& sc, const DerivedConstants& c) {
  if (!log.missing.any()) return;
  const MotorSet motors = make_motors(sc.motors, sc.motor_limits);
  auto& ticks = log.ticks;
  const double beta = sc.sync.beta;

  for (std::size_t k = 0; k < ticks.size(); ++k) {
    TickRecord& r = ticks[k];
    const JointErrors je = joint_errors(r.q, r.qdot, r.q_d, r.qdot_d, sc.joint.alpha);
    if (log.missing.joint_errors) {
      r.xi = je.xi;
      r.eta = je.eta;
      r.V = 0.5 * je.xi.squaredNorm() + 0.5 * je.eta.dot(mass_matrix(r.q, sc.plant) * je.eta);
    }
    const DesiredState d = desired_trajectory(sc.trajectory, r.t);
    if (log.missing.chi) {
      r.chi_norm = auxiliary_signal(ExoState{r.q, r.qdot, r.t}, d, sc.joint.alpha, sc.plant).norm();
      r.rho_value = rho(je.z1_norm, c.rho);
    }
    const SaturatedInput sat = saturate(joint_control(je, sc.joint, c.rho), sc.saturation);
    if (log.missing.inputs) {
      r.u = sat.u;
      r.saturated = sat.active;
      r.sigma = SwitchSignals::from_leads(r.lead).sigma;
    }
    for (int j = 0; j < kJoints; ++j) {
      const int fl = motor_index(j, MotorRole::kFlexion);
      const int ex = motor_index(j, MotorRole::kExtension);
      const SyncErrors se = sync_errors(r.motors[fl].theta, r.motors[ex].theta,
                                        r.motors[fl].thetadot, r.motors[ex].thetadot, beta);
      const int lead = motor_index(j, r.lead[j]);
      const int follower = motor_index(j, opposite(r.lead[j]));
      if (log.missing.sync_errors) {
        r.e[j] = se.e;
        r.r[j] = se.r;
        r.V_sync[j] = 0.5 * se.e * se.e + 0.5 * motors[follower].inertia() * se.r * se.r;
      }
      if (log.missing.inputs) {
        r.u_motor[lead] = r.u[j];
        r.u_motor[follower] = follower_control(opposite(r.lead[j]), se, sc.sync, sc.boundary_layer);
      }
      if (log.missing.chi_sync) {
        const std::size_t lo = k > 0 ? k - 1 : k;
        const std::size_t hi = k + 1 < ticks.size() ? k + 1 : k;
        const double dt = ticks[hi].t - ticks[lo].t;
        const double accel =
            dt > 0.0 ? (ticks[hi].motors[lead].thetadot - ticks[lo].motors[lead].thetadot) / dt : 0.0;
        r.chi_sync[j] = sync_auxiliary_signal(opposite(r.lead[j]), motors[follower], r.motors[lead],
                                              accel, se, beta, r.t);
      }
    }
  }
  log.missing = MissingColumns{};
}

void write_switches_csv(std::ostream& out, const SwitchLog& switches) {
  out << "time,joint,new_lead\n";
  for (const SwitchEvent& ev : switches) {
    out << format_double(ev.time) << ',' << joint_name(ev.joint) << ',' << role_name(ev.new_lead)
        << '\n';
  }
}

void write_report(std::ostream& out, const Scenario& sc, const DerivedConstants& c,
                  const CertificateReport& r, std::size_t ticks, const std::string& status) {
  auto kv = [&out](const std::string& key, const std::string& value) {
    out << key << ": " << value << '\n';
  };
  auto num = [&kv](const std::string& key, double v) { kv(key, format_double(v)); };

  kv("status", status);
  kv("preset", sc.preset);
  num("duration", sc.duration);
  num("step", sc.step);
  kv("ticks", std::to_string(ticks));

  const BoundConstants& b = c.bounds;
  num("bounds.c_m", b.c_m);
  num("bounds.c_M", b.c_M);
  num("bounds.c_c", b.c_c);
  num("bounds.c_g", b.c_g);
  num("bounds.c_p1", b.c_p1);
  num("bounds.c_p2", b.c_p2);
  num("bounds.d_exo", b.d_exo);
  num("bounds.c_j", b.c_j);
  num("bounds.c_J", b.c_J);
  num("bounds.c_d", b.c_d);
  num("bounds.c_D", b.c_D);
  num("bounds.c_de", b.c_de);
  num("bounds.c_De", b.c_De);
  num("bounds.B_lower", b.B_lower);
  num("bounds.B_upper", b.B_upper);
  num("rho.rho1", c.rho.rho1);
  num("rho.rho2", c.rho.rho2);
  num("rho.rho3", c.rho.rho3);
  num("lyapunov.a", c.a);
  num("lyapunov.b", c.b);
  num("lyapunov.delta", c.delta);
  num("lyapunov.a_rho", c.a_rho);
  num("lyapunov.b_rho", c.b_rho);
  num("lyapunov.lambda_rho", c.lambda_rho);

  num("chi.c1", r.chi.c1);
  num("chi.c2", r.chi.c2);
  kv("gains.verdict", r.gains.passed() ? "pass" : "fail");
  kv("gains.k3_ok", yes_no(r.gains.k3_ok));
  num("gains.k3_margin", r.gains.k3_margin);
  kv("gains.k4_ok", yes_no(r.gains.k4_ok));
  num("gains.k4_margin", r.gains.k4_margin);

  kv("guub.verdict", verdict_name(r.guub.verdict));
  num("guub.max_violation", r.guub.max_violation);
  num("guub.worst_time", r.guub.worst_time);
  kv("guub.rho_dominates", yes_no(r.guub.rho_dominates));
  kv("guub.in_domain", yes_no(r.guub.in_domain));
  kv("guub.saturation_free", yes_no(r.guub.saturation_free));
  num("guub.delta", r.guub.delta);
  num("guub.asymptote", r.guub.asymptote);
  num("guub.ultimate_bound", r.guub.ultimate_bound);
  num("guub.steady_state_max_xi", r.guub.steady_state_max_xi);
  kv("guub.steady_state_ok", yes_no(r.guub.steady_state_ok));

  kv("sync.verdict", verdict_name(r.sync.verdict));
  num("sync.max_violation", r.sync.max_violation);
  num("sync.worst_time", r.sync.worst_time);
  kv("sync.worst_joint", r.sync.worst_joint >= 0 ? joint_name(r.sync.worst_joint) : "none");
  kv("sync.intervals", std::to_string(r.sync.intervals));
  kv("sync.checked_ticks", std::to_string(r.sync.checked_ticks));
  kv("sync.skipped_ticks", std::to_string(r.sync.skipped_ticks));
  kv("sync.gain_conditions", yes_no(r.sync.gain_conditions));
  kv("sync.chi_dominates", yes_no(r.sync.chi_dominates));
  num("sync.boundary_layer", r.sync.boundary_layer);
  num("sync.lambda_rho", r.sync.lambda_rho);
  num("sync.overshoot", r.sync.overshoot);

  kv("dwell.verdict", verdict_name(r.dwell.verdict));
  kv("dwell.switches", std::to_string(r.dwell.detail.switches));
  num("dwell.N0", c.dwell.N0);
  num("dwell.tau_a", r.dwell.tau_a);
  num("dwell.tau_a_min", r.dwell.tau_a_min);
  num("dwell.mu", r.dwell.mu);
  num("dwell.lambda_rho", r.dwell.lambda_rho);
  num("dwell.margin", r.dwell.detail.margin);
  num("dwell.worst_t", r.dwell.detail.worst_t);
  num("dwell.worst_T", r.dwell.detail.worst_T);
  kv("dwell.counting_ok", yes_no(r.dwell.detail.counting_ok));
  kv("dwell.tau_a_ok", yes_no(r.dwell.detail.tau_a_ok));
  num("dwell.min_hold", c.dwell.min_hold);
  kv("dwell.deferrals", std::to_string(r.dwell.deferrals));
  kv("dwell.hold_violations", std::to_string(r.dwell.hold_violations));

  for (std::size_t i = 0; i < r.notes.size(); ++i) kv("note." + std::to_string(i), r.notes[i]);
}

}  // namespace exo
