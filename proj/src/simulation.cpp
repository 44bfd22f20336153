#include "exo/simulation.hpp"

#include "exo/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace exo {

namespace {

// Stacked state: q (4), q̇ (4), θ (8), θ̇ (8).
using FullState = Eigen::Matrix<double, 2 * kJoints + 2 * kMotors, 1>;

constexpr int kQ = 0;
constexpr int kQdot = kJoints;
constexpr int kTheta = 2 * kJoints;
constexpr int kThetadot = 2 * kJoints + kMotors;

// Anything beyond this is treated as a blow-up even while still finite.
constexpr double kDivergenceNorm = 1e6;

ExoState plant_state(const FullState& x, double t) {
  return ExoState{x.segment<kJoints>(kQ), x.segment<kJoints>(kQdot), t};
}

MotorState motor_state(const FullState& x, int n) {
  return MotorState{x[kTheta + n], x[kThetadot + n]};
}

void set_motor_state(FullState& x, int n, const MotorState& m) {
  x[kTheta + n] = m.theta;
  x[kThetadot + n] = m.thetadot;
}

SyncErrors pair_errors(const FullState& x, int joint, double beta) {
  const int fl = motor_index(joint, MotorRole::kFlexion);
  const int ex = motor_index(joint, MotorRole::kExtension);
  return sync_errors(x[kTheta + fl], x[kTheta + ex], x[kThetadot + fl], x[kThetadot + ex], beta);
}

double lumped_value(const Vec4& xi, const Vec4& eta, const Vec4& q, const PlantParams& p) {
  return 0.5 * xi.squaredNorm() + 0.5 * eta.dot(mass_matrix(q, p) * eta);
}

}  // namespace

DerivedConstants derive_constants(const Scenario& sc) {
  sc.validate();
  const MotorSet motors = make_motors(sc.motors, sc.motor_limits);

  DerivedConstants c;
  const BoundOptions opts{sc.bounds.grid_points, sc.bounds.samples, sc.bounds.margin, sc.seed};
  c.bounds = estimate_bounds(sc.plant, sc.bound_domain(), motors, opts);
  c.trajectory = envelope(sc.trajectory);
  c.rho = sc.rho_auto ? rho_coeffs_from_bounds(c.bounds, c.trajectory, sc.joint.alpha) : sc.rho;

  double max_ratio = 0.0;
  for (const MotorParams& m : motors) max_ratio = std::max(max_ratio, std::abs(m.ratio()));
  c.lead.velocity = sc.bounds.lead_margin * max_ratio * c.trajectory.joint_velocity.maxCoeff();
  c.lead.acceleration =
      sc.bounds.lead_margin * max_ratio * c.trajectory.joint_acceleration.maxCoeff();
  c.chi = chi_bounds_from_constants(c.bounds, c.lead, sc.sync.beta);
  c.gains = check_gain_conditions(sc.sync, c.chi, c.bounds.B_lower);

  c.a = std::min(0.5, 0.5 * c.bounds.c_m);
  c.b = std::max(0.5, 0.5 * c.bounds.c_M);
  c.delta = std::min(sc.joint.alpha, c.bounds.B_lower * sc.joint.k1) / c.b;
  c.ultimate_bound = std::sqrt(sc.joint.epsilon / (c.delta * c.a));

  c.a_rho = std::min(0.5, 0.5 * c.bounds.c_j);
  c.b_rho = std::max(0.5, 0.5 * c.bounds.c_J);
  c.lambda_rho = std::min(sc.sync.beta, c.bounds.B_lower * sc.sync.k2) / c.b_rho;

  c.dwell.N0 = sc.dwell.N0;
  c.dwell.mu = c.b_rho / c.a_rho;
  c.dwell.lambda_rho = c.lambda_rho;
  c.dwell.min_hold = sc.dwell.min_hold;
  if (sc.dwell.tau_a > 0.0) {
    c.dwell.tau_a = sc.dwell.tau_a;
  } else {
    // With μ = 1 any τ_a works; one switch per tick is the loosest meaningful choice.
    const double floor = c.dwell.min_tau_a();
    c.dwell.tau_a = floor > 0.0 ? floor : sc.step;
  }
  try {
    c.dwell.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SimulationResult run(const Scenario& sc) {
  auto result = std::make_shared<SimulationResult>();
  result->scenario = sc;
  result->constants = derive_constants(sc);
  const DerivedConstants& c = result->constants;
  const MotorSet motors = make_motors(sc.motors, sc.motor_limits);
  const PlantParams& plant = sc.plant;
  const double beta = sc.sync.beta;
  const double h = sc.step;
  const long steps = std::lround(sc.duration / h);

  // Lead offsets move when a motor takes over so that its angle stays continuous.
  std::array<double, kMotors> offset{};
  for (int n = 0; n < kMotors; ++n) offset[n] = motors[n].offset();

  // Initial plant state relative to the desired trajectory.
  FullState x = FullState::Zero();
  const DesiredState d0 = desired_trajectory(sc.trajectory, 0.0);
  const Vec4 q0 = d0.q - sc.init.xi;
  const Vec4 qdot0 = d0.qdot + sc.joint.alpha * sc.init.xi - sc.init.eta;
  x.segment<kJoints>(kQ) = q0;
  x.segment<kJoints>(kQdot) = qdot0;

  const JointErrors e0 = joint_errors(q0, qdot0, d0.q, d0.qdot, sc.joint.alpha);
  const Vec4 u0 =
      saturate(joint_control(e0, sc.joint, c.rho), sc.saturation).u;
  AllocationState alloc = AllocationState::initial(u0);

  {
    const ExoState s0 = plant_state(x, 0.0);
    for (int j = 0; j < kJoints; ++j) {
      const int lead = motor_index(j, alloc.lead[j]);
      const int follower = motor_index(j, opposite(alloc.lead[j]));
      const MotorState lm = lead_motor_kinematics(s0, j, motors[lead], offset[lead]);
      set_motor_state(x, lead, lm);
      // e = θ_fl − θ_ex starts at the configured value whichever motor leads.
      const double sign = alloc.lead[j] == MotorRole::kFlexion ? -1.0 : 1.0;
      set_motor_state(x, follower, MotorState{lm.theta + sign * sc.init.sync_error[j], lm.thetadot});
    }
  }

  auto follower_input = [&](const FullState& state, int joint, MotorRole lead) {
    const SyncErrors s = pair_errors(state, joint, beta);
    return follower_control(opposite(lead), s, sc.sync, sc.boundary_layer);
  };

  auto fail = [&](const std::string& why, double t) {
    result->log.switches = alloc.log;
    result->log.deferrals = alloc.deferrals;
    result->report = certify(result->log, sc, c);
    throw DivergenceError(why + " at t = " + std::to_string(t), result);
  };

  result->log.ticks.reserve(static_cast<std::size_t>(steps) + 1);

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const ExoState s = plant_state(x, t);
    const DesiredState d = desired_trajectory(sc.trajectory, t);

    const JointErrors je = joint_errors(s.q, s.qdot, d.q, d.qdot, sc.joint.alpha);
    const double rho_value = rho(je.z1_norm, c.rho);
    const SaturatedInput sat = saturate(joint_control(je, sc.joint, c.rho), sc.saturation);
    const Vec4 u = sat.u;

    if (k > 0) {
      const auto before = alloc.lead;
      Allocation next = allocate(u, std::move(alloc), t, c.dwell);
      alloc = std::move(next.state);
      for (int j = 0; j < kJoints; ++j) {
        if (alloc.lead[j] == before[j]) continue;
        const int lead = motor_index(j, alloc.lead[j]);
        offset[lead] = x[kTheta + lead] - motors[lead].ratio() * s.q[j];
        set_motor_state(x, lead, lead_motor_kinematics(s, j, motors[lead], offset[lead]));
      }
    }
    const SwitchSignals signals = SwitchSignals::from_leads(alloc.lead);
    signals.check();
    const auto leads = alloc.lead;

    const Vec4 tau = exo_torque(u, signals, motors);
    const Vec4 qddot = forward_dynamics(s, tau, plant, sc.clamped);

    TickRecord rec;
    rec.t = t;
    rec.q = s.q;
    rec.qdot = s.qdot;
    rec.q_d = d.q;
    rec.qdot_d = d.qdot;
    rec.u = u;
    rec.saturated = sat.active;
    rec.sigma = signals.sigma;
    rec.xi = je.xi;
    rec.eta = je.eta;
    rec.V = lumped_value(je.xi, je.eta, s.q, plant);
    rec.lead = leads;
    rec.chi_norm = auxiliary_signal(s, d, sc.joint.alpha, plant).norm();
    rec.rho_value = rho_value;
    for (int n = 0; n < kMotors; ++n) rec.motors[n] = motor_state(x, n);
    for (int j = 0; j < kJoints; ++j) {
      const int lead = motor_index(j, leads[j]);
      const int follower = motor_index(j, opposite(leads[j]));
      const SyncErrors se = pair_errors(x, j, beta);
      rec.e[j] = se.e;
      rec.r[j] = se.r;
      rec.V_sync[j] = 0.5 * se.e * se.e + 0.5 * motors[follower].inertia() * se.r * se.r;
      rec.u_motor[lead] = u[j];
      rec.u_motor[follower] = follower_input(x, j, leads[j]);
      rec.chi_sync[j] = sync_auxiliary_signal(opposite(leads[j]), motors[follower],
                                              motor_state(x, lead),
                                              motors[lead].ratio() * qddot[j], se, beta, t);
    }
    result->log.ticks.push_back(rec);

    if (k == steps) break;

    auto rhs = [&](double ts, const FullState& xs) {
      FullState dx;
      const ExoState ps = plant_state(xs, ts);
      const Vec4 acc = forward_dynamics(ps, tau, plant, sc.clamped);
      dx.segment<kJoints>(kQ) = ps.qdot;
      dx.segment<kJoints>(kQdot) = acc;
      for (int j = 0; j < kJoints; ++j) {
        const int lead = motor_index(j, leads[j]);
        const int follower = motor_index(j, opposite(leads[j]));
        dx[kTheta + lead] = motors[lead].ratio() * ps.qdot[j];
        dx[kThetadot + lead] = motors[lead].ratio() * acc[j];
        const double uf = follower_input(xs, j, leads[j]);
        dx[kTheta + follower] = xs[kThetadot + follower];
        dx[kThetadot + follower] = motor_accel(motor_state(xs, follower), motors[follower], uf, 1, ts);
      }
      return dx;
    };

    x = rk4_step(rhs, x, t, h);
    if (!x.allFinite()) fail("non-finite state", t + h);
    if (x.norm() > kDivergenceNorm) fail("state norm exceeded " + std::to_string(kDivergenceNorm), t + h);

    // Rigid transmission: the lead motor is slaved to its joint exactly.
    const ExoState after = plant_state(x, t + h);
    for (int j = 0; j < kJoints; ++j) {
      const int lead = motor_index(j, leads[j]);
      set_motor_state(x, lead, lead_motor_kinematics(after, j, motors[lead], offset[lead]));
    }
  }

  result->log.switches = alloc.log;
  result->log.deferrals = alloc.deferrals;
  result->report = certify(result->log, sc, c);
  return std::move(*result);
}

CertificateReport certify(const SimulationLog& log, const Scenario& sc,
                          const DerivedConstants& constants) {
  CertificateReport report;
  report.gains = constants.gains;
  report.chi = constants.chi;
  report.guub = monitor_guub(log.ticks, constants, sc);
  report.sync = monitor_sync_exponential(log.ticks, log.switches, constants, sc);
  if (sc.monitors.dwell) {
    const double T = log.ticks.empty() ? 0.0 : log.ticks.back().t;
    report.dwell = monitor_dwell(log.switches, log.deferrals, constants, T);
  }

  auto& notes = report.notes;
  if (sc.saturation > 0.0)
    notes.push_back("joint input saturation is enabled; the joint envelope needs it inactive");
  if (!report.guub.rho_dominates) notes.push_back("rho did not dominate |chi| at every tick");
  if (!report.guub.in_domain) notes.push_back("q left the domain the bound constants cover");
  if (!report.guub.saturation_free) notes.push_back("saturation was active during the run");
  if (!report.gains.passed()) notes.push_back("sync gain conditions fail; sync envelope withheld");
  if (!report.sync.chi_dominates)
    notes.push_back("|chi_sync| exceeded c1 + c2|z2| on some tick; sync envelope withheld");
  if (sc.boundary_layer > 0.0)
    notes.push_back("boundary layer active; sync envelope checked only where |r| > phi");
  for (int j = 0; j < kJoints; ++j) {
    if (sc.clamped[j]) notes.push_back(std::string("joint ") + joint_name(j) + " clamped");
  }
  return report;
}

SwitchLog switches_from_ticks(const std::vector<TickRecord>& ticks) {
  SwitchLog out;
  for (std::size_t k = 1; k < ticks.size(); ++k) {
    for (int j = 0; j < kJoints; ++j) {
      if (ticks[k].lead[j] != ticks[k - 1].lead[j]) out.push_back({ticks[k].t, j, ticks[k].lead[j]});
    }
  }
  return out;
}

}  // namespace exo
