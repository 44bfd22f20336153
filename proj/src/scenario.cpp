#include "exo/scenario.hpp"

#include <cmath>
#include <numbers>

namespace exo {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::array<MotorSpec, kMotors> default_motors() {
  std::array<MotorSpec, kMotors> m{};
  for (int n = 0; n < kMotors; ++n) {
    MotorSpec s;
    if (motor_role(n) == MotorRole::kFlexion) {
      s.inertia = 0.008;
      s.damping = 0.005;
      s.effectiveness = 0.3;
    } else {
      s.inertia = 0.007;
      s.damping = 0.004;
      s.effectiveness = 0.25;
    }
    s.disturbance = MotorDisturbance{0.004, 0.002, 0.7, 0.5 * n};
    m[n] = s;
  }
  return m;
}

TrajectorySpec swing(double mid_deg, double amp_deg, double period, double phase) {
  return TrajectorySpec{true, mid_deg * kDeg, amp_deg * kDeg, period, phase};
}

TrajectorySpec hold(double posture) { return TrajectorySpec{false, posture, 0.0, 1.0, 0.0}; }

Scenario nominal() {
  Scenario s;
  s.preset = "nominal";
  s.motors = default_motors();
  s.trajectory = {swing(10.0, 20.0, 2.0, 0.0), swing(30.0, 25.0, 2.0, 0.0),
                  swing(10.0, 20.0, 2.0, std::numbers::pi),
                  swing(30.0, 25.0, 2.0, std::numbers::pi)};
  s.joint = JointGains{2.0, 40.0, 5.0};
  s.sync = SyncGains{40.0, 3.0, 10.0, 10.0};
  s.boundary_layer = 0.2;
  // Starting on the trajectory means u(0) = 0, so the raised right leg briefly
  // falls; the lead envelope has to cover that start-up acceleration.
  s.bounds.lead_margin = 15.0;
  return s;
}

Scenario perturbed() {
  Scenario s = nominal();
  s.preset = "perturbed";
  s.init.xi = Vec4(0.05, -0.04, -0.03, 0.04);
  s.init.sync_error = Vec4::Constant(0.05);
  return s;
}

// Left knee swing between 10 and 80 deg with a 3 s period; everything else
// locked at the hanging posture. Gains as used on the testbed.
Scenario paper_v() {
  Scenario s;
  s.preset = "paper_v";
  s.motors = default_motors();
  s.clamped = {true, false, true, true};
  s.trajectory = {hold(0.0), swing(45.0, 35.0, 3.0, 0.0), hold(0.0), hold(0.0)};
  s.joint = JointGains{2.0, 2.0, 10.0};
  s.sync = SyncGains{0.01, 0.2, 0.0001, 30.0};
  s.boundary_layer = 0.0;
  s.init.sync_error = Vec4(0.0, 0.02, 0.0, 0.0);
  return s;
}

}  // namespace

void Scenario::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("scenario.step must be positive");
  if (!(duration >= step) || !std::isfinite(duration))
    throw ConfigError("scenario.duration must be at least one step");
  plant.validate();
  motor_limits.validate();
  (void)make_motors(motors, motor_limits);
  joint.validate();
  if (!rho_auto) rho.validate();
  if (!(saturation >= 0.0)) throw ConfigError("joint.saturation must be nonnegative");
  sync.validate();
  if (!(boundary_layer >= 0.0)) throw ConfigError("sync.boundary_layer must be nonnegative");
  if (!(dwell.N0 >= 1.0)) throw ConfigError("dwell.N0 must be >= 1");
  if (!(dwell.tau_a >= 0.0)) throw ConfigError("dwell.tau_a must be nonnegative");
  if (!(dwell.min_hold >= 0.0)) throw ConfigError("dwell.min_hold must be nonnegative");
  exo::validate(trajectory);
  if (!init.xi.allFinite() || !init.eta.allFinite() || !init.sync_error.allFinite())
    throw ConfigError("initial conditions must be finite");
  for (int j = 0; j < kJoints; ++j) {
    if (!clamped[j]) continue;
    if (trajectory[j].active)
      throw ConfigError(std::string("clamped joint ") + joint_name(j) +
                        " cannot follow an active trajectory");
    if (init.xi[j] != 0.0 || init.eta[j] != 0.0)
      throw ConfigError(std::string("clamped joint ") + joint_name(j) +
                        " must start on its held posture");
  }
  if (bounds.grid_points < 1 || bounds.samples < 0 || !(bounds.margin >= 0.0) ||
      !(bounds.velocity_limit >= 0.0) || !(bounds.lead_margin >= 1.0)) {
    throw ConfigError("invalid bounds.* settings");
  }
}

StateBox Scenario::bound_domain() const {
  StateBox box = StateBox::from_stops(plant, bounds.velocity_limit);
  for (int j = 0; j < kJoints; ++j) {
    if (clamped[j]) box.q_lower[j] = box.q_upper[j] = trajectory[j].mid;
  }
  return box;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"nominal", "perturbed", "paper_v"};
  return names;
}

std::string preset_description(std::string_view name) {
  if (name == "nominal")
    return "bilateral hip/knee swing, started on the desired trajectory, boundary-layer sync";
  if (name == "perturbed") return "nominal with initial joint and synchronization errors";
  if (name == "paper_v")
    return "left knee 10-80 deg, 3 s period, 60 s, testbed gains; other joints clamped";
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Scenario make_preset(std::string_view name) {
  if (name == "nominal") return nominal();
  if (name == "perturbed") return perturbed();
  if (name == "paper_v") return paper_v();
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace exo
