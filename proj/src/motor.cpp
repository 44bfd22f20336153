#include "exo/motor.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace exo {

const char* role_name(MotorRole role) {
  return role == MotorRole::kFlexion ? "flexion" : "extension";
}

MotorRole opposite(MotorRole role) {
  return role == MotorRole::kFlexion ? MotorRole::kExtension : MotorRole::kFlexion;
}

double MotorDisturbance::at(double t) const {
  return mean + amplitude * std::sin(2.0 * std::numbers::pi * frequency * t + phase);
}

void MotorLimits::validate() const {
  auto check = [](const Interval& i, const char* name) {
    if (!std::isfinite(i.lo) || !std::isfinite(i.hi) || i.lo > i.hi) {
      throw InvalidParameter(std::string("motor limit ") + name + " must satisfy lo <= hi");
    }
  };
  check(inertia, "inertia");
  check(damping, "damping");
  check(disturbance, "disturbance");
  check(effectiveness, "effectiveness");
  if (!(inertia.lo > 0.0)) throw InvalidParameter("motor inertia lower limit must be positive");
  if (!(effectiveness.lo > 0.0))
    throw InvalidParameter("motor effectiveness lower limit must be positive");
}

MotorParams::MotorParams(int index, const MotorSpec& spec, const MotorLimits& limits)
    : index_(index), spec_(spec) {
  std::ostringstream msg;
  msg << "motor " << index << " (" << joint_name(motor_joint(index)) << ' '
      << role_name(motor_role(index)) << "): ";
  if (index < 0 || index >= kMotors) {
    msg << "index out of range";
    throw InvalidParameter(msg.str());
  }
  if (!(spec.inertia > 0.0)) {
    msg << "inertia must be positive";
    throw InvalidParameter(msg.str());
  }
  if (!(spec.effectiveness > 0.0)) {
    msg << "control effectiveness must be positive";
    throw InvalidParameter(msg.str());
  }
  if (!std::isfinite(spec.ratio) || spec.ratio == 0.0 || !std::isfinite(spec.offset) ||
      !std::isfinite(spec.damping) || !std::isfinite(spec.disturbance.mean) ||
      !std::isfinite(spec.disturbance.frequency) || !std::isfinite(spec.disturbance.phase) ||
      !(spec.disturbance.amplitude >= 0.0)) {
    msg << "non-finite or degenerate parameter";
    throw InvalidParameter(msg.str());
  }
  if (!limits.inertia.contains(spec.inertia)) {
    msg << "inertia " << spec.inertia << " outside [" << limits.inertia.lo << ", "
        << limits.inertia.hi << "]";
    throw InvalidParameter(msg.str());
  }
  if (!limits.damping.contains(spec.damping)) {
    msg << "damping " << spec.damping << " outside [" << limits.damping.lo << ", "
        << limits.damping.hi << "]";
    throw InvalidParameter(msg.str());
  }
  if (!limits.disturbance.contains(spec.disturbance.lower()) ||
      !limits.disturbance.contains(spec.disturbance.upper())) {
    msg << "disturbance range [" << spec.disturbance.lower() << ", " << spec.disturbance.upper()
        << "] outside [" << limits.disturbance.lo << ", " << limits.disturbance.hi << "]";
    throw InvalidParameter(msg.str());
  }
  if (!limits.effectiveness.contains(spec.effectiveness)) {
    msg << "effectiveness " << spec.effectiveness << " outside [" << limits.effectiveness.lo
        << ", " << limits.effectiveness.hi << "]";
    throw InvalidParameter(msg.str());
  }
}

namespace {
template <std::size_t... I>
MotorSet make_motors_impl(const std::array<MotorSpec, kMotors>& specs, const MotorLimits& limits,
                          std::index_sequence<I...>) {
  return MotorSet{MotorParams(static_cast<int>(I), specs[I], limits)...};
}
}  // namespace

MotorSet make_motors(const std::array<MotorSpec, kMotors>& specs, const MotorLimits& limits) {
  limits.validate();
  return make_motors_impl(specs, limits, std::make_index_sequence<kMotors>{});
}

SwitchSignals SwitchSignals::from_leads(const std::array<MotorRole, kJoints>& leads) {
  SwitchSignals s;
  for (int j = 0; j < kJoints; ++j) {
    const int lead = motor_index(j, leads[j]);
    const int follower = motor_index(j, opposite(leads[j]));
    s.sigma[lead] = 1;
    s.sigma[follower] = 0;
    s.sigma_bar[lead] = 0;
    s.sigma_bar[follower] = 1;
  }
  return s;
}

void SwitchSignals::check() const {
  for (int n = 0; n < kMotors; ++n) {
    if ((sigma[n] != 0 && sigma[n] != 1) || sigma_bar[n] != 1 - sigma[n]) {
      throw InvariantViolation("switching signals must satisfy sigma_bar = 1 - sigma");
    }
  }
  for (int j = 0; j < kJoints; ++j) {
    const int leads = sigma[motor_index(j, MotorRole::kFlexion)] +
                      sigma[motor_index(j, MotorRole::kExtension)];
    if (leads != 1) {
      throw InvariantViolation(std::string("joint ") + joint_name(j) +
                               " must have exactly one lead motor");
    }
  }
}

MotorRole SwitchSignals::lead(int joint) const {
  return sigma[motor_index(joint, MotorRole::kFlexion)] == 1 ? MotorRole::kFlexion
                                                               : MotorRole::kExtension;
}

double motor_accel(const MotorState& m, const MotorParams& p, double u_n, int sigma_bar_n,
                   double t) {
  return (p.effectiveness() * u_n * sigma_bar_n - p.damping() * m.thetadot -
          p.disturbance().at(t)) /
         p.inertia();
}

Mat4 lumped_effectiveness(const SwitchSignals& signals, std::span<const MotorParams> motors) {
  if (motors.size() != kMotors) throw InvalidInput("expected eight motors");
  signals.check();
  Mat4 B = Mat4::Zero();
  for (int n = 0; n < kMotors; ++n) {
    if (signals.sigma[n] == 1) B(motor_joint(n), motor_joint(n)) += motors[n].effectiveness();
  }
  return B;
}

Vec4 exo_torque(const Vec4& u, const SwitchSignals& signals, std::span<const MotorParams> motors) {
  require_finite(u, "joint control input");
  return lumped_effectiveness(signals, motors) * u;
}

MotorState lead_motor_kinematics(const ExoState& s, int joint, const MotorParams& p) {
  return lead_motor_kinematics(s, joint, p, p.offset());
}

MotorState lead_motor_kinematics(const ExoState& s, int joint, const MotorParams& p,
                                 double offset) {
  return MotorState{p.ratio() * s.q[joint] + offset, p.ratio() * s.qdot[joint]};
}

}  // namespace exo
