#include "exo/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace exo {

DesiredState desired_trajectory(const TrajectorySet& spec, double t) {
  require_finite(t, "time");
  DesiredState d;
  for (int j = 0; j < kJoints; ++j) {
    const TrajectorySpec& s = spec[j];
    if (!s.active) {
      d.q[j] = s.mid;
      continue;
    }
    const double w = 2.0 * std::numbers::pi / s.period;
    const double arg = w * t + s.phase;
    d.q[j] = s.mid - s.amplitude * std::cos(arg);
    d.qdot[j] = s.amplitude * w * std::sin(arg);
    d.qddot[j] = s.amplitude * w * w * std::cos(arg);
  }
  return d;
}

void validate(const TrajectorySet& spec) {
  for (int j = 0; j < kJoints; ++j) {
    const TrajectorySpec& s = spec[j];
    if (!std::isfinite(s.mid) || !std::isfinite(s.amplitude) || !std::isfinite(s.phase)) {
      throw InvalidParameter(std::string("trajectory for ") + joint_name(j) + " is not finite");
    }
    if (s.active && !(s.period > 0.0 && std::isfinite(s.period))) {
      throw InvalidParameter(std::string("trajectory period for ") + joint_name(j) +
                             " must be positive");
    }
  }
}

TrajectoryEnvelope envelope(const TrajectorySet& spec) {
  TrajectoryEnvelope env;
  for (int j = 0; j < kJoints; ++j) {
    const TrajectorySpec& s = spec[j];
    if (!s.active) continue;
    const double w = 2.0 * std::numbers::pi / s.period;
    env.joint_velocity[j] = std::abs(s.amplitude) * w;
    env.joint_acceleration[j] = std::abs(s.amplitude) * w * w;
  }
  env.velocity = env.joint_velocity.norm();
  env.acceleration = env.joint_acceleration.norm();
  return env;
}

}  // namespace exo
