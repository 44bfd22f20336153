#pragma once

#include "exo/types.hpp"

#include <array>

namespace exo {

/// q_d(t) = mid − amplitude·cos(2πt/period + phase) on active joints; a held
/// posture (mid) with zero derivatives otherwise.
struct TrajectorySpec {
  bool active = false;
  double mid = 0.0;        ///< [rad]
  double amplitude = 0.0;  ///< [rad]
  double period = 1.0;     ///< [s]
  double phase = 0.0;      ///< [rad]

  bool operator==(const TrajectorySpec&) const = default;
};

using TrajectorySet = std::array<TrajectorySpec, kJoints>;

struct DesiredState {
  Vec4 q = Vec4::Zero();
  Vec4 qdot = Vec4::Zero();
  Vec4 qddot = Vec4::Zero();
};

DesiredState desired_trajectory(const TrajectorySet& spec, double t);

void validate(const TrajectorySet& spec);

/// Norm bounds of the desired trajectory over all time.
struct TrajectoryEnvelope {
  double velocity = 0.0;      ///< ≥ sup ‖q̇_d‖
  double acceleration = 0.0;  ///< ≥ sup ‖q̈_d‖
  Vec4 joint_velocity = Vec4::Zero();      ///< per-joint sup |q̇_d,j|
  Vec4 joint_acceleration = Vec4::Zero();  ///< per-joint sup |q̈_d,j|
};

TrajectoryEnvelope envelope(const TrajectorySet& spec);

}  // namespace exo
