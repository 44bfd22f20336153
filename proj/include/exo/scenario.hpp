#pragma once

#include "exo/bounds.hpp"
#include "exo/joint_controller.hpp"
#include "exo/motor.hpp"
#include "exo/sync_controller.hpp"
#include "exo/trajectory.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace exo {

struct DwellSettings {
  double N0 = 1.0;
  double tau_a = 0.0;     ///< 0 → ln(μ)/λ_ϱ from the constructed constants
  double min_hold = 0.0;  ///< 0 → no enforcement

  bool operator==(const DwellSettings&) const = default;
};

/// Initial condition relative to the desired trajectory at t = 0.
struct InitialConditions {
  Vec4 xi = Vec4::Zero();          ///< q(0) = q_d(0) − ξ(0)
  Vec4 eta = Vec4::Zero();         ///< q̇(0) chosen so that η(0) equals this
  Vec4 sync_error = Vec4::Zero();  ///< follower starts at lead angle − e(0) (flexion leading)

  bool operator==(const InitialConditions&) const = default;
};

struct MonitorToggles {
  bool guub = true;
  bool sync = true;
  bool dwell = true;

  bool operator==(const MonitorToggles&) const = default;
};

struct BoundSettings {
  int grid_points = 9;
  int samples = 20000;
  double margin = 0.1;
  double velocity_limit = 6.0;  ///< [rad/s]
  double lead_margin = 2.0;     ///< inflation of the desired-trajectory envelope for the lead motors

  bool operator==(const BoundSettings&) const = default;
};

struct Scenario {
  std::string preset = "nominal";
  double duration = 60.0;  ///< [s]
  double step = 1e-3;      ///< [s]
  std::uint64_t seed = 1;

  PlantParams plant = PlantParams::anthropometric();
  JointMask clamped{};  ///< kinematically locked joints

  std::array<MotorSpec, kMotors> motors{};
  MotorLimits motor_limits{};

  JointGains joint{};
  bool rho_auto = true;
  RhoCoeffs rho{};
  double saturation = 0.0;  ///< |u_j| limit; 0 → off

  SyncGains sync{};
  double boundary_layer = 0.0;  ///< φ of sat(r/φ); 0 → pure sgn

  DwellSettings dwell{};
  TrajectorySet trajectory{};
  InitialConditions init{};
  MonitorToggles monitors{};
  BoundSettings bounds{};

  /// Throws InvalidParameter / ConfigError on inconsistent settings.
  void validate() const;

  /// Region the bound constants are estimated on: the stop box for free
  /// joints, the held posture for clamped ones.
  StateBox bound_domain() const;

  bool operator==(const Scenario&) const = default;
};

const std::vector<std::string>& preset_names();
std::string preset_description(std::string_view name);

/// Throws ConfigError for unknown names.
Scenario make_preset(std::string_view name);

}  // namespace exo
