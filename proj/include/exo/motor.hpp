#pragma once

// Motor systems of the antagonistic cable pairs.
//
//   J_n θ̈_n + D_n θ̇_n + d_n(t) = B_n u_n σ̄_n(t)
//
// Motor index n = 2·joint + (0 flexion | 1 extension). Angles are pulley-side
// after the gearbox.

#include "exo/dynamics.hpp"
#include "exo/types.hpp"

#include <array>
#include <span>

namespace exo {

enum class MotorRole { kFlexion, kExtension };

const char* role_name(MotorRole role);
MotorRole opposite(MotorRole role);

constexpr int motor_index(int joint, MotorRole role) {
  return 2 * joint + (role == MotorRole::kExtension ? 1 : 0);
}
constexpr int motor_joint(int n) { return n / 2; }
constexpr MotorRole motor_role(int n) {
  return (n % 2 == 0) ? MotorRole::kFlexion : MotorRole::kExtension;
}

struct MotorState {
  double theta = 0.0;     ///< [rad]
  double thetadot = 0.0;  ///< [rad/s]

  bool operator==(const MotorState&) const = default;
};

/// Friction/disturbance proxy d_n(t) = mean + amplitude·sin(2π·frequency·t + phase).
struct MotorDisturbance {
  double mean = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;

  double at(double t) const;
  double lower() const { return mean - amplitude; }
  double upper() const { return mean + amplitude; }

  bool operator==(const MotorDisturbance&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Admissible ranges every motor must satisfy.
struct MotorLimits {
  Interval inertia{1e-4, 1e-1};        ///< [c_j, c_J]
  Interval damping{0.0, 0.05};         ///< [c_d, c_D]
  Interval disturbance{0.0, 0.02};     ///< [c_de, c_De]
  Interval effectiveness{0.2, 0.5};    ///< [B_lower, B_upper]

  void validate() const;
  bool operator==(const MotorLimits&) const = default;
};

/// Raw, unvalidated motor description (what the config file holds).
struct MotorSpec {
  double inertia = 0.008;      ///< J_n [kg·m²]
  double damping = 0.005;      ///< D_n [N·m·s/rad]
  double effectiveness = 0.3;  ///< B_n [N·m per unit input]
  double ratio = 1.0;          ///< lead transmission: θ = ratio·q + offset
  double offset = 0.0;         ///< [rad]
  MotorDisturbance disturbance{0.004, 0.002, 0.7, 0.0};

  bool operator==(const MotorSpec&) const = default;
};

/// Validated motor parameters. Construction enforces the configured limits.
class MotorParams {
 public:
  MotorParams(int index, const MotorSpec& spec, const MotorLimits& limits);

  int index() const { return index_; }
  int joint() const { return motor_joint(index_); }
  MotorRole role() const { return motor_role(index_); }
  double inertia() const { return spec_.inertia; }
  double damping() const { return spec_.damping; }
  double effectiveness() const { return spec_.effectiveness; }
  double ratio() const { return spec_.ratio; }
  double offset() const { return spec_.offset; }
  const MotorDisturbance& disturbance() const { return spec_.disturbance; }
  const MotorSpec& spec() const { return spec_; }

 private:
  int index_;
  MotorSpec spec_;
};

using MotorSet = std::array<MotorParams, kMotors>;

MotorSet make_motors(const std::array<MotorSpec, kMotors>& specs, const MotorLimits& limits);

/// Lead (σ) and follower (σ̄) flags; σ̄_n = 1 − σ_n.
struct SwitchSignals {
  std::array<int, kMotors> sigma{};
  std::array<int, kMotors> sigma_bar{};

  static SwitchSignals from_leads(const std::array<MotorRole, kJoints>& leads);

  /// Throws InvariantViolation unless every pair has exactly one lead and
  /// σ̄ = 1 − σ elementwise.
  void check() const;

  MotorRole lead(int joint) const;

  bool operator==(const SwitchSignals&) const = default;
};

/// θ̈_n = (B_n u_n σ̄_n − D_n θ̇_n − d_n(t)) / J_n
double motor_accel(const MotorState& m, const MotorParams& p, double u_n, int sigma_bar_n,
                   double t);

/// Diagonal B_σ: each joint row carries its current lead motor's B_n.
Mat4 lumped_effectiveness(const SwitchSignals& signals, std::span<const MotorParams> motors);

/// τ_e = B_σ u.
Vec4 exo_torque(const Vec4& u, const SwitchSignals& signals, std::span<const MotorParams> motors);

/// Rigid cable transmission: θ = ratio·q_j + offset, θ̇ = ratio·q̇_j.
MotorState lead_motor_kinematics(const ExoState& s, int joint, const MotorParams& p);
MotorState lead_motor_kinematics(const ExoState& s, int joint, const MotorParams& p,
                                 double offset);

}  // namespace exo
