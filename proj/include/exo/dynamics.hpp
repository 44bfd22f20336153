#pragma once

/**
 * @file dynamics.hpp
 * @brief Four-link sagittal-plane human-exoskeleton model.
 *
 * Evaluates
 *   M(q)q̈ + C(q,q̇)q̇ + G(q) + P(q,q̇) + d(t) = τ_e
 * for two independent thigh/shank chains hanging from a supported trunk.
 *
 * Conventions:
 *   q = 0          both legs hanging vertically
 *   hip angle      absolute thigh angle, flexion (forward swing) positive
 *   knee angle     relative shank angle, flexion (shank rotating backward) positive
 *
 * With the trunk excluded the legs share no inertial coupling, so M, C and
 * ∂M/∂q are block diagonal (left block = joints 0,1; right block = 2,3).
 * G is the gradient of the potential energy, so G appears on the left-hand
 * side together with the inertial terms.
 */

#include "exo/types.hpp"

#include <array>

namespace exo {

struct LinkParams {
  double mass = 1.0;     ///< [kg]
  double length = 0.4;   ///< [m] proximal to distal joint
  double com = 0.2;      ///< [m] centre of mass from the proximal joint
  double inertia = 0.1;  ///< [kg·m²] about the centre of mass

  bool operator==(const LinkParams&) const = default;
};

struct LegParams {
  LinkParams thigh;
  LinkParams shank;  ///< shank and foot lumped

  bool operator==(const LegParams&) const = default;
};

/// Deterministic bounded disturbance d_j(t) = amplitude_j·sin(2π·frequency_j·t + phase_j).
struct DisturbanceSpec {
  Vec4 amplitude = Vec4::Constant(1.0);  ///< [N·m]
  Vec4 frequency = Vec4::Constant(0.5);  ///< [Hz]
  Vec4 phase = Vec4::Zero();             ///< [rad]

  bool operator==(const DisturbanceSpec&) const = default;
};

struct PlantParams {
  std::array<LegParams, 2> legs;  ///< left, right
  double gravity = 9.81;          ///< [m/s²]

  /// Viscoelastic term P = stiffness·w·tanh((q - rest)/w) + damping·q̇.
  Vec4 stiffness = Vec4::Constant(2.0);  ///< [N·m/rad]
  double stiffness_width = 1.0;          ///< w [rad]
  Vec4 damping = Vec4::Constant(0.5);    ///< [N·m·s/rad]
  Vec4 rest = Vec4::Zero();              ///< [rad]

  DisturbanceSpec disturbance;

  /// Mechanical stops [rad].
  Vec4 stop_lower;
  Vec4 stop_upper;

  /// Default plant: 75 kg / 1.75 m adult plus exoskeleton links.
  static PlantParams anthropometric();

  /// Throws InvalidParameter on non-positive link data or negative coefficients.
  /// Inverted stops are rejected too.
  void validate() const;

  bool operator==(const PlantParams&) const = default;
};

struct ExoState {
  Vec4 q = Vec4::Zero();     ///< [rad]
  Vec4 qdot = Vec4::Zero();  ///< [rad/s]
  double t = 0.0;            ///< [s]
};

Mat4 mass_matrix(const Vec4& q, const PlantParams& p);

/// ∂M/∂q_i for i = 0..3.
std::array<Mat4, kJoints> mass_matrix_partials(const Vec4& q, const PlantParams& p);

/// Ṁ = Σ_i ∂M/∂q_i · q̇_i.
Mat4 mass_matrix_rate(const Vec4& q, const Vec4& qdot, const PlantParams& p);

/// Christoffel-symbol construction; ½Ṁ − C is skew-symmetric.
Mat4 coriolis_matrix(const Vec4& q, const Vec4& qdot, const PlantParams& p);

Vec4 gravity_vector(const Vec4& q, const PlantParams& p);

/// Potential energy with U(0) as the minimum (both legs hanging).
double potential_energy(const Vec4& q, const PlantParams& p);

double kinetic_energy(const Vec4& q, const Vec4& qdot, const PlantParams& p);

Vec4 viscoelastic(const Vec4& q, const Vec4& qdot, const PlantParams& p);

Vec4 disturbance(double t, const PlantParams& p);

/// Configured d_exo = ‖amplitude‖, attained when all joints are in phase.
double disturbance_bound(const PlantParams& p);

/**
 * Solve M q̈ = τ_e − Cq̇ − G − P − d for q̈.
 *
 * Joints flagged in @p clamped are kinematically locked: their acceleration
 * is zero and only the free rows are solved (the clamp absorbs the rest).
 * Throws SingularityError when the free block of M has condition number
 * above 1e12.
 */
Vec4 forward_dynamics(const ExoState& s, const Vec4& tau_e, const PlantParams& p,
                      const JointMask& clamped = {});

}  // namespace exo
