#pragma once

// Robust high-gain joint tracking layer:
//   ξ = q_d − q,  η = ξ̇ + αξ,  u = k1·η + (1/ε)·ρ²(‖z1‖)·η,  z1 = [ξᵀ ηᵀ]ᵀ

#include "exo/bounds.hpp"
#include "exo/dynamics.hpp"
#include "exo/trajectory.hpp"

namespace exo {

struct JointGains {
  double k1 = 2.0;
  double epsilon = 2.0;
  double alpha = 10.0;

  void validate() const;
  bool operator==(const JointGains&) const = default;
};

struct RhoCoeffs {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double rho3 = 0.0;

  void validate() const;
  bool operator==(const RhoCoeffs&) const = default;
};

struct JointErrors {
  Vec4 xi = Vec4::Zero();
  Vec4 eta = Vec4::Zero();
  double z1_norm = 0.0;
};

JointErrors joint_errors(const Vec4& q, const Vec4& qdot, const Vec4& q_d, const Vec4& qdot_d,
                         double alpha);

/// ρ(s) = ρ1 + ρ2·s + ρ3·s²
double rho(double z1_norm, const RhoCoeffs& c);

Vec4 joint_control(const JointErrors& e, const JointGains& g, const RhoCoeffs& c);

struct SaturatedInput {
  Vec4 u = Vec4::Zero();
  bool active = false;
};

/// Elementwise clamp to ±limit; limit ≤ 0 disables saturation.
SaturatedInput saturate(const Vec4& u, double limit);

/**
 * Auxiliary signal χ = M(q̈_d + αξ̇) + C(q̇_d + αξ) + G + P + d evaluated at
 * the actual state.
 */
Vec4 auxiliary_signal(const ExoState& s, const DesiredState& d, double alpha,
                      const PlantParams& p);

/**
 * Coefficients with ρ(‖z1‖) ≥ ‖χ‖ wherever q stays inside the domain the
 * constants were estimated on. With ξ̇ = η − αξ and q̇ = q̇_d − η + αξ:
 *
 *   ρ1 = c_M·A + c_c·V² + c_g + c_p1 + c_p2·V + d_exo
 *   ρ2 = c_M·√(α² + α⁴) + c_c·V·(s + α) + c_p2·s
 *   ρ3 = c_c·s·α,            s = √(1 + α²)
 *
 * where V, A bound ‖q̇_d‖ and ‖q̈_d‖.
 */
RhoCoeffs rho_coeffs_from_bounds(const BoundConstants& b, const TrajectoryEnvelope& env,
                                 double alpha);

}  // namespace exo
