#pragma once

#include "exo/dynamics.hpp"
#include "exo/motor.hpp"

#include <cstdint>
#include <span>

namespace exo {

/// Known constants of the model's bounding properties.
struct BoundConstants {
  // Plant side.
  double c_m = 0.0;    ///< min eigenvalue of M over the domain
  double c_M = 0.0;    ///< max eigenvalue of M
  double c_c = 0.0;    ///< ‖C(q,q̇)‖ ≤ c_c‖q̇‖
  double c_g = 0.0;    ///< ‖G(q)‖ ≤ c_g
  double c_p1 = 0.0;   ///< ‖P‖ ≤ c_p1 + c_p2‖q̇‖
  double c_p2 = 0.0;
  double d_exo = 0.0;  ///< ‖d(t)‖ ≤ d_exo

  // Motor side.
  double c_j = 0.0, c_J = 0.0;    ///< J_n ∈ [c_j, c_J]
  double c_d = 0.0, c_D = 0.0;    ///< D_n ∈ [c_d, c_D]
  double c_de = 0.0, c_De = 0.0;  ///< d_n(t) ∈ [c_de, c_De]
  double B_lower = 0.0, B_upper = 0.0;

  /// Throws InvariantViolation when ordering or sign constraints fail.
  void validate() const;
};

/// Region of state space over which the constants are estimated.
struct StateBox {
  Vec4 q_lower = Vec4::Zero();
  Vec4 q_upper = Vec4::Zero();
  double velocity_limit = 0.0;  ///< bound on ‖q̇‖ [rad/s]

  static StateBox from_stops(const PlantParams& p, double velocity_limit);
  bool contains(const Vec4& q, double tol = 0.0) const;
};

struct BoundOptions {
  int grid_points = 9;     ///< per non-degenerate joint axis
  int samples = 20000;     ///< additional uniform random samples
  double margin = 0.1;     ///< relative safety margin
  std::uint64_t seed = 1;
};

/**
 * Plant-side constants by grid + random sampling of the box, inflated by the
 * margin (c_m shrunk by it). c_c uses the per-configuration bound
 * sqrt(Σ_i ‖C(q, e_i)‖²) ≥ sup_{‖v‖=1} ‖C(q, v)‖, c_p2 is the largest damping
 * coefficient and d_exo the configured disturbance norm (both exact).
 * Motor-side fields are left at zero. Deterministic given the seed.
 */
BoundConstants estimate_bounds(const PlantParams& p, const StateBox& domain,
                               const BoundOptions& opts = {});

/// Plant-side constants plus the motor-side intervals taken from @p motors.
BoundConstants estimate_bounds(const PlantParams& p, const StateBox& domain,
                               std::span<const MotorParams> motors,
                               const BoundOptions& opts = {});

void fill_motor_bounds(BoundConstants& b, std::span<const MotorParams> motors);

/// Per-configuration upper bound on ‖C(q, v)‖ / ‖v‖.
double coriolis_gain(const Vec4& q, const PlantParams& p);

}  // namespace exo
