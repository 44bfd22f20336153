#pragma once

// Sliding-mode follower synchronization for one antagonistic motor pair.
//
//   e = θ_fl − θ_ex,  r = ė + βe,  z2 = [e r]ᵀ
//   u_ex = k2·r + (k3 + k4‖z2‖)·sgn(r),   u_fl = −u_ex

#include "exo/bounds.hpp"
#include "exo/motor.hpp"

#include <span>

namespace exo {

struct SyncGains {
  double k2 = 0.01;
  double k3 = 0.2;
  double k4 = 0.0001;
  double beta = 30.0;

  void validate() const;
  bool operator==(const SyncGains&) const = default;
};

struct SyncErrors {
  double e = 0.0;
  double r = 0.0;
  double z2_norm = 0.0;
};

struct ChiBounds {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// sgn with sgn(0) = 0.
double sgn(double x);

/// sgn(r) when boundary_layer is 0, else sat(r / boundary_layer).
double switching_function(double r, double boundary_layer);

SyncErrors sync_errors(double theta_fl, double theta_ex, double thetadot_fl, double thetadot_ex,
                       double beta);

double control_extension(const SyncErrors& s, const SyncGains& g, double boundary_layer = 0.0);
double control_flexion(const SyncErrors& s, const SyncGains& g, double boundary_layer = 0.0);

/// Input for whichever motor of the pair is currently following.
double follower_control(MotorRole follower, const SyncErrors& s, const SyncGains& g,
                        double boundary_layer = 0.0);

struct GainVerdict {
  bool k3_ok = false;
  bool k4_ok = false;
  double k3_margin = 0.0;  ///< k3 − c1/B_lower
  double k4_margin = 0.0;  ///< k4 − c2/B_lower

  bool passed() const { return k3_ok && k4_ok; }
};

/// k3 ≥ c1/B_lower and k4 ≥ c2/B_lower.
GainVerdict check_gain_conditions(const SyncGains& g, const ChiBounds& b, double B_lower);

/// Bounds on the lead motor's motion (pulley side).
struct LeadEnvelope {
  double velocity = 0.0;
  double acceleration = 0.0;
};

/**
 * c1, c2 with |χ_ϱ| ≤ c1 + c2‖z2‖ for either follower role. Expanding
 * ė = r − βe in χ_ϱ gives
 *
 *   c1 = c_J·A + max|D|·V + max|d_n|
 *   c2 = √((c_J·β + max|D|)² + (c_J·β² + max|D|·β + 1)²)
 *
 * where the "+e" term of χ_ϱ is carried by c2.
 */
ChiBounds chi_bounds_from_params(std::span<const MotorParams> motors, const LeadEnvelope& lead,
                                 double beta);

/// Same bound from already-estimated constants.
ChiBounds chi_bounds_from_constants(const BoundConstants& b, const LeadEnvelope& lead,
                                    double beta);

/**
 * χ_ϱ for the follower of a pair, given the lead's motion. With the follower
 * model J θ̈ + D θ̇ + d = B u this is the quantity for which
 * J ṙ = χ_ϱ − e ∓ B u holds (− for an extension follower, + for flexion).
 */
double sync_auxiliary_signal(MotorRole follower, const MotorParams& follower_params,
                             const MotorState& lead, double lead_accel, const SyncErrors& s,
                             double beta, double t);

}  // namespace exo
