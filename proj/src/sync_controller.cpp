#include "exo/sync_controller.hpp"

#include <algorithm>
#include <cmath>

namespace exo {

void SyncGains::validate() const {
  if (!(k2 > 0.0) || !(k3 > 0.0) || !(k4 > 0.0) || !(beta > 0.0) || !std::isfinite(k2) ||
      !std::isfinite(k3) || !std::isfinite(k4) || !std::isfinite(beta)) {
    throw InvalidParameter("sync gains k2, k3, k4, beta must be positive");
  }
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double switching_function(double r, double boundary_layer) {
  if (boundary_layer <= 0.0) return sgn(r);
  return std::clamp(r / boundary_layer, -1.0, 1.0);
}

SyncErrors sync_errors(double theta_fl, double theta_ex, double thetadot_fl, double thetadot_ex,
                       double beta) {
  SyncErrors s;
  s.e = theta_fl - theta_ex;
  s.r = (thetadot_fl - thetadot_ex) + beta * s.e;
  s.z2_norm = std::hypot(s.e, s.r);
  return s;
}

double control_extension(const SyncErrors& s, const SyncGains& g, double boundary_layer) {
  return g.k2 * s.r + (g.k3 + g.k4 * s.z2_norm) * switching_function(s.r, boundary_layer);
}

double control_flexion(const SyncErrors& s, const SyncGains& g, double boundary_layer) {
  return -g.k2 * s.r - (g.k3 + g.k4 * s.z2_norm) * switching_function(s.r, boundary_layer);
}

double follower_control(MotorRole follower, const SyncErrors& s, const SyncGains& g,
                        double boundary_layer) {
  return follower == MotorRole::kExtension ? control_extension(s, g, boundary_layer)
                                           : control_flexion(s, g, boundary_layer);
}

GainVerdict check_gain_conditions(const SyncGains& g, const ChiBounds& b, double B_lower) {
  if (!(B_lower > 0.0)) throw InvalidInput("B_lower must be positive");
  GainVerdict v;
  v.k3_margin = g.k3 - b.c1 / B_lower;
  v.k4_margin = g.k4 - b.c2 / B_lower;
  v.k3_ok = v.k3_margin >= 0.0;
  v.k4_ok = v.k4_margin >= 0.0;
  return v;
}

ChiBounds chi_bounds_from_constants(const BoundConstants& b, const LeadEnvelope& lead,
                                    double beta) {
  const double D = std::max(std::abs(b.c_d), std::abs(b.c_D));
  const double d = std::max(std::abs(b.c_de), std::abs(b.c_De));
  ChiBounds out;
  out.c1 = b.c_J * lead.acceleration + D * lead.velocity + d;
  out.c2 = std::hypot(b.c_J * beta + D, b.c_J * beta * beta + D * beta + 1.0);
  return out;
}

ChiBounds chi_bounds_from_params(std::span<const MotorParams> motors, const LeadEnvelope& lead,
                                 double beta) {
  BoundConstants b;
  fill_motor_bounds(b, motors);
  return chi_bounds_from_constants(b, lead, beta);
}

double sync_auxiliary_signal(MotorRole follower, const MotorParams& fp, const MotorState& lead,
                             double lead_accel, const SyncErrors& s, double beta, double t) {
  const double J = fp.inertia();
  const double D = fp.damping();
  const double d = fp.disturbance().at(t);
  const double edot = s.r - beta * s.e;
  if (follower == MotorRole::kExtension) {
    // Lead is the flexion motor: θ_ex = θ_fl − e.
    return J * (lead_accel + beta * edot) + D * (lead.thetadot - edot) + d + s.e;
  }
  // Lead is the extension motor: θ_fl = θ_ex + e.
  return -J * (lead_accel - beta * edot) - D * (lead.thetadot + edot) - d + s.e;
}

}  // namespace exo
