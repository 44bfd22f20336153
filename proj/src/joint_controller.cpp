#include "exo/joint_controller.hpp"

#include <cmath>

namespace exo {

void JointGains::validate() const {
  if (!(k1 > 0.0) || !(epsilon > 0.0) || !(alpha > 0.0) || !std::isfinite(k1) ||
      !std::isfinite(epsilon) || !std::isfinite(alpha)) {
    throw InvalidParameter("joint gains k1, epsilon, alpha must be positive");
  }
}

void RhoCoeffs::validate() const {
  if (!(rho1 >= 0.0) || !(rho2 >= 0.0) || !(rho3 >= 0.0) || !std::isfinite(rho1) ||
      !std::isfinite(rho2) || !std::isfinite(rho3)) {
    throw InvalidParameter("rho coefficients must be nonnegative");
  }
}

JointErrors joint_errors(const Vec4& q, const Vec4& qdot, const Vec4& q_d, const Vec4& qdot_d,
                         double alpha) {
  require_finite(q, "joint angles");
  require_finite(qdot, "joint velocities");
  require_finite(q_d, "desired joint angles");
  require_finite(qdot_d, "desired joint velocities");
  JointErrors e;
  e.xi = q_d - q;
  e.eta = (qdot_d - qdot) + alpha * e.xi;
  e.z1_norm = std::sqrt(e.xi.squaredNorm() + e.eta.squaredNorm());
  return e;
}

double rho(double z1_norm, const RhoCoeffs& c) {
  return c.rho1 + c.rho2 * z1_norm + c.rho3 * z1_norm * z1_norm;
}

Vec4 joint_control(const JointErrors& e, const JointGains& g, const RhoCoeffs& c) {
  const double r = rho(e.z1_norm, c);
  return g.k1 * e.eta + (r * r / g.epsilon) * e.eta;
}

SaturatedInput saturate(const Vec4& u, double limit) {
  SaturatedInput out{u, false};
  if (limit <= 0.0) return out;
  for (int j = 0; j < kJoints; ++j) {
    if (std::abs(u[j]) > limit) {
      out.u[j] = std::copysign(limit, u[j]);
      out.active = true;
    }
  }
  return out;
}

Vec4 auxiliary_signal(const ExoState& s, const DesiredState& d, double alpha,
                      const PlantParams& p) {
  const Vec4 xi = d.q - s.q;
  const Vec4 xi_dot = d.qdot - s.qdot;
  return mass_matrix(s.q, p) * (d.qddot + alpha * xi_dot) +
         coriolis_matrix(s.q, s.qdot, p) * (d.qdot + alpha * xi) + gravity_vector(s.q, p) +
         viscoelastic(s.q, s.qdot, p) + disturbance(s.t, p);
}

RhoCoeffs rho_coeffs_from_bounds(const BoundConstants& b, const TrajectoryEnvelope& env,
                                 double alpha) {
  const double V = env.velocity;
  const double A = env.acceleration;
  const double s = std::sqrt(1.0 + alpha * alpha);
  RhoCoeffs c;
  c.rho1 = b.c_M * A + b.c_c * V * V + b.c_g + b.c_p1 + b.c_p2 * V + b.d_exo;
  c.rho2 = b.c_M * std::sqrt(alpha * alpha + alpha * alpha * alpha * alpha) +
           b.c_c * V * (s + alpha) + b.c_p2 * s;
  c.rho3 = b.c_c * s * alpha;
  return c;
}

}  // namespace exo
