#include "exo/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace exo {

const char* joint_name(int joint) {
  switch (joint) {
    case kLeftHip: return "left_hip";
    case kLeftKnee: return "left_knee";
    case kRightHip: return "right_hip";
    case kRightKnee: return "right_knee";
    default: return "unknown";
  }
}

void require_finite(const Vec4& v, const char* what) {
  if (!v.allFinite()) throw InvalidInput(std::string("non-finite ") + what);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string("non-finite ") + what);
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Per-leg constants of the two-link chain.
struct LegTerms {
  double m11_const;  // M11 = m11_const + 2h·cos(knee)
  double m22;        // M22 (constant)
  double h;          // m_shank · l_thigh · c_shank
  double g_thigh;    // g·(m_t·c_t + m_s·l_t)
  double g_shank;    // g·m_s·c_s
};

LegTerms leg_terms(const LegParams& leg, double gravity) {
  const LinkParams& t = leg.thigh;
  const LinkParams& s = leg.shank;
  LegTerms out{};
  out.m22 = s.inertia + s.mass * s.com * s.com;
  out.h = s.mass * t.length * s.com;
  out.m11_const = t.inertia + t.mass * t.com * t.com + s.inertia +
                  s.mass * (t.length * t.length + s.com * s.com);
  out.g_thigh = gravity * (t.mass * t.com + s.mass * t.length);
  out.g_shank = gravity * s.mass * s.com;
  return out;
}

void check_link(const LinkParams& l, const char* name) {
  std::ostringstream msg;
  if (!(l.mass > 0.0) || !(l.length > 0.0) || !(l.inertia > 0.0)) {
    msg << name << ": mass, length and inertia must be strictly positive";
    throw InvalidParameter(msg.str());
  }
  if (!std::isfinite(l.com) || !std::isfinite(l.mass) || !std::isfinite(l.length) ||
      !std::isfinite(l.inertia)) {
    msg << name << ": non-finite link parameter";
    throw InvalidParameter(msg.str());
  }
}

}  // namespace

PlantParams PlantParams::anthropometric() {
  // Segment fractions from standard anthropometric tables for a 75 kg, 1.75 m
  // adult, with 1.5 kg (thigh) and 1.0 kg (shank) exoskeleton links lumped in.
  PlantParams p;
  LegParams leg;
  leg.thigh = LinkParams{9.0, 0.43, 0.19, 0.17};
  leg.shank = LinkParams{5.6, 0.43, 0.25, 0.16};
  p.legs = {leg, leg};
  p.gravity = 9.81;
  p.stiffness = Vec4::Constant(2.0);
  p.stiffness_width = 1.0;
  p.damping = Vec4::Constant(0.5);
  p.rest = Vec4::Zero();
  p.disturbance = DisturbanceSpec{};
  p.stop_lower = Vec4(-20.0 * kDeg, 0.0, -20.0 * kDeg, 0.0);
  p.stop_upper = Vec4(60.0 * kDeg, 110.0 * kDeg, 60.0 * kDeg, 110.0 * kDeg);
  return p;
}

void PlantParams::validate() const {
  check_link(legs[0].thigh, "left thigh");
  check_link(legs[0].shank, "left shank");
  check_link(legs[1].thigh, "right thigh");
  check_link(legs[1].shank, "right shank");
  if (!(gravity >= 0.0)) throw InvalidParameter("gravity must be nonnegative");
  if ((stiffness.array() < 0.0).any() || (damping.array() < 0.0).any())
    throw InvalidParameter("stiffness and damping must be nonnegative");
  if (!(stiffness_width > 0.0)) throw InvalidParameter("stiffness width must be positive");
  if ((disturbance.amplitude.array() < 0.0).any())
    throw InvalidParameter("disturbance amplitude must be nonnegative");
  if (!disturbance.frequency.allFinite() || !disturbance.phase.allFinite() || !rest.allFinite())
    throw InvalidParameter("non-finite plant parameter");
  if (!stop_lower.allFinite() || !stop_upper.allFinite() ||
      (stop_lower.array() > stop_upper.array()).any())
    throw InvalidParameter("mechanical stops must satisfy lower <= upper");
}

Mat4 mass_matrix(const Vec4& q, const PlantParams& p) {
  require_finite(q, "joint angles");
  Mat4 M = Mat4::Zero();
  for (int side = 0; side < 2; ++side) {
    const LegTerms k = leg_terms(p.legs[side], p.gravity);
    const int hip = 2 * side;
    const double c = std::cos(q[hip + 1]);
    M(hip, hip) = k.m11_const + 2.0 * k.h * c;
    M(hip, hip + 1) = -(k.m22 + k.h * c);
    M(hip + 1, hip) = M(hip, hip + 1);
    M(hip + 1, hip + 1) = k.m22;
  }
  return M;
}

std::array<Mat4, kJoints> mass_matrix_partials(const Vec4& q, const PlantParams& p) {
  require_finite(q, "joint angles");
  std::array<Mat4, kJoints> dM;
  for (auto& m : dM) m.setZero();
  // Only the knee angle enters M of its own leg.
  for (int side = 0; side < 2; ++side) {
    const LegTerms k = leg_terms(p.legs[side], p.gravity);
    const int hip = 2 * side;
    const double s = std::sin(q[hip + 1]);
    Mat4& d = dM[hip + 1];
    d(hip, hip) = -2.0 * k.h * s;
    d(hip, hip + 1) = k.h * s;
    d(hip + 1, hip) = k.h * s;
  }
  return dM;
}

Mat4 mass_matrix_rate(const Vec4& q, const Vec4& qdot, const PlantParams& p) {
  require_finite(qdot, "joint velocities");
  const auto dM = mass_matrix_partials(q, p);
  Mat4 out = Mat4::Zero();
  for (int i = 0; i < kJoints; ++i) out += dM[i] * qdot[i];
  return out;
}

Mat4 coriolis_matrix(const Vec4& q, const Vec4& qdot, const PlantParams& p) {
  require_finite(qdot, "joint velocities");
  const auto dM = mass_matrix_partials(q, p);
  // C_kj = Σ_i ½(∂M_kj/∂q_i + ∂M_ki/∂q_j − ∂M_ij/∂q_k) q̇_i
  Mat4 C = Mat4::Zero();
  for (int k = 0; k < kJoints; ++k) {
    for (int j = 0; j < kJoints; ++j) {
      double sum = 0.0;
      for (int i = 0; i < kJoints; ++i) {
        sum += 0.5 * (dM[i](k, j) + dM[j](k, i) - dM[k](i, j)) * qdot[i];
      }
      C(k, j) = sum;
    }
  }
  return C;
}

Vec4 gravity_vector(const Vec4& q, const PlantParams& p) {
  require_finite(q, "joint angles");
  Vec4 G;
  for (int side = 0; side < 2; ++side) {
    const LegTerms k = leg_terms(p.legs[side], p.gravity);
    const int hip = 2 * side;
    const double shank_abs = q[hip] - q[hip + 1];
    G[hip] = k.g_thigh * std::sin(q[hip]) + k.g_shank * std::sin(shank_abs);
    G[hip + 1] = -k.g_shank * std::sin(shank_abs);
  }
  return G;
}

double potential_energy(const Vec4& q, const PlantParams& p) {
  require_finite(q, "joint angles");
  double U = 0.0;
  for (int side = 0; side < 2; ++side) {
    const LegTerms k = leg_terms(p.legs[side], p.gravity);
    const int hip = 2 * side;
    U += k.g_thigh * (1.0 - std::cos(q[hip])) +
         k.g_shank * (1.0 - std::cos(q[hip] - q[hip + 1]));
  }
  return U;
}

double kinetic_energy(const Vec4& q, const Vec4& qdot, const PlantParams& p) {
  return 0.5 * qdot.dot(mass_matrix(q, p) * qdot);
}

Vec4 viscoelastic(const Vec4& q, const Vec4& qdot, const PlantParams& p) {
  require_finite(q, "joint angles");
  require_finite(qdot, "joint velocities");
  const double w = p.stiffness_width;
  Vec4 out;
  for (int j = 0; j < kJoints; ++j) {
    out[j] = p.stiffness[j] * w * std::tanh((q[j] - p.rest[j]) / w) + p.damping[j] * qdot[j];
  }
  return out;
}

Vec4 disturbance(double t, const PlantParams& p) {
  require_finite(t, "time");
  const DisturbanceSpec& d = p.disturbance;
  Vec4 out;
  for (int j = 0; j < kJoints; ++j) {
    out[j] = d.amplitude[j] * std::sin(2.0 * std::numbers::pi * d.frequency[j] * t + d.phase[j]);
  }
  return out;
}

double disturbance_bound(const PlantParams& p) { return p.disturbance.amplitude.norm(); }

Vec4 forward_dynamics(const ExoState& s, const Vec4& tau_e, const PlantParams& p,
                      const JointMask& clamped) {
  require_finite(tau_e, "exoskeleton torque");
  require_finite(s.q, "joint angles");
  require_finite(s.qdot, "joint velocities");

  const Mat4 M = mass_matrix(s.q, p);
  const Vec4 rhs = tau_e - coriolis_matrix(s.q, s.qdot, p) * s.qdot - gravity_vector(s.q, p) -
                   viscoelastic(s.q, s.qdot, p) - disturbance(s.t, p);

  std::array<int, kJoints> free{};
  int n = 0;
  for (int j = 0; j < kJoints; ++j) {
    if (!clamped[j]) free[n++] = j;
  }
  Vec4 qddot = Vec4::Zero();
  if (n == 0) return qddot;

  Eigen::MatrixXd Mf(n, n);
  Eigen::VectorXd bf(n);
  for (int a = 0; a < n; ++a) {
    bf[a] = rhs[free[a]];
    for (int b = 0; b < n; ++b) Mf(a, b) = M(free[a], free[b]);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(Mf);
  const auto diag = ldlt.vectorD();
  const double dmax = diag.cwiseAbs().maxCoeff();
  const double dmin = diag.minCoeff();
  if (ldlt.info() != Eigen::Success || !(dmin > 0.0) || dmax / dmin > 1e12) {
    throw SingularityError("inertia matrix is numerically singular");
  }
  const Eigen::VectorXd xf = ldlt.solve(bf);
  for (int a = 0; a < n; ++a) qddot[free[a]] = xf[a];
  return qddot;
}

}  // namespace exo
