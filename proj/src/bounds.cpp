#include "exo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace exo {

namespace {

double spectral_norm(const Mat4& A) {
  const Eigen::SelfAdjointEigenSolver<Mat4> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Vec4 stiffness_term(const Vec4& q, const PlantParams& p) {
  return viscoelastic(q, Vec4::Zero(), p);
}

struct Extremes {
  double eig_min = std::numeric_limits<double>::infinity();
  double eig_max = 0.0;
  double cc = 0.0;
  double g = 0.0;
  double p1 = 0.0;

  void visit(const Vec4& q, const PlantParams& p) {
    const Eigen::SelfAdjointEigenSolver<Mat4> es(mass_matrix(q, p), Eigen::EigenvaluesOnly);
    eig_min = std::min(eig_min, es.eigenvalues().minCoeff());
    eig_max = std::max(eig_max, es.eigenvalues().maxCoeff());
    cc = std::max(cc, coriolis_gain(q, p));
    g = std::max(g, gravity_vector(q, p).norm());
    p1 = std::max(p1, stiffness_term(q, p).norm());
  }
};

}  // namespace

void BoundConstants::validate() const {
  const double plant[] = {c_m, c_M, c_c, c_g, c_p1, c_p2, d_exo, c_j, c_J, c_D, B_lower, B_upper};
  for (double v : plant) {
    if (!(v >= 0.0)) throw InvariantViolation("bound constants must be nonnegative");
  }
  if (c_m > c_M || c_j > c_J || c_d > c_D || c_de > c_De || B_lower > B_upper) {
    throw InvariantViolation("bound constants must satisfy lower <= upper");
  }
}

StateBox StateBox::from_stops(const PlantParams& p, double velocity_limit) {
  return StateBox{p.stop_lower, p.stop_upper, velocity_limit};
}

bool StateBox::contains(const Vec4& q, double tol) const {
  return ((q.array() >= q_lower.array() - tol) && (q.array() <= q_upper.array() + tol)).all();
}

double coriolis_gain(const Vec4& q, const PlantParams& p) {
  double sum = 0.0;
  for (int i = 0; i < kJoints; ++i) {
    const double n = spectral_norm(coriolis_matrix(q, Vec4::Unit(i), p));
    sum += n * n;
  }
  return std::sqrt(sum);
}

BoundConstants estimate_bounds(const PlantParams& p, const StateBox& domain,
                               const BoundOptions& opts) {
  p.validate();
  if (!domain.q_lower.allFinite() || !domain.q_upper.allFinite() ||
      (domain.q_lower.array() > domain.q_upper.array()).any() ||
      !(domain.velocity_limit >= 0.0)) {
    throw InvalidInput("empty or malformed state domain");
  }
  if (opts.grid_points < 1 || opts.samples < 0 || !(opts.margin >= 0.0)) {
    throw InvalidInput("invalid bound estimation options");
  }

  Extremes ext;

  // Tensor grid; degenerate axes collapse to a single point.
  std::array<int, kJoints> counts{};
  for (int j = 0; j < kJoints; ++j) {
    counts[j] = domain.q_lower[j] == domain.q_upper[j] ? 1 : std::max(2, opts.grid_points);
  }
  std::array<int, kJoints> idx{};
  while (true) {
    Vec4 q;
    for (int j = 0; j < kJoints; ++j) {
      const double f = counts[j] == 1 ? 0.0 : static_cast<double>(idx[j]) / (counts[j] - 1);
      q[j] = domain.q_lower[j] + f * (domain.q_upper[j] - domain.q_lower[j]);
    }
    ext.visit(q, p);
    int j = 0;
    while (j < kJoints && ++idx[j] == counts[j]) idx[j++] = 0;
    if (j == kJoints) break;
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < opts.samples; ++s) {
    Vec4 q;
    for (int j = 0; j < kJoints; ++j) {
      q[j] = domain.q_lower[j] + unit(rng) * (domain.q_upper[j] - domain.q_lower[j]);
    }
    ext.visit(q, p);
  }

  const double up = 1.0 + opts.margin;
  BoundConstants b;
  b.c_m = ext.eig_min / up;
  b.c_M = ext.eig_max * up;
  b.c_c = ext.cc * up;
  b.c_g = ext.g * up;
  b.c_p1 = ext.p1 * up;
  b.c_p2 = p.damping.cwiseAbs().maxCoeff();
  b.d_exo = disturbance_bound(p);
  return b;
}

void fill_motor_bounds(BoundConstants& b, std::span<const MotorParams> motors) {
  if (motors.empty()) throw InvalidInput("no motors");
  const double inf = std::numeric_limits<double>::infinity();
  b.c_j = inf, b.c_J = -inf, b.c_d = inf, b.c_D = -inf;
  b.c_de = inf, b.c_De = -inf, b.B_lower = inf, b.B_upper = -inf;
  for (const MotorParams& m : motors) {
    b.c_j = std::min(b.c_j, m.inertia());
    b.c_J = std::max(b.c_J, m.inertia());
    b.c_d = std::min(b.c_d, m.damping());
    b.c_D = std::max(b.c_D, m.damping());
    b.c_de = std::min(b.c_de, m.disturbance().lower());
    b.c_De = std::max(b.c_De, m.disturbance().upper());
    b.B_lower = std::min(b.B_lower, m.effectiveness());
    b.B_upper = std::max(b.B_upper, m.effectiveness());
  }
}

BoundConstants estimate_bounds(const PlantParams& p, const StateBox& domain,
                               std::span<const MotorParams> motors, const BoundOptions& opts) {
  BoundConstants b = estimate_bounds(p, domain, opts);
  fill_motor_bounds(b, motors);
  b.validate();
  return b;
}

}  // namespace exo
