#pragma once

#include <Eigen/Dense>

namespace exo {

/// Classical fixed-step RK4: x(t+h) from x(t) for ẋ = f(t, x).
template <typename Vector, typename Rhs>
Vector rk4_step(const Rhs& f, const Vector& x, double t, double h) {
  const Vector k1 = f(t, x);
  const Vector k2 = f(t + 0.5 * h, Vector(x + (0.5 * h) * k1));
  const Vector k3 = f(t + 0.5 * h, Vector(x + (0.5 * h) * k2));
  const Vector k4 = f(t + h, Vector(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace exo
