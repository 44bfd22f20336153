#pragma once

// Shared helpers for the test suites: seeded sampling and small fixtures.

#include "exo/dynamics.hpp"

#include <cstdint>
#include <random>

namespace exo::test {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vec4 vec(double lo, double hi) {
    Vec4 v;
    for (int i = 0; i < kJoints; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vec4 in_box(const Vec4& lo, const Vec4& hi) {
    Vec4 v;
    for (int i = 0; i < kJoints; ++i) v[i] = lo[i] == hi[i] ? lo[i] : uniform(lo[i], hi[i]);
    return v;
  }

  /// Uniform direction scaled to a norm drawn from [0, radius].
  Vec4 ball(double radius) {
    Vec4 v;
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < kJoints; ++i) v[i] = n(rng_);
    const double norm = v.norm();
    if (norm == 0.0) return Vec4::Zero();
    return v / norm * uniform(0.0, radius);
  }

 private:
  std::mt19937_64 rng_;
};

/// Plant whose only forces are inertial and gravitational.
inline PlantParams conservative_plant() {
  PlantParams p = PlantParams::anthropometric();
  p.stiffness.setZero();
  p.damping.setZero();
  p.disturbance.amplitude.setZero();
  return p;
}

}  // namespace exo::test
