#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace exo {

inline constexpr int kJoints = 4;
inline constexpr int kMotors = 8;

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using JointMask = std::array<bool, kJoints>;

/// Joint ordering inside every ℝ⁴ quantity.
enum Joint : int { kLeftHip = 0, kLeftKnee = 1, kRightHip = 2, kRightKnee = 3 };

const char* joint_name(int joint);

// ---------------------------------------------------------------------------
// Error types. Everything thrown by the library derives from exo::Error.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise malformed arguments.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Physical parameters outside their admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Structural invariant broken (e.g. two lead motors on one joint).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Numerically singular inertia matrix. Unreachable for valid parameters.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Configuration file problems: unknown keys, bad values, inconsistent settings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline bool all_finite(const Vec4& v) { return v.allFinite(); }

void require_finite(const Vec4& v, const char* what);
void require_finite(double v, const char* what);

}  // namespace exo
