#pragma once

// Lead/follower allocation from the sign of the joint input, switch logging,
// and the average dwell time certificate
//
//   N(T, t) ≤ N0 + (T − t)/τ_a,   τ_a ≥ ln(μ)/λ_ϱ.

#include "exo/motor.hpp"

#include <array>
#include <limits>
#include <optional>
#include <vector>

namespace exo {

struct SwitchEvent {
  double time = 0.0;
  int joint = 0;
  MotorRole new_lead = MotorRole::kFlexion;

  bool operator==(const SwitchEvent&) const = default;
};

/// A sign change that was not realized because min_hold had not elapsed.
struct DeferralEvent {
  double time = 0.0;
  int joint = 0;
};

using SwitchLog = std::vector<SwitchEvent>;

struct DwellConfig {
  double N0 = 1.0;
  double tau_a = 1.0;       ///< [s]
  double mu = 1.0;          ///< b_ϱ / a_ϱ
  double lambda_rho = 1.0;  ///< [1/s]
  double min_hold = 0.0;    ///< [s]; 0 disables enforcement

  double min_tau_a() const;  ///< ln(μ)/λ_ϱ
  void validate() const;
};

struct AllocationState {
  std::array<MotorRole, kJoints> lead{MotorRole::kFlexion, MotorRole::kFlexion,
                                      MotorRole::kFlexion, MotorRole::kFlexion};
  std::array<double, kJoints> last_switch{-std::numeric_limits<double>::infinity(),
                                          -std::numeric_limits<double>::infinity(),
                                          -std::numeric_limits<double>::infinity(),
                                          -std::numeric_limits<double>::infinity()};
  double last_time = -std::numeric_limits<double>::infinity();
  SwitchLog log;
  std::vector<DeferralEvent> deferrals;

  /// Leads chosen from the sign of the first input (zero → flexion), no log entry.
  static AllocationState initial(const Vec4& u0);
};

struct Allocation {
  SwitchSignals signals;
  AllocationState state;
};

/// u_j > 0 → flexion leads, u_j < 0 → extension leads, u_j = 0 → hold.
/// Throws InvalidInput unless t is strictly later than the previous call.
Allocation allocate(const Vec4& u, AllocationState state, double t, const DwellConfig& cfg);

/// Role changes with time in (t, T]; all joints or one joint.
int count_switches(const SwitchLog& log, double t, double T,
                   std::optional<int> joint = std::nullopt);

struct DwellVerdict {
  bool counting_ok = true;   ///< N(T,t) ≤ N0 + (T−t)/τ_a on every checked interval
  bool tau_a_ok = true;      ///< τ_a ≥ ln(μ)/λ_ϱ
  double margin = 0.0;       ///< min over intervals of N0 + (T−t)/τ_a − N(T,t)
  double worst_t = 0.0;
  double worst_T = 0.0;
  int switches = 0;

  bool passed() const { return counting_ok && tau_a_ok; }
};

/**
 * Checks the counting condition for every interval whose left end sits just
 * before a switch (or at 0) and whose right end is a switch time (or T).
 * The check runs per joint pair; a joint filter restricts it to one pair,
 * otherwise the worst pair is reported.
 */
DwellVerdict dwell_certificate(const SwitchLog& log, const DwellConfig& cfg, double T,
                               std::optional<int> joint = std::nullopt);

/// exp((N0−1)·ln μ) · exp((ln μ/τ_a − λ_ϱ)·T) · V0
double decay_envelope(double V0, double N0, double mu, double lambda_rho, double tau_a, double T);

/// Realized switches of one joint closer together than min_hold.
int hold_violations(const SwitchLog& log, double min_hold);

}  // namespace exo
