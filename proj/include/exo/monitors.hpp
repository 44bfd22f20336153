#pragma once

/**
 * @file monitors.hpp
 * @brief Runtime checks of the closed-loop certificates on a finished log.
 *
 * Each verdict is only claimed when its hypotheses held on every tick:
 *   - joint envelope   ‖χ‖ ≤ ρ(‖z1‖), q inside the bound domain, no saturation
 *   - sync envelope    gain conditions pass and |χ_ϱ| ≤ c1 + c2‖z2‖
 * otherwise the verdict is kWithheld.
 */

#include "exo/records.hpp"

#include <string>
#include <vector>

namespace exo {

enum class Verdict { kPass, kFail, kWithheld, kDisabled };

const char* verdict_name(Verdict v);

/// Relative slack allowed on both envelope checks.
inline constexpr double kEnvelopeTolerance = 0.02;
/// Absolute floor for envelopes anchored at exactly zero.
inline constexpr double kEnvelopeFloor = 1e-9;

struct GuubResult {
  Verdict verdict = Verdict::kDisabled;
  double max_violation = 0.0;  ///< max (V − env)/env
  double worst_time = 0.0;
  bool rho_dominates = true;
  bool in_domain = true;
  bool saturation_free = true;
  double delta = 0.0;
  double asymptote = 0.0;       ///< ε/δ
  double ultimate_bound = 0.0;  ///< √(ε/(δ·a))
  double steady_state_max_xi = 0.0;  ///< max ‖ξ‖ over the last quarter of the run
  bool steady_state_ok = true;
};

struct SyncExponentialResult {
  Verdict verdict = Verdict::kDisabled;
  double max_violation = 0.0;  ///< max (‖z2‖ − bound)/bound over checked ticks
  double worst_time = 0.0;
  int worst_joint = -1;
  int intervals = 0;
  int checked_ticks = 0;
  int skipped_ticks = 0;  ///< inside the boundary layer
  bool gain_conditions = false;
  bool chi_dominates = true;
  double boundary_layer = 0.0;
  double lambda_rho = 0.0;
  double overshoot = 0.0;  ///< √(b_ϱ/a_ϱ)
};

struct DwellResult {
  Verdict verdict = Verdict::kDisabled;
  DwellVerdict detail;
  double tau_a = 0.0;
  double tau_a_min = 0.0;
  double mu = 0.0;
  double lambda_rho = 0.0;
  int deferrals = 0;
  int hold_violations = 0;
};

struct CertificateReport {
  GuubResult guub;
  SyncExponentialResult sync;
  GainVerdict gains;
  ChiBounds chi;
  DwellResult dwell;
  std::vector<std::string> notes;

  bool any_failure() const;
};

/// V(t) ≤ V(0)e^{−δt} + (ε/δ)(1 − e^{−δt})
double guub_envelope(double V0, double delta, double epsilon, double t);

/// √(b_ϱ/a_ϱ)·exp(−λ_ϱ(t − t_ω)/2)·‖z2(t_ω)‖
double sync_envelope(double z2_anchor, double a_rho, double b_rho, double lambda_rho,
                     double elapsed);

GuubResult monitor_guub(const std::vector<TickRecord>& ticks, const DerivedConstants& c,
                        const Scenario& sc);

SyncExponentialResult monitor_sync_exponential(const std::vector<TickRecord>& ticks,
                                               const SwitchLog& switches,
                                               const DerivedConstants& c, const Scenario& sc);

DwellResult monitor_dwell(const SwitchLog& switches, const std::vector<DeferralEvent>& deferrals,
                          const DerivedConstants& c, double T);

}  // namespace exo
