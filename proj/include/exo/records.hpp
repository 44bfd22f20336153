#pragma once

#include "exo/scenario.hpp"
#include "exo/switch_allocator.hpp"

#include <array>
#include <vector>

namespace exo {

/// Quantities derived once from a scenario before integration starts.
struct DerivedConstants {
  BoundConstants bounds;
  RhoCoeffs rho;
  TrajectoryEnvelope trajectory;
  LeadEnvelope lead;
  ChiBounds chi;
  GainVerdict gains;

  double a = 0.0, b = 0.0;  ///< a‖z1‖² ≤ V ≤ b‖z1‖²
  double delta = 0.0;       ///< (1/b)·min{α, B_lower·k1}
  double ultimate_bound = 0.0;  ///< √(ε/(δ·a))

  double a_rho = 0.0, b_rho = 0.0;
  double lambda_rho = 0.0;  ///< (1/b_ϱ)·min{β, B_lower·k2}
  DwellConfig dwell;        ///< μ, λ_ϱ, τ_a, N0, min_hold resolved
};

DerivedConstants derive_constants(const Scenario& sc);

struct TickRecord {
  double t = 0.0;
  Vec4 q, qdot, q_d, qdot_d;
  Vec4 u;              ///< joint input actually applied
  bool saturated = false;
  std::array<MotorState, kMotors> motors{};
  std::array<double, kMotors> u_motor{};  ///< lead: u_j, follower: sync input
  std::array<int, kMotors> sigma{};
  Vec4 xi, eta;
  Vec4 e, r;             ///< per joint pair
  double V = 0.0;        ///< ½ξᵀξ + ½ηᵀMη
  Vec4 V_sync;           ///< ½e² + ½J_follower·r²
  std::array<MotorRole, kJoints> lead{};
  double chi_norm = 0.0;  ///< ‖χ‖
  double rho_value = 0.0; ///< ρ(‖z1‖)
  Vec4 chi_sync;          ///< χ_ϱ of each pair's follower
};

struct SimulationLog {
  std::vector<TickRecord> ticks;
  SwitchLog switches;
  std::vector<DeferralEvent> deferrals;
};

}  // namespace exo
