#include "exo/switch_allocator.hpp"

#include <algorithm>
#include <cmath>

namespace exo {

double DwellConfig::min_tau_a() const { return std::log(mu) / lambda_rho; }

void DwellConfig::validate() const {
  if (!(N0 >= 1.0)) throw InvalidParameter("dwell N0 must be >= 1");
  if (!(tau_a > 0.0) || !std::isfinite(tau_a)) throw InvalidParameter("dwell tau_a must be positive");
  if (!(mu >= 1.0)) throw InvalidParameter("dwell mu must be >= 1");
  if (!(lambda_rho > 0.0)) throw InvalidParameter("dwell lambda_rho must be positive");
  if (!(min_hold >= 0.0)) throw InvalidParameter("dwell min_hold must be nonnegative");
  if (min_hold > 0.0 && min_hold < min_tau_a()) {
    throw InvalidParameter("dwell min_hold must be at least ln(mu)/lambda_rho when enforced");
  }
}

AllocationState AllocationState::initial(const Vec4& u0) {
  AllocationState s;
  for (int j = 0; j < kJoints; ++j) {
    s.lead[j] = u0[j] < 0.0 ? MotorRole::kExtension : MotorRole::kFlexion;
  }
  return s;
}

Allocation allocate(const Vec4& u, AllocationState state, double t, const DwellConfig& cfg) {
  require_finite(u, "joint control input");
  require_finite(t, "time");
  if (!(t > state.last_time)) throw InvalidInput("allocation time must increase");
  state.last_time = t;

  for (int j = 0; j < kJoints; ++j) {
    if (u[j] == 0.0) continue;
    const MotorRole wanted = u[j] > 0.0 ? MotorRole::kFlexion : MotorRole::kExtension;
    if (wanted == state.lead[j]) continue;
    if (cfg.min_hold > 0.0 && t - state.last_switch[j] < cfg.min_hold) {
      state.deferrals.push_back({t, j});
      continue;
    }
    state.lead[j] = wanted;
    state.last_switch[j] = t;
    state.log.push_back({t, j, wanted});
  }
  return Allocation{SwitchSignals::from_leads(state.lead), std::move(state)};
}

int count_switches(const SwitchLog& log, double t, double T, std::optional<int> joint) {
  return static_cast<int>(std::count_if(log.begin(), log.end(), [&](const SwitchEvent& ev) {
    return ev.time > t && ev.time <= T && (!joint || ev.joint == *joint);
  }));
}

namespace {

// Worst-case margin for one joint's sorted switch times.
DwellVerdict dwell_for_times(const std::vector<double>& times, const DwellConfig& cfg, double T) {
  DwellVerdict v;
  v.switches = static_cast<int>(times.size());
  v.margin = cfg.N0;
  v.worst_t = 0.0;
  v.worst_T = T;

  // Left ends: 0 and just before each switch. Right ends: each switch and T.
  const int n = static_cast<int>(times.size());
  auto consider = [&](double left, double right, int count) {
    const double m = cfg.N0 + (right - left) / cfg.tau_a - count;
    if (m < v.margin) {
      v.margin = m;
      v.worst_t = left;
      v.worst_T = right;
    }
  };
  if (n > 0) consider(0.0, T, n);
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) consider(times[i], times[k], k - i + 1);
    consider(times[i], T, n - i);
  }
  v.counting_ok = v.margin >= 0.0;
  return v;
}

}  // namespace

DwellVerdict dwell_certificate(const SwitchLog& log, const DwellConfig& cfg, double T,
                               std::optional<int> joint) {
  if (!(cfg.tau_a > 0.0)) throw InvalidInput("tau_a must be positive");
  DwellVerdict worst;
  worst.margin = cfg.N0;
  worst.worst_T = T;
  int total = 0;
  bool first = true;
  for (int j = 0; j < kJoints; ++j) {
    if (joint && *joint != j) continue;
    std::vector<double> times;
    for (const SwitchEvent& ev : log) {
      if (ev.joint == j && ev.time <= T) times.push_back(ev.time);
    }
    std::sort(times.begin(), times.end());
    total += static_cast<int>(times.size());
    const DwellVerdict v = dwell_for_times(times, cfg, T);
    if (first || v.margin < worst.margin) {
      worst = v;
      first = false;
    }
  }
  worst.switches = total;
  worst.counting_ok = worst.margin >= 0.0;
  worst.tau_a_ok = cfg.tau_a >= cfg.min_tau_a();
  return worst;
}

double decay_envelope(double V0, double N0, double mu, double lambda_rho, double tau_a,
                      double T) {
  const double ln_mu = std::log(mu);
  const double switching_rate = ln_mu == 0.0 ? 0.0 : ln_mu / tau_a;
  return std::exp((N0 - 1.0) * ln_mu) * std::exp((switching_rate - lambda_rho) * T) * V0;
}

int hold_violations(const SwitchLog& log, double min_hold) {
  if (min_hold <= 0.0) return 0;
  int violations = 0;
  std::array<double, kJoints> last{};
  std::array<bool, kJoints> seen{};
  for (const SwitchEvent& ev : log) {
    if (seen[ev.joint] && ev.time - last[ev.joint] < min_hold) ++violations;
    seen[ev.joint] = true;
    last[ev.joint] = ev.time;
  }
  return violations;
}

}  // namespace exo
