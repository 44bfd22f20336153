#include "exo/monitors.hpp"

#include <algorithm>
#include <cmath>

namespace exo {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kWithheld: return "withheld";
    case Verdict::kDisabled: return "disabled";
  }
  return "unknown";
}

bool CertificateReport::any_failure() const {
  return guub.verdict == Verdict::kFail || sync.verdict == Verdict::kFail ||
         dwell.verdict == Verdict::kFail;
}

double guub_envelope(double V0, double delta, double epsilon, double t) {
  const double decay = std::exp(-delta * t);
  return V0 * decay + (epsilon / delta) * (1.0 - decay);
}

double sync_envelope(double z2_anchor, double a_rho, double b_rho, double lambda_rho,
                     double elapsed) {
  return std::sqrt(b_rho / a_rho) * std::exp(-0.5 * lambda_rho * elapsed) * z2_anchor;
}

GuubResult monitor_guub(const std::vector<TickRecord>& ticks, const DerivedConstants& c,
                        const Scenario& sc) {
  GuubResult out;
  out.delta = c.delta;
  out.asymptote = sc.joint.epsilon / c.delta;
  out.ultimate_bound = c.ultimate_bound;
  if (!sc.monitors.guub) return out;
  if (ticks.empty()) {
    out.verdict = Verdict::kWithheld;
    return out;
  }

  const StateBox domain = sc.bound_domain();
  const double V0 = ticks.front().V;
  const double t0 = ticks.front().t;
  const double T = ticks.back().t;
  const double steady_from = t0 + 0.75 * (T - t0);
  bool envelope_ok = true;
  out.max_violation = -std::numeric_limits<double>::infinity();

  for (const TickRecord& k : ticks) {
    if (k.chi_norm > k.rho_value * (1.0 + 1e-12)) out.rho_dominates = false;
    if (!domain.contains(k.q, 1e-9)) out.in_domain = false;
    if (k.saturated) out.saturation_free = false;

    const double env = guub_envelope(V0, c.delta, sc.joint.epsilon, k.t - t0);
    const double rel = env > 0.0 ? (k.V - env) / env : (k.V > 0.0 ? 1.0 : 0.0);
    if (rel > out.max_violation) {
      out.max_violation = rel;
      out.worst_time = k.t;
    }
    if (k.V > (1.0 + kEnvelopeTolerance) * env + kEnvelopeFloor) envelope_ok = false;
    if (k.t >= steady_from) out.steady_state_max_xi = std::max(out.steady_state_max_xi, k.xi.norm());
  }
  out.steady_state_ok =
      out.steady_state_max_xi <= (1.0 + kEnvelopeTolerance) * out.ultimate_bound;

  if (!out.rho_dominates || !out.in_domain || !out.saturation_free) {
    out.verdict = Verdict::kWithheld;
  } else {
    out.verdict = envelope_ok && out.steady_state_ok ? Verdict::kPass : Verdict::kFail;
  }
  return out;
}

SyncExponentialResult monitor_sync_exponential(const std::vector<TickRecord>& ticks,
                                               const SwitchLog& switches,
                                               const DerivedConstants& c, const Scenario& sc) {
  SyncExponentialResult out;
  out.gain_conditions = c.gains.passed();
  out.boundary_layer = sc.boundary_layer;
  out.lambda_rho = c.lambda_rho;
  out.overshoot = std::sqrt(c.b_rho / c.a_rho);
  if (!sc.monitors.sync) return out;
  if (ticks.empty()) {
    out.verdict = Verdict::kWithheld;
    return out;
  }

  bool envelope_ok = true;
  out.max_violation = -std::numeric_limits<double>::infinity();

  for (int j = 0; j < kJoints; ++j) {
    std::vector<double> times;
    for (const SwitchEvent& ev : switches) {
      if (ev.joint == j) times.push_back(ev.time);
    }
    std::size_t next_switch = 0;
    double anchor_t = ticks.front().t;
    double anchor_z2 = std::hypot(ticks.front().e[j], ticks.front().r[j]);
    ++out.intervals;

    for (const TickRecord& k : ticks) {
      const double z2 = std::hypot(k.e[j], k.r[j]);
      if (next_switch < times.size() && k.t >= times[next_switch]) {
        while (next_switch < times.size() && k.t >= times[next_switch]) ++next_switch;
        anchor_t = k.t;
        anchor_z2 = z2;
        ++out.intervals;
      }
      if (std::abs(k.chi_sync[j]) > (c.chi.c1 + c.chi.c2 * z2) * (1.0 + 1e-12))
        out.chi_dominates = false;

      if (sc.boundary_layer > 0.0 && std::abs(k.r[j]) <= sc.boundary_layer) {
        ++out.skipped_ticks;
        continue;
      }
      ++out.checked_ticks;
      const double bound = sync_envelope(anchor_z2, c.a_rho, c.b_rho, c.lambda_rho, k.t - anchor_t);
      const double rel = bound > 0.0 ? (z2 - bound) / bound : (z2 > kEnvelopeFloor ? 1.0 : 0.0);
      if (rel > out.max_violation) {
        out.max_violation = rel;
        out.worst_time = k.t;
        out.worst_joint = j;
      }
      if (z2 > (1.0 + kEnvelopeTolerance) * bound + kEnvelopeFloor) envelope_ok = false;
    }
  }
  if (out.checked_ticks == 0) out.max_violation = 0.0;

  if (!out.gain_conditions || !out.chi_dominates) {
    out.verdict = Verdict::kWithheld;
  } else {
    out.verdict = envelope_ok ? Verdict::kPass : Verdict::kFail;
  }
  return out;
}

DwellResult monitor_dwell(const SwitchLog& switches, const std::vector<DeferralEvent>& deferrals,
                          const DerivedConstants& c, double T) {
  DwellResult out;
  out.tau_a = c.dwell.tau_a;
  out.tau_a_min = c.dwell.min_tau_a();
  out.mu = c.dwell.mu;
  out.lambda_rho = c.dwell.lambda_rho;
  out.deferrals = static_cast<int>(deferrals.size());
  out.detail = dwell_certificate(switches, c.dwell, T);
  out.hold_violations = hold_violations(switches, c.dwell.min_hold);
  out.verdict = out.detail.passed() && out.hold_violations == 0 ? Verdict::kPass : Verdict::kFail;
  return out;
}

}  // namespace exo
