// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include "exo/bounds.hpp"
#include "exo/integrator.hpp"
#include "exo/simulation.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace exo;
using exo::test::Sampler;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double spectral_norm(const Mat4& A) { return Eigen::JacobiSVD<Mat4>(A).singularValues()[0]; }

// ---------------------------------------------------------------------------

void skew_symmetry(Outcome& o) {
  const auto start = Clock::now();
  const PlantParams p = PlantParams::anthropometric();
  Sampler s(101);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec4 q = s.in_box(p.stop_lower, p.stop_upper);
    const Vec4 v = s.vec(-6, 6);
    const Vec4 xi = s.vec(-1, 1);
    const Mat4 Mdot = (mass_matrix(q + h * v, p) - mass_matrix(q - h * v, p)) / (2 * h);
    const double form = std::abs(xi.dot((0.5 * Mdot - coriolis_matrix(q, v, p)) * xi));
    worst = std::max(worst, form / (xi.squaredNorm() * (1.0 + v.norm())));
  }
  const double elapsed = seconds_since(start);
  o.require(worst <= 1e-4, "skew residual");
  o.require(elapsed < 5.0, "runtime");
  o.detail << "max normalized residual " << worst << ", " << elapsed << " s";
}

void property_bounds(Outcome& o) {
  const auto start = Clock::now();
  const Scenario sc = make_preset("nominal");
  const MotorSet motors = make_motors(sc.motors, sc.motor_limits);
  const StateBox box = sc.bound_domain();
  BoundOptions opts{sc.bounds.grid_points, sc.bounds.samples, sc.bounds.margin, sc.seed};
  const BoundConstants b = estimate_bounds(sc.plant, box, motors, opts);

  // Disjoint validation set: different generator and seed from the estimator's.
  Sampler s(0xC0FFEE);
  int violations = 0;
  auto count = [&](bool ok) { violations += ok ? 0 : 1; };
  for (int i = 0; i < 10000; ++i) {
    const Vec4 q = s.in_box(box.q_lower, box.q_upper);
    const Vec4 v = s.ball(box.velocity_limit);
    const double t = s.uniform(0, sc.duration);

    const Eigen::SelfAdjointEigenSolver<Mat4> eig(mass_matrix(q, sc.plant));
    count(eig.eigenvalues().minCoeff() >= b.c_m);                                         // 1
    count(eig.eigenvalues().maxCoeff() <= b.c_M);                                         // 1
    count(spectral_norm(coriolis_matrix(q, v, sc.plant)) <= b.c_c * v.norm() + 1e-12);    // 2
    count(gravity_vector(q, sc.plant).norm() <= b.c_g);                                   // 3
    count(viscoelastic(q, v, sc.plant).norm() <= b.c_p1 + b.c_p2 * v.norm());             // 4
    count(disturbance(t, sc.plant).norm() <= b.d_exo);                                    // 5

    std::array<MotorRole, kJoints> leads;
    for (auto& r : leads) r = s.uniform(0, 1) < 0.5 ? MotorRole::kFlexion : MotorRole::kExtension;
    const Vec4 xi = s.vec(-2, 2);
    const double form = xi.dot(lumped_effectiveness(SwitchSignals::from_leads(leads), motors) * xi);
    count(form >= b.B_lower * xi.squaredNorm() - 1e-15);                                  // 6
    count(form <= b.B_upper * xi.squaredNorm() + 1e-15);                                  // 6

    const MotorParams& m = motors[i % kMotors];
    count(m.inertia() >= b.c_j && m.inertia() <= b.c_J);                                  // 8
    count(m.damping() >= b.c_d && m.damping() <= b.c_D);                                  // 8
    const double dn = m.disturbance().at(t);
    count(dn >= b.c_de && dn <= b.c_De);                                                  // 8
    const double x = s.uniform(-2, 2);
    count(x * m.effectiveness() * x >= b.B_lower * x * x);                                // 9
    count(x * m.effectiveness() * x <= b.B_upper * x * x);                                // 9
  }
  const double elapsed = seconds_since(start);
  o.require(violations == 0, "bound violations");
  o.require(elapsed < 30.0, "runtime");
  o.detail << violations << " violations on 10000 held-out samples, " << elapsed << " s";
}

// Envelope check recomputed here from the log, independent of the monitor.
double guub_worst(const SimulationResult& r) {
  const DerivedConstants& c = r.constants;
  const double V0 = r.log.ticks.front().V;
  double worst = -1e300;
  for (const TickRecord& k : r.log.ticks) {
    const double env = V0 * std::exp(-c.delta * k.t) +
                       (r.scenario.joint.epsilon / c.delta) * (1.0 - std::exp(-c.delta * k.t));
    worst = std::max(worst, k.V - (1.0 + kEnvelopeTolerance) * env - kEnvelopeFloor);
  }
  return worst;
}

void guub(Outcome& o) {
  for (const char* name : {"nominal", "perturbed"}) {
    const Scenario sc = make_preset(name);
    const auto start = Clock::now();
    const SimulationResult r = run(sc);
    const double elapsed = seconds_since(start);
    const DerivedConstants& c = r.constants;

    const double b = std::max(0.5, 0.5 * c.bounds.c_M);
    const double delta = std::min(sc.joint.alpha, c.bounds.B_lower * sc.joint.k1) / b;
    const double a = std::min(0.5, 0.5 * c.bounds.c_m);
    const double ultimate = std::sqrt(sc.joint.epsilon / (delta * a));

    double steady = 0.0;
    for (const TickRecord& k : r.log.ticks)
      if (k.t >= 0.75 * sc.duration) steady = std::max(steady, k.xi.norm());

    const std::string tag = std::string(name) + " ";
    o.require(std::abs(delta - c.delta) <= 1e-15 * delta, tag + "delta");
    o.require(r.report.guub.verdict == Verdict::kPass, tag + "monitor verdict");
    o.require(guub_worst(r) <= 0.0, tag + "envelope");
    o.require(steady <= ultimate, tag + "steady state");
    o.require(elapsed < 60.0, tag + "runtime");
    o.detail << name << ": max V excess " << r.report.guub.max_violation << ", steady |xi| " << steady
             << " <= " << ultimate << ", " << elapsed << " s; ";
  }
}

// Independent per-joint interval check of the synchronization envelope.
struct SyncCheck {
  int checked = 0;
  double worst = -1e300;
};

SyncCheck sync_worst(const SimulationResult& r) {
  const DerivedConstants& c = r.constants;
  const double phi = r.scenario.boundary_layer;
  const double overshoot = std::sqrt(c.b_rho / c.a_rho);
  SyncCheck out;
  for (int j = 0; j < kJoints; ++j) {
    double anchor_t = 0.0, anchor_z = 0.0;
    for (std::size_t i = 0; i < r.log.ticks.size(); ++i) {
      const TickRecord& k = r.log.ticks[i];
      const double z = std::hypot(k.e[j], k.r[j]);
      if (i == 0 || k.lead[j] != r.log.ticks[i - 1].lead[j]) {
        anchor_t = k.t;
        anchor_z = z;
      }
      if (phi > 0.0 && std::abs(k.r[j]) <= phi) continue;
      const double bound = overshoot * std::exp(-0.5 * c.lambda_rho * (k.t - anchor_t)) * anchor_z;
      out.worst = std::max(out.worst, z - (1.0 + kEnvelopeTolerance) * bound - kEnvelopeFloor);
      ++out.checked;
    }
  }
  return out;
}

void sync(Outcome& o) {
  {
    const SimulationResult r = run(make_preset("perturbed"));
    const SyncCheck chk = sync_worst(r);
    o.require(r.report.gains.passed(), "gain conditions");
    o.require(r.report.sync.verdict == Verdict::kPass, "monitor verdict");
    o.require(chk.checked > 0, "no ticks outside the boundary layer");
    o.require(chk.worst <= 0.0, "envelope");
    o.detail << "perturbed: " << r.report.sync.intervals << " intervals, " << chk.checked
             << " ticks checked, worst excess " << chk.worst << "; ";
  }
  {
    Scenario sc = make_preset("perturbed");
    const DerivedConstants c = derive_constants(sc);
    sc.sync.k3 = 0.5 * c.chi.c1 / c.bounds.B_lower;
    const SimulationResult r = run(sc);
    o.require(!r.report.gains.k3_ok, "negative case k3 flag");
    o.require(!r.report.sync.gain_conditions, "negative case hypothesis flag");
    o.require(r.report.sync.verdict == Verdict::kWithheld, "negative case withheld");
    o.detail << "k3 = " << sc.sync.k3 << " < c1/B_lower: " << verdict_name(r.report.sync.verdict);
  }
}

void dwell(Outcome& o) {
  {
    const SimulationResult r = run(make_preset("paper_v"));
    const DerivedConstants& c = r.constants;
    const double a_rho = std::min(0.5, 0.5 * c.bounds.c_j);
    const double b_rho = std::max(0.5, 0.5 * c.bounds.c_J);
    const double lambda = std::min(r.scenario.sync.beta, c.bounds.B_lower * r.scenario.sync.k2) / b_rho;
    const double tau_a = std::log(b_rho / a_rho) / lambda;
    o.require(std::abs(c.dwell.tau_a - tau_a) <= 1e-12 * tau_a, "tau_a");
    o.require(c.dwell.N0 == 1.0, "N0");

    // Every switch-delimited interval of every pair.
    const double T = r.scenario.duration;
    double margin = 1e300;
    for (int j = 0; j < kJoints; ++j) {
      std::vector<double> ends{0.0};
      for (const SwitchEvent& ev : r.log.switches)
        if (ev.joint == j) ends.push_back(ev.time);
      ends.push_back(T);
      for (std::size_t a = 0; a < ends.size(); ++a)
        for (std::size_t b = a + 1; b < ends.size(); ++b) {
          const double left = a == 0 ? 0.0 : std::nextafter(ends[a], 0.0);
          const int n = count_switches(r.log.switches, left, ends[b], j);
          margin = std::min(margin, 1.0 + (ends[b] - left) / tau_a - n);
        }
    }
    o.require(margin >= 0.0, "counting condition");
    o.require(r.report.dwell.verdict == Verdict::kPass, "paper_v monitor verdict");
    o.detail << "paper_v: tau_a " << tau_a << " s, " << r.log.switches.size() << " switches, margin "
             << margin << "; ";
  }
  {
    Scenario sc = make_preset("nominal");
    sc.dwell.min_hold = derive_constants(sc).dwell.min_tau_a();
    const SimulationResult r = run(sc);
    const int violations = hold_violations(r.log.switches, sc.dwell.min_hold);
    o.require(violations == 0, "hold violations");
    o.require(r.report.dwell.verdict == Verdict::kPass, "enforced monitor verdict");
    o.detail << "nominal with min_hold " << sc.dwell.min_hold << " s: " << r.log.switches.size()
             << " switches, " << r.log.deferrals.size() << " deferred, " << violations << " violations; ";
  }
  {
    bool exact = true;
    for (double T : {0.0, 0.25, 1.0, 7.5, 60.0})
      for (double lambda : {0.005, 2.0, 20.0})
        exact = exact && decay_envelope(1.3, 1.0, 1.0, lambda, 0.7, T) == 1.3 * std::exp(-lambda * T);
    o.require(exact, "mu = 1 decay");
    o.detail << "mu = 1 decay exact: " << (exact ? "yes" : "no");
  }
}

void integrator(Outcome& o) {
  const PlantParams p = test::conservative_plant();
  using State = Eigen::Matrix<double, 8, 1>;
  auto rhs = [&](double t, const State& x) {
    const ExoState s{x.head<4>(), x.tail<4>(), t};
    State dx;
    dx << s.qdot, forward_dynamics(s, Vec4::Zero(), p);
    return dx;
  };
  State x0;
  x0 << 0.6, 0.4, -0.3, 0.8, 0.5, -1.0, 0.3, 0.0;
  auto integrate = [&](double h, double T, const std::function<void(const State&)>& each) {
    State x = x0;
    const int n = static_cast<int>(std::lround(T / h));
    for (int k = 0; k < n; ++k) {
      x = rk4_step(rhs, x, k * h, h);
      if (each) each(x);
    }
    return x;
  };

  const double T = 2.0, h = 0.02;
  const State ref = integrate(h / 64, T, nullptr);
  const double e1 = (integrate(h, T, nullptr) - ref).norm();
  const double e2 = (integrate(h / 2, T, nullptr) - ref).norm();
  const double ratio = e1 / e2;
  o.require(ratio >= 12.0 && ratio <= 20.0, "Richardson ratio");

  auto energy = [&](const State& x) {
    return kinetic_energy(x.head<4>(), x.tail<4>(), p) + potential_energy(x.head<4>(), p);
  };
  const double E0 = energy(x0);
  double drift = 0.0;
  integrate(1e-3, 10.0, [&](const State& x) { drift = std::max(drift, std::abs(energy(x) - E0) / E0); });
  o.require(drift <= 1e-6, "energy drift");
  o.detail << "error ratio h/(h/2) " << ratio << ", relative energy drift " << drift << " over 10 s";
}

void reconstruction(Outcome& o) {
  const Scenario sc = make_preset("paper_v");
  SimulationResult r;
  try {
    r = run(sc);
  } catch (const DivergenceError& e) {
    o.require(false, "diverged");
    o.detail << e.what();
    return;
  }
  const double period = sc.trajectory[kLeftKnee].period;
  double early = 0.0, late = 0.0;
  for (const TickRecord& k : r.log.ticks) {
    if (k.t >= period && k.t <= 11 * period) early = std::max(early, k.xi.norm());
    if (k.t >= sc.duration - 10 * period) late = std::max(late, k.xi.norm());
  }
  o.require(late <= 1.1 * early, "secular growth");

  // |e| decays within each inter-switch interval of each pair.
  int intervals = 0, growing = 0;
  for (int j = 0; j < kJoints; ++j) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 1; i < r.log.ticks.size(); ++i)
      if (r.log.ticks[i].lead[j] != r.log.ticks[i - 1].lead[j]) starts.push_back(i);
    starts.push_back(r.log.ticks.size());
    for (std::size_t s = 0; s + 1 < starts.size(); ++s) {
      const std::size_t a = starts[s], b = starts[s + 1];
      const std::size_t tail = a + 3 * (b - a) / 4;
      double tail_max = 0.0;
      for (std::size_t i = tail; i < b; ++i) tail_max = std::max(tail_max, std::abs(r.log.ticks[i].e[j]));
      ++intervals;
      if (tail_max > std::max(std::abs(r.log.ticks[a].e[j]), 1e-3)) ++growing;
    }
  }
  o.require(growing == 0, "sync error decay");
  o.detail << "max |xi| periods 2-11 " << early << ", last 10 " << late << "; " << intervals
           << " intervals, " << growing << " without decay";
}

void arithmetic(Outcome& o) {
  struct Case {
    const char* name;
    double got, expected;
  };
  JointErrors je;
  je.eta = Vec4(1, 0, 0, 0);
  je.z1_norm = 1.0;
  const SyncGains g{0.01, 0.2, 0.0001, 30.0};
  DwellConfig cfg;
  cfg.mu = 4.0;
  cfg.lambda_rho = 2.0;
  // Hand values: 2 + 1/2; 0.01 + 0.2001; 0.005 + 0.20005; ln 2; 4³·e⁻⁶.
  const Case cases[] = {
      {"joint law", joint_control(je, JointGains{2.0, 2.0, 10.0}, RhoCoeffs{1, 0, 0})[0], 2.5},
      {"extension law", control_extension(SyncErrors{0.0, 1.0, 1.0}, g), 0.2101},
      {"flexion law", control_flexion(SyncErrors{0.0, -0.5, 0.5}, g), 0.20505},
      {"dwell time", cfg.min_tau_a(), 0.69314718055994530942},
      {"decay", decay_envelope(1.0, 1.0, 4.0, 2.0, 1.0, 3.0), 0.15864013930664694},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    const double err = std::abs(c.got - c.expected);
    worst = std::max(worst, err);
    o.require(err <= 1e-12, c.name);
  }
  o.detail << "5 oracles, max abs error " << worst;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    void (*body)(Outcome&);
  };
  const Criterion criteria[] = {
      {1, "skew-symmetry", skew_symmetry},
      {2, "property bounds", property_bounds},
      {3, "joint envelope", guub},
      {4, "sync exponential bound", sync},
      {5, "dwell time", dwell},
      {6, "integrator order and energy", integrator},
      {7, "left-knee reconstruction", reconstruction},
      {8, "arithmetic oracles", arithmetic},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += o.pass ? 0 : 1;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << c.title << ") "
              << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
