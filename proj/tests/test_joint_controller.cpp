#include "exo/joint_controller.hpp"
#include "exo/simulation.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace exo;

TEST_CASE("joint errors") {
  SUBCASE("perfect tracking") {
    const Vec4 q(0.1, 0.2, 0.3, 0.4), v(1, -1, 0.5, 0);
    const JointErrors e = joint_errors(q, v, q, v, 10.0);
    CHECK(e.xi.isZero(0.0));
    CHECK(e.eta.isZero(0.0));
    CHECK(e.z1_norm == 0.0);
  }

  SUBCASE("position error only") {
    const JointErrors e = joint_errors(Vec4::Zero(), Vec4::Zero(), Vec4(0.1, 0, 0, 0), Vec4::Zero(), 10.0);
    CHECK(e.eta[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.eta.tail<3>().isZero(0.0));
  }

  SUBCASE("stacked norm") {
    test::Sampler s(31);
    for (int i = 0; i < 100; ++i) {
      const JointErrors e = joint_errors(s.vec(-1, 1), s.vec(-2, 2), s.vec(-1, 1), s.vec(-2, 2), 5.0);
      CHECK(e.z1_norm * e.z1_norm ==
            doctest::Approx(e.xi.squaredNorm() + e.eta.squaredNorm()).epsilon(1e-14));
    }
  }

  CHECK_THROWS_AS(joint_errors(Vec4(INFINITY, 0, 0, 0), Vec4::Zero(), Vec4::Zero(), Vec4::Zero(), 1.0),
                  InvalidInput);
}

TEST_CASE("robust gain polynomial") {
  CHECK(rho(0.0, RhoCoeffs{3.0, 2.0, 1.0}) == 3.0);
  CHECK(rho(2.0, RhoCoeffs{1.0, 2.0, 0.5}) == 7.0);
}

TEST_CASE("joint control law") {
  const JointGains g{2.0, 2.0, 10.0};

  SUBCASE("zero eta gives zero input") {
    JointErrors e;
    e.xi = Vec4(0.3, -0.1, 0.2, 0.0);
    e.z1_norm = e.xi.norm();
    CHECK(joint_control(e, g, RhoCoeffs{1, 2, 3}).isZero(0.0));
  }

  SUBCASE("hand-evaluated example") {
    JointErrors e;
    e.eta = Vec4(1, 0, 0, 0);
    e.z1_norm = 1.0;
    const Vec4 u = joint_control(e, g, RhoCoeffs{1, 0, 0});
    CHECK(u[0] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(u.tail<3>().isZero(0.0));
  }

  SUBCASE("linear when rho is constant") {
    JointErrors e;
    e.eta = Vec4(0.2, -0.4, 0.1, 0.3);
    e.z1_norm = e.eta.norm();
    JointErrors scaled = e;
    scaled.eta *= 3.0;
    scaled.z1_norm *= 3.0;
    const RhoCoeffs c{4.0, 0.0, 0.0};
    CHECK((joint_control(scaled, g, c) - 3.0 * joint_control(e, g, c)).norm() < 1e-13);
  }
}

TEST_CASE("saturation") {
  const SaturatedInput off = saturate(Vec4(5, -5, 0, 1), 0.0);
  CHECK_FALSE(off.active);
  CHECK(off.u == Vec4(5, -5, 0, 1));
  const SaturatedInput on = saturate(Vec4(5, -5, 0, 1), 2.0);
  CHECK(on.active);
  CHECK(on.u == Vec4(2, -2, 0, 1));
}

TEST_CASE("auxiliary signal satisfies the error dynamics M eta_dot + C eta + tau = chi") {
  const PlantParams p = PlantParams::anthropometric();
  const Scenario sc = make_preset("nominal");
  test::Sampler s(32);
  for (int i = 0; i < 200; ++i) {
    const double t = s.uniform(0, 60);
    const DesiredState d = desired_trajectory(sc.trajectory, t);
    const ExoState st{s.in_box(p.stop_lower, p.stop_upper), s.vec(-3, 3), t};
    const Vec4 tau = s.vec(-30, 30);
    const double alpha = 5.0;
    const Vec4 qdd = forward_dynamics(st, tau, p);
    const Vec4 xi_dot = d.qdot - st.qdot;
    const Vec4 eta = xi_dot + alpha * (d.q - st.q);
    const Vec4 eta_dot = d.qddot - qdd + alpha * xi_dot;
    const Vec4 lhs = mass_matrix(st.q, p) * eta_dot + coriolis_matrix(st.q, st.qdot, p) * eta + tau;
    CHECK((lhs - auxiliary_signal(st, d, alpha, p)).norm() < 1e-9);
  }
}

TEST_CASE("rho coefficients from bounds") {
  SUBCASE("degenerate plant allows rho1 = 0") {
    BoundConstants b;
    const RhoCoeffs c = rho_coeffs_from_bounds(b, TrajectoryEnvelope{}, 10.0);
    CHECK(c.rho1 == 0.0);
  }

  SUBCASE("disturbance bound enters rho1 additively") {
    const DerivedConstants c = derive_constants(make_preset("nominal"));
    BoundConstants b = c.bounds;
    const double before = rho_coeffs_from_bounds(b, c.trajectory, 5.0).rho1;
    b.d_exo += 0.75;
    CHECK(rho_coeffs_from_bounds(b, c.trajectory, 5.0).rho1 == doctest::Approx(before + 0.75).epsilon(1e-15));
  }

  for (const char* preset : {"nominal", "paper_v"}) {
    SUBCASE(preset) {
      // States come from the box the constants were estimated on, with η drawn
      // from a ball; ρ(‖z1‖) must cover ‖χ‖ at every one.
      const Scenario sc = make_preset(preset);
      const DerivedConstants c = derive_constants(sc);
      const StateBox box = sc.bound_domain();
      test::Sampler s(33);
      double worst_margin = 1e300;
      for (int i = 0; i < 10000; ++i) {
        const double t = s.uniform(0, sc.duration);
        const DesiredState d = desired_trajectory(sc.trajectory, t);
        const Vec4 q = s.in_box(box.q_lower, box.q_upper);
        Vec4 eta = s.ball(5.0);
        for (int j = 0; j < kJoints; ++j)
          if (sc.clamped[j]) eta[j] = 0.0;
        const Vec4 xi = d.q - q;
        const Vec4 qdot = d.qdot - eta + sc.joint.alpha * xi;
        const ExoState st{q, qdot, t};
        const JointErrors e = joint_errors(q, qdot, d.q, d.qdot, sc.joint.alpha);
        const double chi = auxiliary_signal(st, d, sc.joint.alpha, sc.plant).norm();
        worst_margin = std::min(worst_margin, rho(e.z1_norm, c.rho) - chi);
      }
      CHECK(worst_margin >= 0.0);
    }
  }
}
