#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "lembas/dynamics.hpp"
#include "lembas/oracles.hpp"
#include "support/reference.hpp"

using namespace lembas;
using namespace lembas::oracles;
using Catch::Matchers::WithinAbs;

TEST_CASE("coherent example fluxes", "[oracles]") {
  const CoherentExampleParams half{0.5, 0.1, 1.0, 1.0};
  for (double t : {0.3, 1.0, 2.5}) CHECK(coherent_example_fluxes(half, t).w1 == 0.0);

  for (double c : {0.0, 1.0}) {
    const CoherentExampleParams p{c, 0.1, 1.0, 1.0};
    for (double t : {0.3, 1.0, 2.5}) {
      CHECK(coherent_example_fluxes(p, t).q2 == 0.0);
      CHECK(coherent_example_fluxes(p, t).q1 == 0.0);
    }
  }

  const CoherentExampleParams p{0.25, 0.1, 1.3, 0.7};
  const FluxTriple at_half_period = coherent_example_fluxes(p, std::numbers::pi / p.nu);
  CHECK_THAT(at_half_period.w1, WithinAbs(0.0, 1e-15));
  CHECK_THAT(at_half_period.q2, WithinAbs(0.0, 1e-15));
  const FluxTriple quarter = coherent_example_fluxes(p, std::numbers::pi / (2 * p.nu));
  CHECK_THAT(quarter.q2, WithinAbs(8 * 0.25 * 0.75 * 0.01, 1e-15));
  CHECK_THAT(quarter.w1, WithinAbs(-2 * 0.1 * 0.5 * (1.3 * 0.7 + 0.5 * 0.1), 1e-15));

  CHECK_THROWS_AS(coherent_example_fluxes({1.5, 0.1, 1.0, 0.0}, 1.0), ValidationError);
}

TEST_CASE("coherent example against the engine", "[oracles]") {
  for (double c : {0.0, 0.25, 0.5}) {
    ModelParams q;
    q.omega0 = 1.0, q.nu = 1.0, q.g = 0.1, q.n_fock = 40;
    const BipartiteSystem sys = build_model(ModelKind::Displaced, q);
    const DensityMatrix rho0 = initial_state(SpinState::mixture(c), ModeState::coherent(1.0), q).rho;
    const CoherentExampleParams cp{c, q.g, q.nu, 1.0};
    const Trajectory traj = run({sys, {}, 2 * std::numbers::pi, 0.02, 10, Integrator::ExactExp}, rho0);
    double worst = 0.0;
    for (const auto& s : traj.samples) {
      const FluxTriple f = coherent_example_fluxes(cp, s.t);
      worst = std::max({worst, std::abs(s.w1 - f.w1), std::abs(s.q1 - f.q1), std::abs(s.q2 - f.q2)});
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("displaced coherent states", "[oracles]") {
  const CoherentExampleParams p{0.0, 0.2, 1.0, 0.6};
  // one full period brings both branches back
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const Complex back = displaced_coherent_center(p, 2 * std::numbers::pi, b);
    CHECK(std::abs(back - Complex(0.6)) <= 1e-14);
    const Operator r0 = coherent_state(0.6, 40).rho.op();
    const Operator r1 = displaced_coherent_state(p, 2 * std::numbers::pi, b, 40).rho.op();
    CHECK((r0 * r1).trace().real() >= 1.0 - 1e-10);
  }
  // no coupling: free rotation
  const CoherentExampleParams free{0.0, 0.0, 1.0, 0.6};
  CHECK(std::abs(displaced_coherent_center(free, 1.1, Branch::Plus) - 0.6 * std::polar(1.0, -1.1)) <=
        1e-15);
  // half period reaches the far side of the displaced centre
  CHECK(std::abs(displaced_coherent_center(p, std::numbers::pi, Branch::Plus) - Complex(-1.0)) <=
        1e-14);

  SECTION("matches exp{-i(nu a'a + g x)t} on the mode alone") {
    const int n = 40;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      const double sign = b == Branch::Plus ? 1.0 : -1.0;
      const Operator h = p.nu * oscillator::number(n) + sign * p.g * oscillator::position(n);
      for (double t : {0.4, 2.0, 5.5}) {
        const Operator u = ref::expm(Complex(0, -t) * h);
        const Operator num = u * coherent_state(p.x0, n).rho.op() * u.adjoint();
        const Operator expect = displaced_coherent_state(p, t, b, n).rho.op();
        CHECK((num * expect).trace().real() >= 1.0 - 1e-6);
      }
    }
  }
}

TEST_CASE("fully commuting reduced dynamics", "[oracles]") {
  SECTION("examples") {
    AppendixAData d;
    d.eps = {0.5, -0.5};
    d.a = {1.0, -1.0};
    d.E = {0.0, 1.0};
    d.b = {1.0, -1.0};
    d.p = {0.5, 0.5};
    d.rho1_0 = Operator::Constant(2, 2, 0.5);
    CHECK(max_norm(appendix_a_reduced_state(d, 0.0) - d.rho1_0) <= 1e-15);
    // coherence factor cos(2t) vanishes at t = pi/4 with balanced populations
    CHECK(std::abs(appendix_a_reduced_state(d, std::numbers::pi / 4)(0, 1)) <= 1e-15);
    // a definite partner state only adds a phase
    d.p = {1.0, 0.0};
    const Operator one_hot = appendix_a_reduced_state(d, 0.7);
    CHECK_THAT(std::abs(one_hot(0, 1)), WithinAbs(0.5, 1e-15));
    CHECK(std::abs(one_hot(0, 1) - 0.5 * std::polar(1.0, -(1.0 + 2.0) * 0.7)) <= 1e-15);

    d.p = {0.5, 0.6};
    CHECK_THROWS_AS(appendix_a_reduced_state(d, 1.0), ValidationError);
    d.p = {1.0};
    CHECK_THROWS_AS(appendix_a_reduced_state(d, 1.0), DimensionError);
  }

  SECTION("random diagonal models agree with the propagator") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      const int n1 = 2 + trial % 2, n2 = 3 + trial;
      AppendixAData d;
      Operator h1 = Operator::Zero(n1, n1), a = h1, h2 = Operator::Zero(n2, n2), b = h2;
      for (int i = 0; i < n1; ++i) {
        d.eps.push_back(u(rng));
        d.a.push_back(u(rng));
        h1(i, i) = d.eps.back();
        a(i, i) = d.a.back();
      }
      double z = 0.0;
      for (int k = 0; k < n2; ++k) {
        d.E.push_back(u(rng));
        d.b.push_back(u(rng));
        d.p.push_back(std::exp(-d.E.back()));
        z += d.p.back();
        h2(k, k) = d.E.back();
        b(k, k) = d.b.back();
      }
      for (double& pk : d.p) pk /= z;
      d.rho1_0 = ref::random_density(n1, rng);
      Operator rho2 = Operator::Zero(n2, n2);
      for (int k = 0; k < n2; ++k) rho2(k, k) = d.p[k];
      // off-diagonal coherences in partition II must not matter
      rho2(0, 1) = rho2(1, 0) = 0.1 * std::min(d.p[0], d.p[1]);

      const BipartiteSystem sys(h1, h2, {{a, b}});
      const Operator rho0 = kron(d.rho1_0, rho2);
      for (double t : {0.5, 3.0, 10.0}) {
        const Operator num = partial_trace(propagate_closed(sys, rho0, t), sys.dims(), Partition::First);
        CHECK(max_norm(num - appendix_a_reduced_state(d, t)) <= 1e-10);
        // populations never move
        for (int i = 0; i < n1; ++i) CHECK_THAT(num(i, i).real(), WithinAbs(d.rho1_0(i, i).real(), 1e-12));
      }
    }
  }
}
