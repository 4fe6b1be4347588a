#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "lembas/dynamics.hpp"
#include "lembas/models.hpp"
#include "support/reference.hpp"

using namespace lembas;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModelParams params(int n_fock = 10) {
  ModelParams p;
  p.omega0 = 1.0;
  p.nu = 1.0;
  p.g = 0.1;
  p.V = 0.0;
  p.n_fock = n_fock;
  return p;
}

}  // namespace

TEST_CASE("spin and oscillator operators", "[models]") {
  // basis (e, g), sigma_z |e> = +|e>
  CHECK(spin::sigma_z()(0, 0) == Complex(1.0));
  CHECK(spin::sigma_z()(1, 1) == Complex(-1.0));
  CHECK(max_norm(spin::sigma_plus() + spin::sigma_minus() - spin::sigma_x()) == 0.0);
  CHECK(max_norm(commutator(spin::sigma_plus(), spin::sigma_minus()) - spin::sigma_z()) == 0.0);

  const int n = 5;
  const Operator a = oscillator::annihilation(n);
  CHECK_THAT(a(1, 2).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK(max_norm(oscillator::creation(n) - a.adjoint()) == 0.0);
  CHECK(max_norm(oscillator::number(n) - oscillator::creation(n) * a) <= 1e-14);
  CHECK(is_hermitian(oscillator::position(n)));
  CHECK(is_hermitian(oscillator::quadrature_y(n)));
}

TEST_CASE("catalog Hamiltonians", "[models]") {
  SECTION("decoupled dispersive model has a zero interaction") {
    ModelParams p = params();
    p.g = 0.0;
    const BipartiteSystem sys = build_model(ModelKind::Dispersive, p);
    CHECK(max_norm(sys.interaction_hamiltonian()) == 0.0);
  }

  SECTION("displaced model at n_fock = 2 by hand") {
    ModelParams p = params(2);
    p.omega0 = 2.0;
    p.nu = 3.0;
    p.g = 0.7;
    const BipartiteSystem sys = build_model(ModelKind::Displaced, p);
    // basis |e0>, |e1>, |g0>, |g1>
    Operator expect = Operator::Zero(4, 4);
    expect(0, 0) = 1.0;
    expect(1, 1) = 1.0 + 3.0;
    expect(2, 2) = -1.0;
    expect(3, 3) = -1.0 + 3.0;
    expect(0, 1) = expect(1, 0) = 0.7;
    expect(2, 3) = expect(3, 2) = -0.7;
    CHECK(max_norm(sys.hamiltonian() - expect) <= 1e-15);
    CHECK(sys.interaction().front().b(0, 1) == Complex(0.7));
  }

  SECTION("Jaynes-Cummings pair form equals g(s+ a + s- a')") {
    const int n = 8;
    ModelParams p = params(n);
    p.g = 0.37;
    const BipartiteSystem sys = build_model(ModelKind::JaynesCummings, p);
    const Operator direct =
        p.g * (kron(spin::sigma_plus(), oscillator::annihilation(n)) +
               kron(spin::sigma_minus(), oscillator::creation(n)));
    CHECK(max_norm(sys.interaction_hamiltonian() - direct) <= 1e-14);
    CHECK(sys.interaction().size() == 2);
    for (const auto& t : sys.interaction()) {
      CHECK(is_hermitian(t.a));
      CHECK(is_hermitian(t.b));
    }
  }

  SECTION("resonance condition") {
    const int n = 12;
    ModelParams p = params(n);
    const BipartiteSystem jc = build_model(ModelKind::JaynesCummings, p);
    const Dims d = jc.dims();
    const Operator lhs = commutator(embed(jc.h1(), d, Partition::First), jc.interaction_hamiltonian());
    const Operator rhs = commutator(embed(jc.h2(), d, Partition::Second), jc.interaction_hamiltonian());
    CHECK(max_norm(lhs + rhs) <= 1e-12);
    CHECK(satisfies_resonance_condition(jc));

    p.nu = 1.3;
    CHECK_FALSE(satisfies_resonance_condition(build_model(ModelKind::JaynesCummings, p)));
  }

  SECTION("every catalog Hamiltonian is Hermitian and classified") {
    ModelParams p = params();
    p.V = 0.4;
    CHECK(classify(build_model(ModelKind::Dispersive, p)) == CommutationClass::FullyCommuting);
    CHECK(classify(build_model(ModelKind::Displaced, p)) == CommutationClass::PartiallyCommuting1);
    CHECK(classify(build_model(ModelKind::JaynesCummings, p)) == CommutationClass::NonCommuting);
    CHECK(classify(build_model(ModelKind::SpinBosonMode, p)) == CommutationClass::NonCommuting);
    for (auto kind : {ModelKind::Dispersive, ModelKind::Displaced, ModelKind::JaynesCummings,
                      ModelKind::SpinBosonMode}) {
      CHECK(is_hermitian(build_model(kind, p).hamiltonian()));
    }
  }

  SECTION("class 2 from a hand-built system") {
    const BipartiteSystem sys(0.5 * spin::sigma_z(), oscillator::number(4),
                              {{spin::sigma_x(), oscillator::number(4)}});
    CHECK(classify(sys) == CommutationClass::PartiallyCommuting2);
  }

  SECTION("invalid inputs") {
    ModelParams p = params(1);
    CHECK_THROWS_AS(build_model(ModelKind::Displaced, p), ValidationError);
    CHECK_THROWS_AS(BipartiteSystem(spin::sigma_z(), identity(3), {{spin::sigma_x(), identity(2)}}),
                    DimensionError);
    Operator not_hermitian = spin::sigma_plus();
    CHECK_THROWS_AS(BipartiteSystem(spin::sigma_z(), identity(2), {{not_hermitian, identity(2)}}),
                    ValidationError);
  }
}

TEST_CASE("initial states", "[models]") {
  ModelParams p = params(6);
  const TruncatedState s =
      initial_state(SpinState::mixture(1.0), ModeState::fock(0), p);
  CHECK_THAT(s.rho.purity(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(s.rho.op()(6, 6).real(), WithinAbs(1.0, 1e-15));  // |g>|0>

  CHECK(max_norm(coherent_state(0.0, 6).rho.op() -
                 initial_state(SpinState::excited(), ModeState::fock(0), p).rho.op().block(0, 0, 6, 6)) <=
        1e-15);

  SECTION("thermal populations are geometric") {
    const TruncatedState th = thermal_mode_state(1.0, 1.0, 60);
    CHECK_THAT(th.rho.op()(0, 0).real(), WithinAbs(1.0 - std::exp(-1.0), 1e-12));
    CHECK_THAT(th.rho.op()(3, 3).real() / th.rho.op()(2, 2).real(), WithinRel(std::exp(-1.0), 1e-12));
    CHECK(th.warnings.empty());
    CHECK_FALSE(thermal_mode_state(0.1, 1.0, 10).warnings.empty());
  }

  SECTION("coherent amplitudes") {
    const Complex alpha(0.9, -0.4);
    const TruncatedState c = coherent_state(alpha, 40);
    CHECK(c.leakage < 1e-20);
    const Complex mean = (oscillator::annihilation(40) * c.rho.op()).trace();
    CHECK(std::abs(mean - alpha) <= 1e-12);
    CHECK_FALSE(coherent_state(3.0, 6).warnings.empty());
  }

  SECTION("superposition") {
    const DensityMatrix rho = spin_state(SpinState::superposition(std::numbers::pi / 2, 0.0));
    CHECK_THAT(rho.op()(0, 1).real(), WithinAbs(0.5, 1e-15));
  }

  SECTION("truncation convergence of <H2>") {
    for (double beta : {1.0, 180.0 / 208.5}) {
      const double e40 = expectation(oscillator::number(40), thermal_mode_state(beta, 1.0, 40).rho);
      const double e80 = expectation(oscillator::number(80), thermal_mode_state(beta, 1.0, 80).rho);
      CHECK(std::abs(e40 - e80) <= 1e-6 * e80);
    }
    const double c40 = expectation(oscillator::number(40), coherent_state(1.3, 40).rho);
    const double c80 = expectation(oscillator::number(80), coherent_state(1.3, 80).rho);
    CHECK(std::abs(c40 - c80) <= 1e-6 * c80);
  }

  CHECK_THROWS_AS(initial_state(SpinState::excited(), ModeState::fock(6), p), ValidationError);
  CHECK_THROWS_AS(initial_state(SpinState::excited(), ModeState::thermal(-1.0), p), ValidationError);
  CHECK_THROWS_AS(spin_state(SpinState::mixture(1.5)), ValidationError);
}

TEST_CASE("thermal baths", "[models]") {
  const BathSpec ln2 = thermal_qubit_bath(std::log(2.0), 1.0, 0.3);
  CHECK(ln2.partition == Partition::First);
  CHECK_THAT(ln2.jumps[0].rate, WithinRel(0.6, 1e-12));  // sigma-, gamma0 (n + 1)
  CHECK_THAT(ln2.jumps[1].rate, WithinRel(0.3, 1e-12));  // sigma+, gamma0 n
  CHECK(max_norm(ln2.jumps[0].op - spin::sigma_minus()) == 0.0);

  const BathSpec cold = thermal_qubit_bath(std::numeric_limits<double>::infinity(), 1.0, 0.3);
  CHECK(cold.jumps[1].rate == 0.0);

  const BathSpec b = thermal_qubit_bath(0.8, 1.5, 1.0);
  CHECK_THAT(b.jumps[1].rate / b.jumps[0].rate, WithinRel(std::exp(-0.8 * 1.5), 1e-12));
  CHECK_THROWS_AS(thermal_qubit_bath(0.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(thermal_qubit_bath(-1.0, 1.0, 1.0), ValidationError);

  SECTION("stationary state of the qubit dissipator is Gibbs") {
    const double beta = 0.8, gap = 1.5;
    const BathSpec bath = thermal_qubit_bath(beta, gap, 1.0);
    const double z = 1.0 + std::exp(-beta * gap);
    Operator gibbs = Operator::Zero(2, 2);
    gibbs(0, 0) = std::exp(-beta * gap) / z;
    gibbs(1, 1) = 1.0 / z;
    CHECK(max_norm(lindblad_dissipator(bath, gibbs)) <= 1e-15);

    // isolated qubit relaxes to it
    const BipartiteSystem qubit(0.5 * gap * spin::sigma_z(), identity(1), {});
    EvolutionSpec spec{qubit, {bath}, 30.0, 0.01, 3000, Integrator::RK4};
    const Trajectory traj = run(spec, spin_state(SpinState::excited()));
    CHECK(max_norm(traj.final_state->op() - gibbs) < 1e-6);
  }

  SECTION("oscillator bath") {
    const BathSpec osc = thermal_oscillator_bath(1.0, 2.0, 0.5, 7);
    CHECK(osc.partition == Partition::Second);
    CHECK(osc.jumps[0].op.rows() == 7);
    CHECK_THAT(osc.jumps[1].rate / osc.jumps[0].rate, WithinRel(std::exp(-2.0), 1e-12));
  }
}
