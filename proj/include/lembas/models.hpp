#pragma once

#include <string>
#include <vector>

#include "lembas/operator.hpp"

namespace lembas {

// Spin basis order is (e, g) with sigma_z|e> = +|e>. Oscillator basis is the
// truncated Fock basis |0>, ..., |n_fock - 1>.
namespace spin {
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_plus();   // |e><g|
Operator sigma_minus();  // |g><e|
}  // namespace spin

namespace oscillator {
Operator annihilation(int n_fock);
Operator creation(int n_fock);
Operator number(int n_fock);
Operator position(int n_fock);     // a + a^dagger
Operator quadrature_y(int n_fock); // i (a - a^dagger)
}  // namespace oscillator

/// One product term A (x) B of the interaction, both factors Hermitian.
struct InteractionTerm {
  Operator a;  // acts on partition I
  Operator b;  // acts on partition II
};

/// H = H1 (x) I + I (x) H2 + sum_i A_i (x) B_i. Immutable once built.
class BipartiteSystem {
 public:
  BipartiteSystem(Operator h1, Operator h2, std::vector<InteractionTerm> interaction);

  Dims dims() const { return dims_; }
  const Operator& h1() const { return h1_; }
  const Operator& h2() const { return h2_; }
  const Operator& local(Partition p) const { return p == Partition::First ? h1_ : h2_; }
  const std::vector<InteractionTerm>& interaction() const { return terms_; }

  const Operator& hamiltonian() const { return total_; }
  const Operator& interaction_hamiltonian() const { return h12_; }

 private:
  Dims dims_;
  Operator h1_;
  Operator h2_;
  std::vector<InteractionTerm> terms_;
  Operator h12_;
  Operator total_;
};

enum class ModelKind { Dispersive, Displaced, JaynesCummings, SpinBosonMode };

std::string to_string(ModelKind kind);

struct ModelParams {
  double omega0 = 1.0;  // spin gap
  double V = 0.0;       // tunnelling (spin-boson only)
  double nu = 1.0;      // mode frequency
  double g = 0.1;       // coupling
  int n_fock = 20;
  double c = 0.0;       // spin mixing weight of |g>
  double x0 = 0.0;      // coherent displacement, Re alpha_0
  double beta2 = 1.0;   // inverse temperature of a thermal mode state
};

/// Dispersive:      H1 = w0/2 sz, H2 = nu a'a, H12 = g sz (x) a'a
/// Displaced:       H12 = g sz (x) (a + a')
/// JaynesCummings:  H12 = g(s+ a + s- a') = (g/2)(sx (x) x + sy (x) y), y = i(a - a')
/// SpinBosonMode:   H1 = w0/2 sz + V sx, H12 = g sz (x) (a + a')
BipartiteSystem build_model(ModelKind kind, const ModelParams& p);

enum class CommutationClass {
  FullyCommuting,
  PartiallyCommuting1,  // [H1, A_i] = 0 only
  PartiallyCommuting2,  // [H2, B_i] = 0 only
  NonCommuting,
};

std::string to_string(CommutationClass cls);

CommutationClass classify(const BipartiteSystem& sys);

/// [H1 (x) I, H12] = -[I (x) H2, H12] within 1e-10 of the commutator scale.
bool satisfies_resonance_condition(const BipartiteSystem& sys);

struct SpinState {
  enum class Kind { Excited, Ground, Mixture, Superposition };
  Kind kind = Kind::Excited;
  double c = 0.0;      // Mixture: c|g><g| + (1-c)|e><e|
  double theta = 0.0;  // Superposition: cos(theta/2)|e> + e^{i phi} sin(theta/2)|g>
  double phi = 0.0;

  static SpinState excited() { return {Kind::Excited}; }
  static SpinState ground() { return {Kind::Ground}; }
  static SpinState mixture(double c) { return {Kind::Mixture, c}; }
  static SpinState superposition(double theta, double phi) {
    return {Kind::Superposition, 0.0, theta, phi};
  }
};

struct ModeState {
  enum class Kind { Fock, Coherent, Thermal };
  Kind kind = Kind::Fock;
  int n = 0;
  double x0 = 0.0;
  double beta2 = 1.0;

  static ModeState fock(int n) { return {Kind::Fock, n}; }
  static ModeState coherent(double x0) { return {Kind::Coherent, 0, x0}; }
  static ModeState thermal(double beta2) { return {Kind::Thermal, 0, 0.0, beta2}; }
};

struct TruncatedState {
  DensityMatrix rho;
  double leakage = 0.0;  // weight of the untruncated state above n_fock - 1
  std::vector<std::string> warnings;
};

inline constexpr double kLeakageWarning = 1e-8;

DensityMatrix spin_state(const SpinState& s);

/// Coherent state |alpha> truncated to n_fock levels and renormalized.
TruncatedState coherent_state(Complex alpha, int n_fock);

/// Gibbs state of nu a'a at inverse temperature beta, on the truncated space.
TruncatedState thermal_mode_state(double beta, double nu, int n_fock);

TruncatedState mode_state(const ModeState& m, const ModelParams& p);

/// rho1(0) (x) rho2(0); warnings carry truncation leakage of the mode state.
TruncatedState initial_state(const SpinState& spin, const ModeState& mode, const ModelParams& p);

struct Jump {
  Operator op;
  double rate = 0.0;
};

/// Lindblad jumps acting on one partition, with the bath's inverse temperature.
struct BathSpec {
  Partition partition = Partition::First;
  std::vector<Jump> jumps;
  double beta = 1.0;
};

double bose_occupation(double beta, double energy);

/// Jumps {(s-, gamma0 (n+1)), (s+, gamma0 n)}, n = 1/(exp(beta gap) - 1), on partition I.
BathSpec thermal_qubit_bath(double beta, double gap, double gamma0);

/// Jumps {(a, gamma0 (n+1)), (a', gamma0 n)} for a mode on the given partition.
BathSpec thermal_oscillator_bath(double beta, double nu, double gamma0, int n_fock,
                                 Partition partition = Partition::Second);

}  // namespace lembas
