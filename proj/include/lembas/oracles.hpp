#pragma once

#include <vector>

#include "lembas/models.hpp"
#include "lembas/operator.hpp"

// Closed-form reference results, written with scalar arithmetic so they stay
// independent of the numerical engine they are used to check.
namespace lembas::oracles {

/// Displaced spin-oscillator, spin in c|g><g| + (1-c)|e><e|, mode in the
/// coherent state |alpha0 = x0> (zero initial momentum).
struct CoherentExampleParams {
  double c = 0.0;
  double g = 0.1;
  double nu = 1.0;
  double x0 = 0.0;
};

struct FluxTriple {
  double w1 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

/// With sigma_z|e> = +|e> and H12 = g sz (x) (a + a'):
///   w1 = -2g(1-2c)[nu x0 + (1-2c) g] sin(nu t)
///   q1 = 0
///   q2 = 8c(1-c) g^2 sin(nu t)
/// The mode's mean position obeys <x>_+- = 2[(x0 +- g/nu) cos(nu t) -+ g/nu],
/// so <x'> = -2 sin(nu t)[nu x0 + (1-2c) g]; magnitudes are sign-convention free.
FluxTriple coherent_example_fluxes(const CoherentExampleParams& p, double t);

enum class Branch { Plus, Minus };

/// Centre of exp{-i(nu a'a +- g(a + a'))t}|alpha0>: in the frame displaced by
/// -+g/nu the generator is a free rotation, giving
///   alpha+-(t) = -+g/nu + (alpha0 +- g/nu) e^{-i nu t}.
Complex displaced_coherent_center(const CoherentExampleParams& p, double t, Branch branch);

TruncatedState displaced_coherent_state(const CoherentExampleParams& p, double t, Branch branch,
                                        int n_fock);

/// Fully commuting interaction written in the joint eigenbases:
/// H1 = sum eps_i |i><i|, A = sum a_i |i><i|, H2 = sum E_k |k><k|, B = sum b_k |k><k|,
/// p_k = <k|rho2(0)|k>. rho1_0 is expressed in the |eps_i> basis.
struct AppendixAData {
  std::vector<double> eps;
  std::vector<double> a;
  std::vector<double> E;
  std::vector<double> b;
  std::vector<double> p;
  Operator rho1_0;
};

/// rho1(t)_ij = e^{-i(eps_i - eps_j)t} (sum_k e^{-i(a_i - a_j) b_k t} p_k) rho1(0)_ij
Operator appendix_a_reduced_state(const AppendixAData& d, double t);

}  // namespace lembas::oracles
