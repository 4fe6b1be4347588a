#pragma once

#include <vector>

#include "lembas/models.hpp"
#include "lembas/operator.hpp"

namespace lembas {

/// Orthogonal (Hilbert-Schmidt) projection onto the commutant of a Hermitian
/// operator: keeps the blocks of X that connect equal eigenvalues of h_local
/// and drops everything else. Eigenvalues within 1e-9 * max_norm(h_local) of
/// their neighbour share a block.
class Pinching {
 public:
  explicit Pinching(const Operator& h_local);

  Operator operator()(const Operator& x) const;

  int block_count() const { return static_cast<int>(block_start_.size()); }

 private:
  Operator basis_;
  std::vector<int> block_start_;
  int dim_ = 0;
};

/// h_eff = h_a + h_b with [h_a, H_local] = 0 and Tr{h_a' h_b} = 0.
struct LembasSplit {
  Operator h_eff;
  Operator h_a;
  Operator h_b;
  Operator h_prime;  // H_local + h_a
};

/// sum_i A_i <B_i> (side First) or sum_i B_i <A_i> (side Second), from the full state.
Operator effective_hamiltonian(const BipartiteSystem& sys, const Operator& rho, Partition side);

LembasSplit pinch_split(const Operator& h_eff, const Operator& h_local);

/// C12 = rho - rho1 (x) rho2
Operator extract_correlations(const Operator& rho, Dims dims);

struct HeatFlux {
  double total = 0.0;
  double bath = 0.0;      // sum over baths on this side of Tr{H' L_bath[rho_side]}
  double internal = 0.0;  // -i Tr{[H' (x) I, H12] C12}
  double internal_reduced = 0.0;  // Tr{H' L_eff[rho]}, L_eff = -i Tr_other{[H12, C12]}
};

/// Per-sample record of every flux, energy, entropy and diagnostic.
struct FluxSample {
  double t = 0.0;
  double w1 = 0.0, w2 = 0.0;
  double q1 = 0.0, q2 = 0.0;
  double q1_bath = 0.0, q2_bath = 0.0;
  double u1 = 0.0, u2 = 0.0;            // Tr{H' rho_s}
  double e1_bare = 0.0, e2_bare = 0.0;  // Tr{H_s rho_s}
  double s1 = 0.0, s2 = 0.0;            // local von Neumann entropies
  double s_joint = 0.0;                 // entropy of the full state
  double corr_norm = 0.0;               // max_norm(C12)
  double e_total = 0.0;                 // Tr{H rho}
  double trace_err = 0.0;
  double herm_err = 0.0;
  double min_eig = 0.0;
  double heat_form_residual = 0.0;  // max_s |internal - internal_reduced|
  double first_law_residual = 0.0;  // max_s |dU_s/dt - (W_s + Q_s)|, analytic dU/dt
};

/// Evaluates the LEMBAS quantities of one bipartite system (with optional
/// Markovian baths). The pinching projectors of both partitions depend only
/// on the bare local Hamiltonians and are built once.
class FluxCalculator {
 public:
  FluxCalculator(BipartiteSystem sys, std::vector<BathSpec> baths = {});

  const BipartiteSystem& system() const { return sys_; }
  const std::vector<BathSpec>& baths() const { return baths_; }
  const Pinching& pinching(Partition side) const {
    return side == Partition::First ? pinch1_ : pinch2_;
  }

  LembasSplit split(const Operator& rho, Partition side) const;

  /// Commuting part of d/dt H_eff, computed from rho_dot (never by differencing).
  Operator heff_time_derivative(const Operator& rho_dot, Partition side) const;

  double work_flux(const Operator& rho, const Operator& rho_dot, Partition side,
                   const LembasSplit& split) const;

  HeatFlux heat_flux(const Operator& rho, Partition side, const LembasSplit& split) const;

  /// sum over baths on `side` of L_bath[rho_side]
  Operator bath_dissipator(const Operator& rho_side, Partition side) const;

  double internal_energy(const Operator& rho, Partition side, const LembasSplit& split) const;

  /// Fluxes, energies and diagnostics at one instant. Entropy fields are
  /// filled from the full-state spectrum.
  FluxSample evaluate(double t, const DensityMatrix& rho, const Operator& rho_dot) const;

 private:
  BipartiteSystem sys_;
  std::vector<BathSpec> baths_;
  Pinching pinch1_;
  Pinching pinch2_;
};

/// L[rho] = sum_j rate_j (L_j rho L_j' - 1/2 {L_j' L_j, rho}) on a single partition.
Operator lindblad_dissipator(const BathSpec& bath, const Operator& rho_side);

// Free-function forms; each builds the pinching from the system.
Operator heff_time_derivative(const BipartiteSystem& sys, const Operator& rho,
                              const Operator& rho_dot, Partition side);
double work_flux(const BipartiteSystem& sys, const Operator& rho, const Operator& rho_dot,
                 Partition side, const LembasSplit& split);
HeatFlux heat_flux(const BipartiteSystem& sys, const Operator& rho, Partition side,
                   const LembasSplit& split, const std::vector<BathSpec>& baths = {});
double internal_energy(const Operator& rho_side, const LembasSplit& split);

}  // namespace lembas
