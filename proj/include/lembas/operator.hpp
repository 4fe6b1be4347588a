#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "lembas/error.hpp"

namespace lembas {

using Complex = std::complex<double>;

/// Dense complex square matrix. Carries Hamiltonians, observables, jump
/// operators, density matrices and correlation operators alike.
using Operator = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

enum class Partition { First = 1, Second = 2 };

inline Partition other(Partition p) {
  return p == Partition::First ? Partition::Second : Partition::First;
}

struct Dims {
  int d1 = 1;
  int d2 = 1;

  int total() const { return d1 * d2; }
  int of(Partition p) const { return p == Partition::First ? d1 : d2; }
};

/// max_ij |m_ij|
double max_norm(const Operator& m);

/// max_ij |m_ij - conj(m_ji)| <= rel_tol * max_norm(m)
bool is_hermitian(const Operator& m, double rel_tol = 1e-12);

/// max_ij |m_ij - conj(m_ji)|
double hermiticity_error(const Operator& m);

Operator identity(int dim);

Operator kron(const Operator& a, const Operator& b);

/// Embed a single-partition operator into the bipartite space (X (x) I or I (x) X).
Operator embed(const Operator& x, Dims dims, Partition side);

/// Tr_2 (keep = First) or Tr_1 (keep = Second) of a bipartite operator.
Operator partial_trace(const Operator& m, Dims dims, Partition keep);

Operator commutator(const Operator& a, const Operator& b);

/// Tr{a b} without forming the product.
Complex trace_product(const Operator& a, const Operator& b);

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Operator eigenvectors;   // columns

  Operator reconstruct() const;
};

/// Hermitian eigendecomposition. Throws ValidationError on non-Hermitian input.
SpectralDecomposition spectral_decomposition(const Operator& h);

/// exp(scale * h) for Hermitian h, via its spectral decomposition.
Operator matrix_exp(const Operator& h, Complex scale);
Operator matrix_exp(const SpectralDecomposition& spectrum, Complex scale);

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// (all within `tolerance`). The spectrum is computed once at construction.
class DensityMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-10;

  explicit DensityMatrix(Operator op, double tolerance = kDefaultTolerance);

  /// |psi><psi| / <psi|psi>
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  const Operator& op() const { return op_; }
  int dim() const { return static_cast<int>(op_.rows()); }
  double tolerance() const { return tolerance_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  double min_eigenvalue() const { return spectrum_.eigenvalues(0); }
  double purity() const;

 private:
  Operator op_;
  double tolerance_;
  SpectralDecomposition spectrum_;
};

/// Eigenvalues below this are treated as exact zeros in logarithms.
inline constexpr double kEigenvalueClamp = 1e-14;
/// Weight of rho outside supp(sigma) above this makes D[rho||sigma] infinite.
inline constexpr double kSupportWeight = 1e-12;

/// -sum_i l_i ln l_i with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// D[rho||sigma] = Tr{rho ln rho} - Tr{rho ln sigma}. Returns +infinity when
/// supp(rho) is not contained in supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Tr{obs rho} for Hermitian obs; throws ValidationError otherwise.
double expectation(const Operator& obs, const DensityMatrix& rho);

}  // namespace lembas
