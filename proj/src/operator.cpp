#include "lembas/operator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lembas {

double max_norm(const Operator& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const Operator& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  return hermiticity_error(m) <= rel_tol * max_norm(m);
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator kron(const Operator& a, const Operator& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols();
  const Eigen::Index rb = b.rows(), cb = b.cols();
  Operator out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

Operator embed(const Operator& x, Dims dims, Partition side) {
  if (x.rows() != dims.of(side) || x.cols() != x.rows()) {
    throw DimensionError("embed", dims.of(side), x.rows());
  }
  return side == Partition::First ? kron(x, identity(dims.d2)) : kron(identity(dims.d1), x);
}

Operator partial_trace(const Operator& m, Dims dims, Partition keep) {
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw DimensionError("partial_trace", dims.total(), m.rows() == m.cols() ? m.rows() : -1);
  }
  const int d1 = dims.d1, d2 = dims.d2;
  if (keep == Partition::First) {
    Operator out = Operator::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) {
        Complex s = 0.0;
        for (int k = 0; k < d2; ++k) s += m(i * d2 + k, j * d2 + k);
        out(i, j) = s;
      }
    return out;
  }
  Operator out = Operator::Zero(d2, d2);
  for (int i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

Operator commutator(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("commutator", a.rows(), b.rows());
  }
  Operator out = a * b;
  out.noalias() -= b * a;
  return out;
}

Complex trace_product(const Operator& a, const Operator& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw DimensionError("trace_product", a.cols(), b.rows());
  }
  // Tr{ab} = sum_ij a_ij b_ji
  return a.cwiseProduct(b.transpose()).sum();
}

Operator SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decomposition(const Operator& h) {
  if (!is_hermitian(h, 1e-12)) {
    std::ostringstream msg;
    msg << "spectral_decomposition: operator is not Hermitian (asymmetry "
        << hermiticity_error(h) << ", scale " << max_norm(h) << ")";
    throw ValidationError(msg.str());
  }
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const Operator sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("spectral_decomposition: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Operator matrix_exp(const SpectralDecomposition& spectrum, Complex scale) {
  const Eigen::VectorXcd phases =
      (scale * spectrum.eigenvalues.cast<Complex>()).array().exp().matrix();
  return spectrum.eigenvectors * phases.asDiagonal() * spectrum.eigenvectors.adjoint();
}

Operator matrix_exp(const Operator& h, Complex scale) {
  return matrix_exp(spectral_decomposition(h), scale);
}

DensityMatrix::DensityMatrix(Operator op, double tolerance)
    : op_(std::move(op)), tolerance_(tolerance) {
  if (op_.rows() != op_.cols() || op_.rows() == 0) {
    throw DimensionError("DensityMatrix: matrix must be square and non-empty", op_.rows(),
                         op_.cols());
  }
  if (!op_.allFinite()) throw ValidationError("DensityMatrix: non-finite entries");
  const double herm = hermiticity_error(op_);
  if (herm > tolerance_) {
    throw ValidationError("DensityMatrix: not Hermitian (asymmetry " + std::to_string(herm) +
                          ")");
  }
  op_ = 0.5 * (op_ + op_.adjoint()).eval();
  const double trace_err = std::abs(op_.trace() - 1.0);
  if (trace_err > tolerance_) {
    throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                          std::to_string(trace_err));
  }
  spectrum_ = spectral_decomposition(op_);
  if (spectrum_.eigenvalues(0) < -tolerance_) {
    throw ValidationError("DensityMatrix: negative eigenvalue " +
                          std::to_string(spectrum_.eigenvalues(0)));
  }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double n = psi.squaredNorm();
  if (n <= 0.0) throw ValidationError("DensityMatrix::pure: zero vector");
  return DensityMatrix(psi * psi.adjoint() / n);
}

double DensityMatrix::purity() const { return trace_product(op_, op_).real(); }

namespace {

double xlogx(double x) { return x <= kEigenvalueClamp ? 0.0 : x * std::log(x); }

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.spectrum().eigenvalues.size(); ++i) {
    s -= xlogx(rho.spectrum().eigenvalues(i));
  }
  return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("relative_entropy", rho.dim(), sigma.dim());
  }
  const auto& sig = sigma.spectrum();
  // Diagonal of rho in sigma's eigenbasis: <v_k|rho|v_k>.
  const Operator rotated = sig.eigenvectors.adjoint() * rho.op() * sig.eigenvectors;
  double cross = 0.0;  // Tr{rho ln sigma}
  double outside = 0.0;
  for (Eigen::Index k = 0; k < sig.eigenvalues.size(); ++k) {
    const double w = rotated(k, k).real();
    const double lambda = sig.eigenvalues(k);
    if (lambda < kEigenvalueClamp) {
      outside += std::max(w, 0.0);
    } else {
      cross += w * std::log(lambda);
    }
  }
  if (outside > kSupportWeight) return std::numeric_limits<double>::infinity();
  const double neg_entropy = -von_neumann_entropy(rho);
  return neg_entropy - cross;
}

double expectation(const Operator& obs, const DensityMatrix& rho) {
  if (obs.rows() != rho.dim() || obs.cols() != rho.dim()) {
    throw DimensionError("expectation", rho.dim(), obs.rows());
  }
  if (!is_hermitian(obs, 1e-12)) {
    throw ValidationError("expectation: observable is not Hermitian");
  }
  return trace_product(obs, rho.op()).real();
}

}  // namespace lembas
