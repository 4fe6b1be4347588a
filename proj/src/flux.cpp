#include "lembas/flux.hpp"

#include <algorithm>
#include <cmath>

namespace lembas {

namespace {

constexpr Complex kI{0.0, 1.0};

const Operator& factor(const InteractionTerm& t, Partition side) {
  return side == Partition::First ? t.a : t.b;
}

// sum_i X_i Tr{Y_i m_other}, X on `side`, Y on the partner.
Operator mean_field(const BipartiteSystem& sys, const Operator& m_full, Partition side) {
  const Dims dims = sys.dims();
  const Partition partner = other(side);
  const Operator m_partner = partial_trace(m_full, dims, partner);
  Operator out = Operator::Zero(dims.of(side), dims.of(side));
  for (const auto& t : sys.interaction()) {
    out += trace_product(factor(t, partner), m_partner).real() * factor(t, side);
  }
  return out;
}

}  // namespace

Pinching::Pinching(const Operator& h_local) : dim_(static_cast<int>(h_local.rows())) {
  const SpectralDecomposition spec = spectral_decomposition(h_local);
  basis_ = spec.eigenvectors;
  const double tol = 1e-9 * max_norm(h_local);
  block_start_.push_back(0);
  for (int k = 1; k < dim_; ++k) {
    if (spec.eigenvalues(k) - spec.eigenvalues(k - 1) > tol) block_start_.push_back(k);
  }
}

Operator Pinching::operator()(const Operator& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionError("Pinching", dim_, x.rows());
  const Operator rotated = basis_.adjoint() * x * basis_;
  Operator blocks = Operator::Zero(dim_, dim_);
  for (std::size_t b = 0; b < block_start_.size(); ++b) {
    const int start = block_start_[b];
    const int end = b + 1 < block_start_.size() ? block_start_[b + 1] : dim_;
    const int len = end - start;
    blocks.block(start, start, len, len) = rotated.block(start, start, len, len);
  }
  return basis_ * blocks * basis_.adjoint();
}

Operator effective_hamiltonian(const BipartiteSystem& sys, const Operator& rho, Partition side) {
  if (rho.rows() != sys.dims().total()) {
    throw DimensionError("effective_hamiltonian", sys.dims().total(), rho.rows());
  }
  return mean_field(sys, rho, side);
}

LembasSplit pinch_split(const Operator& h_eff, const Operator& h_local) {
  if (h_eff.rows() != h_local.rows()) {
    throw DimensionError("pinch_split", h_local.rows(), h_eff.rows());
  }
  const Pinching pinch(h_local);
  Operator h_a = pinch(h_eff);
  Operator h_b = h_eff - h_a;
  Operator h_prime = h_local + h_a;
  return {h_eff, std::move(h_a), std::move(h_b), std::move(h_prime)};
}

Operator extract_correlations(const Operator& rho, Dims dims) {
  const Operator rho1 = partial_trace(rho, dims, Partition::First);
  const Operator rho2 = partial_trace(rho, dims, Partition::Second);
  return rho - kron(rho1, rho2);
}

Operator lindblad_dissipator(const BathSpec& bath, const Operator& rho_side) {
  Operator out = Operator::Zero(rho_side.rows(), rho_side.cols());
  for (const auto& j : bath.jumps) {
    if (j.rate == 0.0) continue;
    if (j.op.rows() != rho_side.rows()) {
      throw DimensionError("lindblad_dissipator", rho_side.rows(), j.op.rows());
    }
    const Operator ldl = j.op.adjoint() * j.op;
    out += j.rate * (j.op * rho_side * j.op.adjoint() - 0.5 * (ldl * rho_side + rho_side * ldl));
  }
  return out;
}

FluxCalculator::FluxCalculator(BipartiteSystem sys, std::vector<BathSpec> baths)
    : sys_(std::move(sys)), baths_(std::move(baths)), pinch1_(sys_.h1()), pinch2_(sys_.h2()) {
  for (const auto& b : baths_) {
    for (const auto& j : b.jumps) {
      if (j.op.rows() != sys_.dims().of(b.partition) || j.op.cols() != j.op.rows()) {
        throw DimensionError("FluxCalculator: jump operator", sys_.dims().of(b.partition),
                             j.op.rows());
      }
      if (j.rate < 0.0) throw ValidationError("FluxCalculator: negative jump rate");
    }
  }
}

LembasSplit FluxCalculator::split(const Operator& rho, Partition side) const {
  Operator h_eff = effective_hamiltonian(sys_, rho, side);
  Operator h_a = pinching(side)(h_eff);
  Operator h_b = h_eff - h_a;
  Operator h_prime = sys_.local(side) + h_a;
  return {std::move(h_eff), std::move(h_a), std::move(h_b), std::move(h_prime)};
}

Operator FluxCalculator::heff_time_derivative(const Operator& rho_dot, Partition side) const {
  if (rho_dot.rows() != sys_.dims().total()) {
    throw DimensionError("heff_time_derivative", sys_.dims().total(), rho_dot.rows());
  }
  return pinching(side)(mean_field(sys_, rho_dot, side));
}

double FluxCalculator::work_flux(const Operator& rho, const Operator& rho_dot, Partition side,
                                 const LembasSplit& split) const {
  const Operator rho_side = partial_trace(rho, sys_.dims(), side);
  const Operator h_a_dot = heff_time_derivative(rho_dot, side);
  const Complex explicit_part = trace_product(h_a_dot, rho_side);
  const Complex coherent_part = -kI * trace_product(commutator(split.h_prime, split.h_b), rho_side);
  return (explicit_part + coherent_part).real();
}

Operator FluxCalculator::bath_dissipator(const Operator& rho_side, Partition side) const {
  Operator out = Operator::Zero(rho_side.rows(), rho_side.cols());
  for (const auto& b : baths_) {
    if (b.partition == side) out += lindblad_dissipator(b, rho_side);
  }
  return out;
}

HeatFlux FluxCalculator::heat_flux(const Operator& rho, Partition side,
                                   const LembasSplit& split) const {
  const Dims dims = sys_.dims();
  const Operator& h12 = sys_.interaction_hamiltonian();
  const Operator c12 = extract_correlations(rho, dims);

  HeatFlux q;
  q.internal =
      (-kI * trace_product(commutator(embed(split.h_prime, dims, side), h12), c12)).real();
  const Operator l_eff = -kI * partial_trace(commutator(h12, c12), dims, side);
  q.internal_reduced = trace_product(split.h_prime, l_eff).real();

  const Operator rho_side = partial_trace(rho, dims, side);
  q.bath = trace_product(split.h_prime, bath_dissipator(rho_side, side)).real();
  q.total = q.internal + q.bath;
  return q;
}

double FluxCalculator::internal_energy(const Operator& rho, Partition side,
                                       const LembasSplit& split) const {
  return lembas::internal_energy(partial_trace(rho, sys_.dims(), side), split);
}

FluxSample FluxCalculator::evaluate(double t, const DensityMatrix& state,
                                    const Operator& rho_dot) const {
  const Dims dims = sys_.dims();
  const Operator& rho = state.op();
  FluxSample s;
  s.t = t;

  for (Partition side : {Partition::First, Partition::Second}) {
    const LembasSplit sp = split(rho, side);
    const Operator rho_side = partial_trace(rho, dims, side);
    const Operator rho_side_dot = partial_trace(rho_dot, dims, side);
    const double w = work_flux(rho, rho_dot, side, sp);
    const HeatFlux q = heat_flux(rho, side, sp);
    const double u = lembas::internal_energy(rho_side, sp);
    const double du_dt = trace_product(heff_time_derivative(rho_dot, side), rho_side).real() +
                         trace_product(sp.h_prime, rho_side_dot).real();
    const double e_bare = trace_product(sys_.local(side), rho_side).real();
    const double s_local = von_neumann_entropy(DensityMatrix(rho_side, state.tolerance()));

    s.heat_form_residual = std::max(s.heat_form_residual, std::abs(q.internal - q.internal_reduced));
    s.first_law_residual = std::max(s.first_law_residual, std::abs(du_dt - (w + q.total)));
    if (side == Partition::First) {
      s.w1 = w, s.q1 = q.total, s.q1_bath = q.bath, s.u1 = u, s.e1_bare = e_bare, s.s1 = s_local;
    } else {
      s.w2 = w, s.q2 = q.total, s.q2_bath = q.bath, s.u2 = u, s.e2_bare = e_bare, s.s2 = s_local;
    }
  }

  s.s_joint = von_neumann_entropy(state);
  s.corr_norm = max_norm(extract_correlations(rho, dims));
  s.e_total = trace_product(sys_.hamiltonian(), rho).real();
  s.trace_err = std::abs(rho.trace() - 1.0);
  s.herm_err = hermiticity_error(rho);
  s.min_eig = state.min_eigenvalue();
  return s;
}

Operator heff_time_derivative(const BipartiteSystem& sys, const Operator& rho,
                              const Operator& rho_dot, Partition side) {
  if (rho.rows() != sys.dims().total()) {
    throw DimensionError("heff_time_derivative", sys.dims().total(), rho.rows());
  }
  return FluxCalculator(sys).heff_time_derivative(rho_dot, side);
}

double work_flux(const BipartiteSystem& sys, const Operator& rho, const Operator& rho_dot,
                 Partition side, const LembasSplit& split) {
  return FluxCalculator(sys).work_flux(rho, rho_dot, side, split);
}

HeatFlux heat_flux(const BipartiteSystem& sys, const Operator& rho, Partition side,
                   const LembasSplit& split, const std::vector<BathSpec>& baths) {
  return FluxCalculator(sys, baths).heat_flux(rho, side, split);
}

double internal_energy(const Operator& rho_side, const LembasSplit& split) {
  return trace_product(split.h_prime, rho_side).real();
}

}  // namespace lembas
