#include "lembas/entropy.hpp"

#include <cmath>
#include <limits>

#include "lembas/flux.hpp"

namespace lembas {

std::optional<double> EntropyDecomposition::identity_residual() const {
  if (support_violation) return std::nullopt;
  return std::abs(delta_s1 - (s_irr + s_rev + s_joint));
}

EntropyReference EntropyReference::from_initial_state(const DensityMatrix& rho0, Dims dims) {
  if (max_norm(extract_correlations(rho0.op(), dims)) > 1e-10) {
    throw ValidationError("entropy decomposition requires a separable initial state");
  }
  DensityMatrix rho1(partial_trace(rho0.op(), dims, Partition::First));
  DensityMatrix rho2(partial_trace(rho0.op(), dims, Partition::Second));
  const double s1 = von_neumann_entropy(rho1);
  const double s0 = von_neumann_entropy(rho0);

  Operator basis;
  Eigen::VectorXd p;
  const Operator& r2 = rho2.op();
  const Operator off = r2 - Operator(r2.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    basis = Operator::Identity(r2.rows(), r2.cols());
    p = r2.diagonal().real();
  } else {
    basis = rho2.spectrum().eigenvectors;
    p = rho2.spectrum().eigenvalues;
    for (Eigen::Index k = 0; k < p.size(); ++k)
      if (p(k) < kEigenvalueClamp) p(k) = 0.0;
  }
  return {std::move(rho1), std::move(rho2), s1, s0, std::move(basis), std::move(p)};
}

EntropyDecomposition entropy_decomposition(const DensityMatrix& rho_tau,
                                           const EntropyReference& ref, Dims dims) {
  if (rho_tau.dim() != dims.total()) {
    throw DimensionError("entropy_decomposition", dims.total(), rho_tau.dim());
  }
  const DensityMatrix rho1(partial_trace(rho_tau.op(), dims, Partition::First),
                           rho_tau.tolerance());
  const Operator rho2 = partial_trace(rho_tau.op(), dims, Partition::Second);

  EntropyDecomposition out;
  out.delta_s1 = von_neumann_entropy(rho1) - ref.s1_0;
  out.s_joint = von_neumann_entropy(rho_tau) - ref.s_joint_0;

  // D[rho || rho1 (x) rho2(0)] = S(rho1) - S(rho) - Tr{rho2 ln rho2(0)}, using
  // ln(A (x) B) = ln A (x) I + I (x) ln B.
  const Operator rotated = ref.basis2.adjoint() * rho2 * ref.basis2;
  double cross = 0.0;
  double s_rev = 0.0;
  double outside = 0.0;
  for (Eigen::Index k = 0; k < ref.p2.size(); ++k) {
    const double p0 = ref.p2(k);
    const double pt = rotated(k, k).real();
    if (p0 <= 0.0) {
      outside += std::max(pt, 0.0);
    } else {
      cross += pt * std::log(p0);
      s_rev += (pt - p0) * std::log(p0);
    }
  }
  out.s_irr = von_neumann_entropy(rho1) - von_neumann_entropy(rho_tau) - cross;
  out.s_rev = s_rev;

  if (outside > kSupportWeight) {
    out.support_violation = true;
    out.s_irr = std::numeric_limits<double>::infinity();
    out.s_rev = -std::numeric_limits<double>::infinity();
    out.message =
        "rho(t) has weight outside the support of rho1(t) (x) rho2(0): rho2(0) is rank "
        "deficient and partition II has left its initial support, so the relative entropy "
        "diverges";
  }
  return out;
}

EntropyTracker::EntropyTracker(const DensityMatrix& rho0, Dims dims)
    : dims_(dims), ref_(EntropyReference::from_initial_state(rho0, dims)) {}

void EntropyTracker::observe(const FluxSample& sample, const DensityMatrix& rho) {
  const EntropyDecomposition d = entropy_decomposition(rho, ref_, dims_);
  EntropyRecord r;
  r.t = sample.t;
  r.s1 = sample.s1;
  r.delta_s1 = d.delta_s1;
  r.s_irr = d.s_irr;
  r.s_rev = d.s_rev;
  r.s_joint = d.s_joint;
  r.support_violation = d.support_violation;
  records_.push_back(r);
}

void attach_beta_star(std::vector<EntropyRecord>& records, const Trajectory& traj) {
  for (std::size_t k = 1; k < records.size() && k < traj.running.size(); ++k) {
    const double dq = traj.running[k].q1 - traj.running[k - 1].q1;
    const double ds = records[k].s1 - records[k - 1].s1;
    if (std::abs(dq) > kClausiusHeatThreshold) records[k].beta_star = ds / dq;
  }
}

std::vector<double> reversible_thermal_form(const Trajectory& traj, double beta2,
                                            const Operator& h2) {
  if (!traj.initial_state) throw ValidationError("reversible_thermal_form: empty trajectory");
  if (!(beta2 > 0.0)) throw ValidationError("reversible_thermal_form: beta2 must be > 0");
  const int d2 = static_cast<int>(h2.rows());
  const int d1 = traj.initial_state->dim() / d2;
  if (d1 * d2 != traj.initial_state->dim()) {
    throw DimensionError("reversible_thermal_form: H2", traj.initial_state->dim(), h2.rows());
  }
  const Operator rho2_0 = partial_trace(traj.initial_state->op(), {d1, d2}, Partition::Second);
  Operator gibbs = matrix_exp(h2, Complex(-beta2, 0.0));
  gibbs /= gibbs.trace();
  if (max_norm(rho2_0 - gibbs) > 1e-10) {
    throw ValidationError(
        "reversible_thermal_form: rho2(0) is not the Gibbs state of H2 at beta2; the "
        "thermal form of the reversible entropy only holds for a thermal initial partner");
  }
  std::vector<double> out;
  out.reserve(traj.samples.size());
  const double e0 = traj.samples.empty() ? 0.0 : traj.samples.front().e2_bare;
  for (const auto& s : traj.samples) out.push_back(-beta2 * (s.e2_bare - e0));
  return out;
}

ClausiusReport clausius_diagnostic(const Trajectory& traj) {
  ClausiusReport report;
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double ds = traj.samples[k].s1 - traj.samples[k - 1].s1;
    const double dq = traj.running[k].q1 - traj.running[k - 1].q1;
    if (std::abs(dq) > kClausiusHeatThreshold) {
      report.beta_star.emplace_back(ds / dq);
    } else {
      report.beta_star.emplace_back(std::nullopt);
      if (std::abs(ds) > kClausiusEntropyThreshold) {
        report.counterexamples.push_back({traj.samples[k - 1].t, traj.samples[k].t, ds, dq});
      }
    }
  }
  return report;
}

}  // namespace lembas
