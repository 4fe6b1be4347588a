#include "lembas/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lembas {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

double default_dt(const BipartiteSystem& sys) { return 0.01 / max_norm(sys.hamiltonian()); }

double rk4_dt_bound(const BipartiteSystem& sys) { return 0.05 / max_norm(sys.hamiltonian()); }

Liouvillian::Liouvillian(const BipartiteSystem& sys, const std::vector<BathSpec>& baths)
    : h_(sys.hamiltonian()) {
  const Dims dims = sys.dims();
  for (const auto& b : baths) {
    for (const auto& j : b.jumps) {
      if (j.rate < 0.0) throw ValidationError("Liouvillian: negative jump rate");
      if (j.rate == 0.0) continue;
      Operator l = embed(j.op, dims, b.partition);
      Operator l_adj = l.adjoint();
      Operator half_ldl = 0.5 * j.rate * (l_adj * l);
      jumps_.push_back({std::move(l), std::move(l_adj), std::move(half_ldl), j.rate});
    }
  }
}

Operator Liouvillian::operator()(const Operator& rho) const {
  Operator out(rho.rows(), rho.cols());
  out.noalias() = -kI * (h_ * rho);
  out.noalias() += kI * (rho * h_);
  Operator tmp(rho.rows(), rho.cols());
  for (const auto& j : jumps_) {
    tmp.noalias() = j.l * rho;
    out.noalias() += j.rate * (tmp * j.l_adj);
    out.noalias() -= j.half_ldl * rho;
    out.noalias() -= rho * j.half_ldl;
  }
  return out;
}

Operator liouvillian(const BipartiteSystem& sys, const std::vector<BathSpec>& baths,
                     const Operator& rho) {
  if (rho.rows() != sys.dims().total()) {
    throw DimensionError("liouvillian", sys.dims().total(), rho.rows());
  }
  return Liouvillian(sys, baths)(rho);
}

Operator propagate_closed(const BipartiteSystem& sys, const Operator& rho0, double t) {
  if (rho0.rows() != sys.dims().total()) {
    throw DimensionError("propagate_closed", sys.dims().total(), rho0.rows());
  }
  const Operator u = matrix_exp(sys.hamiltonian(), Complex(0.0, -t));
  return u * rho0 * u.adjoint();
}

Operator step_rk4(const Liouvillian& generator, const Operator& rho, double dt, double t) {
  const Operator k1 = generator(rho);
  const Operator k2 = generator(rho + 0.5 * dt * k1);
  const Operator k3 = generator(rho + 0.5 * dt * k2);
  const Operator k4 = generator(rho + dt * k3);
  Operator next = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  next = 0.5 * (next + next.adjoint()).eval();
  if (!next.allFinite()) throw IntegratorError("non-finite density matrix", t + dt);
  next /= next.trace().real();
  Eigen::SelfAdjointEigenSolver<Operator> eig(next, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues()(0);
  if (min_eig < kMinEigenvalueAbort) {
    std::ostringstream msg;
    msg << "integrator tolerance exceeded; reduce dt (min eigenvalue " << min_eig << ")";
    throw IntegratorError(msg.str(), t + dt);
  }
  return next;
}

Operator step_rk4(const BipartiteSystem& sys, const std::vector<BathSpec>& baths,
                  const Operator& rho, double dt) {
  return step_rk4(Liouvillian(sys, baths), rho, dt);
}

namespace {

void accumulate(Trajectory& traj, const FluxSample& s) {
  if (traj.samples.empty()) {
    traj.running.push_back({});
  } else {
    const FluxSample& p = traj.samples.back();
    CumulativeEnergies c = traj.running.back();
    const double h = 0.5 * (s.t - p.t);
    c.w1 += h * (p.w1 + s.w1);
    c.q1 += h * (p.q1 + s.q1);
    c.w2 += h * (p.w2 + s.w2);
    c.q2 += h * (p.q2 + s.q2);
    c.du1 = s.u1 - traj.samples.front().u1;
    c.du2 = s.u2 - traj.samples.front().u2;
    traj.running.push_back(c);
  }
  traj.samples.push_back(s);
  traj.cumulative = traj.running.back();
}

void check_finite(const FluxSample& s) {
  const double fields[] = {s.w1, s.w2, s.q1, s.q2, s.u1, s.u2, s.s1, s.s2, s.e_total};
  for (double f : fields) {
    if (!std::isfinite(f)) throw IntegratorError("non-finite flux sample", s.t);
  }
}

}  // namespace

Trajectory run(const EvolutionSpec& spec, const DensityMatrix& rho0, const SampleObserver& observer) {
  const BipartiteSystem& sys = spec.sys;
  if (rho0.dim() != sys.dims().total()) {
    throw DimensionError("run: initial state", sys.dims().total(), rho0.dim());
  }
  if (!(spec.t_final >= 0.0) || !std::isfinite(spec.t_final)) {
    throw ValidationError("run: t_final must be finite and non-negative");
  }
  if (spec.sample_every < 1) throw ValidationError("run: sample_every must be >= 1");
  const double dt = spec.dt > 0.0 ? spec.dt : default_dt(sys);
  if (spec.integrator == Integrator::ExactExp && !spec.baths.empty()) {
    throw ValidationError("run: the exact propagator is only available without baths");
  }
  if (spec.integrator == Integrator::RK4 && dt > rk4_dt_bound(sys) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "run: dt = " << dt << " exceeds the RK4 stability bound 0.05/max|H| = "
        << rk4_dt_bound(sys);
    throw ValidationError(msg.str());
  }

  const FluxCalculator fluxes(sys, spec.baths);
  const Liouvillian generator(sys, spec.baths);
  Trajectory traj;
  traj.initial_state = rho0;

  const long n_steps = static_cast<long>(std::ceil(spec.t_final / dt - 1e-9));
  auto record = [&](double t, const Operator& rho) {
    DensityMatrix state(rho, -kMinEigenvalueAbort);
    const FluxSample s = fluxes.evaluate(t, state, generator(state.op()));
    check_finite(s);
    accumulate(traj, s);
    if (observer) observer(s, state);
    traj.final_state = std::move(state);
  };

  if (spec.integrator == Integrator::ExactExp) {
    // rho(t) = V e^{-i L t} (V' rho0 V) e^{i L t} V', evaluated afresh per sample.
    const SpectralDecomposition eig = spectral_decomposition(sys.hamiltonian());
    const Operator rotated0 = eig.eigenvectors.adjoint() * rho0.op() * eig.eigenvectors;
    const Eigen::Index n = rotated0.rows();
    for (long step = 0; step <= n_steps; step += spec.sample_every) {
      const double t = static_cast<double>(step) * dt;
      Operator rotated(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          rotated(i, j) =
              rotated0(i, j) * std::polar(1.0, -(eig.eigenvalues(i) - eig.eigenvalues(j)) * t);
      record(t, eig.eigenvectors * rotated * eig.eigenvectors.adjoint());
      if (step < n_steps && step + spec.sample_every > n_steps) step = n_steps - spec.sample_every;
    }
    return traj;
  }

  Operator rho = rho0.op();
  record(0.0, rho);
  for (long step = 1; step <= n_steps; ++step) {
    rho = step_rk4(generator, rho, dt, static_cast<double>(step - 1) * dt);
    if (step % spec.sample_every == 0 || step == n_steps) {
      record(static_cast<double>(step) * dt, rho);
    }
  }
  return traj;
}

}  // namespace lembas
