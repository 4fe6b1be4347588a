#include "lembas/oracles.hpp"

#include <cmath>

namespace lembas::oracles {

namespace {

void check(const CoherentExampleParams& p) {
  if (!(p.c >= 0.0 && p.c <= 1.0)) throw ValidationError("coherent example: c must be in [0,1]");
  if (!(p.nu > 0.0)) throw ValidationError("coherent example: nu must be > 0");
}

}  // namespace

FluxTriple coherent_example_fluxes(const CoherentExampleParams& p, double t) {
  check(p);
  const double pol = 1.0 - 2.0 * p.c;
  const double s = std::sin(p.nu * t);
  return {-2.0 * p.g * pol * (p.nu * p.x0 + pol * p.g) * s, 0.0,
          8.0 * p.c * (1.0 - p.c) * p.g * p.g * s};
}

Complex displaced_coherent_center(const CoherentExampleParams& p, double t, Branch branch) {
  check(p);
  const double sign = branch == Branch::Plus ? 1.0 : -1.0;
  const double shift = sign * p.g / p.nu;
  return -shift + (p.x0 + shift) * std::polar(1.0, -p.nu * t);
}

TruncatedState displaced_coherent_state(const CoherentExampleParams& p, double t, Branch branch,
                                        int n_fock) {
  return coherent_state(displaced_coherent_center(p, t, branch), n_fock);
}

Operator appendix_a_reduced_state(const AppendixAData& d, double t) {
  const std::size_t n1 = d.eps.size();
  const std::size_t n2 = d.E.size();
  if (d.a.size() != n1 || d.rho1_0.rows() != static_cast<Eigen::Index>(n1) ||
      d.rho1_0.cols() != static_cast<Eigen::Index>(n1)) {
    throw DimensionError("appendix_a_reduced_state: partition I data", static_cast<long>(n1),
                         static_cast<long>(d.a.size()));
  }
  if (d.b.size() != n2 || d.p.size() != n2) {
    throw DimensionError("appendix_a_reduced_state: partition II data", static_cast<long>(n2),
                         static_cast<long>(d.b.size()));
  }
  double total = 0.0;
  for (double pk : d.p) {
    if (pk < 0.0) throw ValidationError("appendix_a_reduced_state: negative population");
    total += pk;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ValidationError("appendix_a_reduced_state: populations must sum to 1");
  }

  Operator out(n1, n1);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      Complex dephasing = 0.0;
      for (std::size_t k = 0; k < n2; ++k) {
        dephasing += d.p[k] * std::polar(1.0, -(d.a[i] - d.a[j]) * d.b[k] * t);
      }
      out(i, j) = std::polar(1.0, -(d.eps[i] - d.eps[j]) * t) * dephasing * d.rho1_0(i, j);
    }
  }
  return out;
}

}  // namespace lembas::oracles
