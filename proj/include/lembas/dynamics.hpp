#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lembas/flux.hpp"
#include "lembas/models.hpp"

namespace lembas {

enum class Integrator { ExactExp, RK4 };

struct EvolutionSpec {
  BipartiteSystem sys;
  std::vector<BathSpec> baths;
  double t_final = 1.0;
  double dt = 0.0;  // <= 0 selects the default 0.01 / max_norm(H)
  int sample_every = 1;
  Integrator integrator = Integrator::ExactExp;
};

/// Step size used when EvolutionSpec::dt is unset.
double default_dt(const BipartiteSystem& sys);

/// RK4 stability heuristic: dt <= 0.05 / max_norm(H).
double rk4_dt_bound(const BipartiteSystem& sys);

/// rho_dot = -i[H, rho] + sum over baths of rate (L rho L' - 1/2 {L'L, rho}),
/// with each jump embedded on its partition. Jump products are cached.
class Liouvillian {
 public:
  Liouvillian(const BipartiteSystem& sys, const std::vector<BathSpec>& baths);

  Operator operator()(const Operator& rho) const;

 private:
  struct EmbeddedJump {
    Operator l;
    Operator l_adj;
    Operator half_ldl;  // rate/2 L'L
    double rate;
  };
  Operator h_;
  std::vector<EmbeddedJump> jumps_;
};

Operator liouvillian(const BipartiteSystem& sys, const std::vector<BathSpec>& baths,
                     const Operator& rho);

/// U rho0 U', U = exp(-i H t).
Operator propagate_closed(const BipartiteSystem& sys, const Operator& rho0, double t);

/// One classical RK4 step followed by Hermitization and trace renormalization.
/// Throws IntegratorError if the result has an eigenvalue below -1e-6 or
/// non-finite entries.
Operator step_rk4(const Liouvillian& generator, const Operator& rho, double dt, double t = 0.0);
Operator step_rk4(const BipartiteSystem& sys, const std::vector<BathSpec>& baths,
                  const Operator& rho, double dt);

inline constexpr double kMinEigenvalueAbort = -1e-6;

struct CumulativeEnergies {
  double w1 = 0.0, q1 = 0.0, w2 = 0.0, q2 = 0.0;
  double du1 = 0.0, du2 = 0.0;
};

struct Trajectory {
  std::vector<FluxSample> samples;
  std::vector<CumulativeEnergies> running;  // trapezoid integrals up to each sample
  CumulativeEnergies cumulative;
  std::optional<DensityMatrix> initial_state;
  std::optional<DensityMatrix> final_state;
};

/// Called once per sample with the record and the full state it was computed from.
using SampleObserver = std::function<void(const FluxSample&, const DensityMatrix&)>;

Trajectory run(const EvolutionSpec& spec, const DensityMatrix& rho0,
               const SampleObserver& observer = {});

}  // namespace lembas
