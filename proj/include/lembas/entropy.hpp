#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lembas/dynamics.hpp"
#include "lembas/operator.hpp"

namespace lembas {

/// Entropy change of partition I split into an irreversible part (a relative
/// entropy, never negative) and a reversible part driven by partition II:
///
///   dS1 = D[rho(t) || rho1(t) (x) rho2(0)] + Tr{(rho2(t) - rho2(0)) ln rho2(0)} + dS_joint
///
/// dS_joint = S(rho(t)) - S(rho(0)) vanishes for unitary joint evolution and
/// carries the entropy exchanged with a Lindblad bath otherwise.
struct EntropyDecomposition {
  double delta_s1 = 0.0;
  double s_irr = 0.0;
  double s_rev = 0.0;
  double s_joint = 0.0;
  bool support_violation = false;  // s_irr = +inf, s_rev = -inf
  std::string message;

  /// |delta_s1 - (s_irr + s_rev + s_joint)|, or nullopt when infinite.
  std::optional<double> identity_residual() const;
};

/// Reference data frozen at t = 0 for the decomposition.
struct EntropyReference {
  DensityMatrix rho1_0;
  DensityMatrix rho2_0;
  double s1_0 = 0.0;
  double s_joint_0 = 0.0;
  // Eigenbasis and eigenvalues of rho2(0) used for ln rho2(0). A diagonal
  // rho2(0) (e.g. an analytically built Gibbs state) keeps its exact entries,
  // so tiny but positive populations are not mistaken for zeros.
  Operator basis2;
  Eigen::VectorXd p2;

  /// Requires a separable rho0 (max_norm(C12) <= 1e-10).
  static EntropyReference from_initial_state(const DensityMatrix& rho0, Dims dims);
};

EntropyDecomposition entropy_decomposition(const DensityMatrix& rho_tau,
                                           const EntropyReference& ref, Dims dims);

struct EntropyRecord {
  double t = 0.0;
  double s1 = 0.0;
  double delta_s1 = 0.0;
  double s_irr = 0.0;
  double s_rev = 0.0;
  double s_joint = 0.0;
  bool support_violation = false;
  std::optional<double> beta_star;  // dS1/dQ1 over the preceding interval, where |dQ1| > 1e-10
};

/// Builds EntropyRecords sample by sample (use as a run() observer).
class EntropyTracker {
 public:
  EntropyTracker(const DensityMatrix& rho0, Dims dims);

  void observe(const FluxSample& sample, const DensityMatrix& rho);
  const std::vector<EntropyRecord>& records() const { return records_; }
  std::vector<EntropyRecord> take() { return std::move(records_); }

 private:
  Dims dims_;
  EntropyReference ref_;
  std::vector<EntropyRecord> records_;
};

/// Fills beta_star on each record from the trajectory's cumulative Q1.
void attach_beta_star(std::vector<EntropyRecord>& records, const Trajectory& traj);

/// -beta2 (<H2>_t - <H2>_0). Refuses (ValidationError) unless rho2(0) is the
/// Gibbs state of h2 at beta2.
std::vector<double> reversible_thermal_form(const Trajectory& traj, double beta2,
                                            const Operator& h2);

struct ClausiusInterval {
  double t_begin = 0.0;
  double t_end = 0.0;
  double delta_s1 = 0.0;
  double delta_q1 = 0.0;
};

/// Intervals where S1 changes although no heat enters partition I, i.e.
/// counterexamples to dS1 = beta* dQ1.
struct ClausiusReport {
  std::vector<ClausiusInterval> counterexamples;
  std::vector<std::optional<double>> beta_star;  // per interval, undefined where |dQ1| <= 1e-10
};

inline constexpr double kClausiusEntropyThreshold = 1e-8;
inline constexpr double kClausiusHeatThreshold = 1e-10;

ClausiusReport clausius_diagnostic(const Trajectory& traj);

}  // namespace lembas
