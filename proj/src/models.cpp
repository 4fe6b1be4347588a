#include "lembas/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lembas {

namespace spin {

Operator sigma_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator sigma_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Operator sigma_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator sigma_plus() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Operator sigma_minus() {
  Operator m = Operator::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

}  // namespace spin

namespace oscillator {

Operator annihilation(int n_fock) {
  Operator a = Operator::Zero(n_fock, n_fock);
  for (int k = 1; k < n_fock; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Operator creation(int n_fock) { return annihilation(n_fock).adjoint(); }

Operator number(int n_fock) {
  Operator n = Operator::Zero(n_fock, n_fock);
  for (int k = 0; k < n_fock; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Operator position(int n_fock) {
  const Operator a = annihilation(n_fock);
  return a + a.adjoint();
}

Operator quadrature_y(int n_fock) {
  const Operator a = annihilation(n_fock);
  return Complex(0, 1) * (a - a.adjoint());
}

}  // namespace oscillator

BipartiteSystem::BipartiteSystem(Operator h1, Operator h2, std::vector<InteractionTerm> interaction)
    : dims_{static_cast<int>(h1.rows()), static_cast<int>(h2.rows())},
      h1_(std::move(h1)),
      h2_(std::move(h2)),
      terms_(std::move(interaction)) {
  if (h1_.rows() != h1_.cols() || h1_.rows() == 0) {
    throw DimensionError("BipartiteSystem: H1 must be square", h1_.rows(), h1_.cols());
  }
  if (h2_.rows() != h2_.cols() || h2_.rows() == 0) {
    throw DimensionError("BipartiteSystem: H2 must be square", h2_.rows(), h2_.cols());
  }
  if (!is_hermitian(h1_)) throw ValidationError("BipartiteSystem: H1 is not Hermitian");
  if (!is_hermitian(h2_)) throw ValidationError("BipartiteSystem: H2 is not Hermitian");

  h12_ = Operator::Zero(dims_.total(), dims_.total());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (t.a.rows() != dims_.d1 || t.a.cols() != dims_.d1) {
      throw DimensionError("BipartiteSystem: interaction term " + std::to_string(i) + " A",
                           dims_.d1, t.a.rows());
    }
    if (t.b.rows() != dims_.d2 || t.b.cols() != dims_.d2) {
      throw DimensionError("BipartiteSystem: interaction term " + std::to_string(i) + " B",
                           dims_.d2, t.b.rows());
    }
    if (!is_hermitian(t.a) || !is_hermitian(t.b)) {
      throw ValidationError("BipartiteSystem: interaction term " + std::to_string(i) +
                            " has a non-Hermitian factor");
    }
    h12_ += kron(t.a, t.b);
  }
  total_ = embed(h1_, dims_, Partition::First) + embed(h2_, dims_, Partition::Second) + h12_;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Dispersive: return "dispersive";
    case ModelKind::Displaced: return "displaced";
    case ModelKind::JaynesCummings: return "jaynes_cummings";
    case ModelKind::SpinBosonMode: return "spin_boson_mode";
  }
  return "unknown";
}

BipartiteSystem build_model(ModelKind kind, const ModelParams& p) {
  if (p.n_fock < 2) {
    throw ValidationError("build_model: n_fock must be >= 2 (got " + std::to_string(p.n_fock) +
                          ")");
  }
  const int n = p.n_fock;
  Operator h1 = 0.5 * p.omega0 * spin::sigma_z();
  Operator h2 = p.nu * oscillator::number(n);
  std::vector<InteractionTerm> terms;
  switch (kind) {
    case ModelKind::Dispersive:
      terms.push_back({spin::sigma_z(), p.g * oscillator::number(n)});
      break;
    case ModelKind::Displaced:
      terms.push_back({spin::sigma_z(), p.g * oscillator::position(n)});
      break;
    case ModelKind::JaynesCummings:
      terms.push_back({spin::sigma_x(), 0.5 * p.g * oscillator::position(n)});
      terms.push_back({spin::sigma_y(), 0.5 * p.g * oscillator::quadrature_y(n)});
      break;
    case ModelKind::SpinBosonMode:
      h1 += p.V * spin::sigma_x();
      terms.push_back({spin::sigma_z(), p.g * oscillator::position(n)});
      break;
    default:
      throw ValidationError("build_model: unknown model kind");
  }
  return BipartiteSystem(std::move(h1), std::move(h2), std::move(terms));
}

std::string to_string(CommutationClass cls) {
  switch (cls) {
    case CommutationClass::FullyCommuting: return "fully_commuting";
    case CommutationClass::PartiallyCommuting1: return "partially_commuting_1";
    case CommutationClass::PartiallyCommuting2: return "partially_commuting_2";
    case CommutationClass::NonCommuting: return "non_commuting";
  }
  return "unknown";
}

namespace {

bool commutes(const Operator& h, const Operator& x) {
  const double scale = max_norm(h) * max_norm(x);
  if (scale == 0.0) return true;
  return max_norm(commutator(h, x)) <= 1e-10 * scale;
}

}  // namespace

CommutationClass classify(const BipartiteSystem& sys) {
  bool first = true, second = true;
  for (const auto& t : sys.interaction()) {
    first = first && commutes(sys.h1(), t.a);
    second = second && commutes(sys.h2(), t.b);
  }
  if (first && second) return CommutationClass::FullyCommuting;
  if (first) return CommutationClass::PartiallyCommuting1;
  if (second) return CommutationClass::PartiallyCommuting2;
  return CommutationClass::NonCommuting;
}

bool satisfies_resonance_condition(const BipartiteSystem& sys) {
  const Dims d = sys.dims();
  const Operator& h12 = sys.interaction_hamiltonian();
  const Operator c1 = commutator(embed(sys.h1(), d, Partition::First), h12);
  const Operator c2 = commutator(embed(sys.h2(), d, Partition::Second), h12);
  const double scale = std::max(max_norm(c1), max_norm(c2));
  if (scale == 0.0) return true;
  return max_norm(c1 + c2) <= 1e-10 * scale;
}

DensityMatrix spin_state(const SpinState& s) {
  Operator rho = Operator::Zero(2, 2);
  switch (s.kind) {
    case SpinState::Kind::Excited:
      rho(0, 0) = 1.0;
      break;
    case SpinState::Kind::Ground:
      rho(1, 1) = 1.0;
      break;
    case SpinState::Kind::Mixture:
      if (!(s.c >= 0.0 && s.c <= 1.0)) {
        throw ValidationError("spin mixture weight c must lie in [0, 1]");
      }
      rho(0, 0) = 1.0 - s.c;
      rho(1, 1) = s.c;
      break;
    case SpinState::Kind::Superposition: {
      Eigen::VectorXcd psi(2);
      psi << std::cos(0.5 * s.theta), std::polar(1.0, s.phi) * std::sin(0.5 * s.theta);
      return DensityMatrix::pure(psi);
    }
  }
  return DensityMatrix(rho);
}

namespace {

std::string leakage_warning(const char* what, double leakage, int n_fock) {
  std::ostringstream msg;
  msg << what << " state has weight " << leakage << " above the truncation n_fock = " << n_fock
      << "; increase n_fock";
  return msg.str();
}

// Poisson tail sum_{n >= n_fock} e^{-m} m^n / n!, m = |alpha|^2.
double poisson_tail(double mean, int n_fock) {
  if (mean == 0.0) return 0.0;
  double log_term = -mean + n_fock * std::log(mean) - std::lgamma(n_fock + 1.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (int n = n_fock; n < n_fock + 100000; ++n) {
    sum += term;
    term *= mean / (n + 1.0);
    if (n > mean && term < 1e-30 * std::max(sum, 1e-300)) break;
  }
  return sum;
}

}  // namespace

TruncatedState coherent_state(Complex alpha, int n_fock) {
  if (n_fock < 1) throw ValidationError("coherent_state: n_fock must be positive");
  Eigen::VectorXcd psi(n_fock);
  psi(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < n_fock; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  TruncatedState out{DensityMatrix::pure(psi), poisson_tail(std::norm(alpha), n_fock), {}};
  if (out.leakage > kLeakageWarning) {
    out.warnings.push_back(leakage_warning("coherent", out.leakage, n_fock));
  }
  return out;
}

TruncatedState thermal_mode_state(double beta, double nu, int n_fock) {
  if (!(beta > 0.0)) throw ValidationError("thermal state requires beta2 > 0");
  if (!(nu > 0.0)) throw ValidationError("thermal state requires nu > 0");
  const double q = std::exp(-beta * nu);
  Operator rho = Operator::Zero(n_fock, n_fock);
  double z = 0.0;
  double w = 1.0;
  for (int n = 0; n < n_fock; ++n) {
    rho(n, n) = w;
    z += w;
    w *= q;
  }
  rho /= z;
  TruncatedState out{DensityMatrix(rho), std::pow(q, n_fock), {}};
  if (out.leakage > kLeakageWarning) {
    out.warnings.push_back(leakage_warning("thermal", out.leakage, n_fock));
  }
  return out;
}

TruncatedState mode_state(const ModeState& m, const ModelParams& p) {
  switch (m.kind) {
    case ModeState::Kind::Fock: {
      if (m.n < 0 || m.n >= p.n_fock) {
        throw ValidationError("Fock index " + std::to_string(m.n) + " outside [0, " +
                              std::to_string(p.n_fock - 1) + "]");
      }
      Operator rho = Operator::Zero(p.n_fock, p.n_fock);
      rho(m.n, m.n) = 1.0;
      return {DensityMatrix(rho), 0.0, {}};
    }
    case ModeState::Kind::Coherent:
      return coherent_state(Complex(m.x0, 0.0), p.n_fock);
    case ModeState::Kind::Thermal:
      return thermal_mode_state(m.beta2, p.nu, p.n_fock);
  }
  throw ValidationError("unknown mode state");
}

TruncatedState initial_state(const SpinState& spin, const ModeState& mode, const ModelParams& p) {
  if (p.n_fock < 2) throw ValidationError("initial_state: n_fock must be >= 2");
  const DensityMatrix rho1 = spin_state(spin);
  TruncatedState rho2 = mode_state(mode, p);
  return {DensityMatrix(kron(rho1.op(), rho2.rho.op())), rho2.leakage, std::move(rho2.warnings)};
}

double bose_occupation(double beta, double energy) {
  return 1.0 / std::expm1(beta * energy);
}

BathSpec thermal_qubit_bath(double beta, double gap, double gamma0) {
  if (!(beta > 0.0)) throw ValidationError("thermal_qubit_bath: beta must be > 0");
  if (!(gap > 0.0)) throw ValidationError("thermal_qubit_bath: gap must be > 0");
  if (!(gamma0 > 0.0)) throw ValidationError("thermal_qubit_bath: gamma0 must be > 0");
  const double nbar = bose_occupation(beta, gap);
  return {Partition::First,
          {{spin::sigma_minus(), gamma0 * (nbar + 1.0)}, {spin::sigma_plus(), gamma0 * nbar}},
          beta};
}

BathSpec thermal_oscillator_bath(double beta, double nu, double gamma0, int n_fock,
                                 Partition partition) {
  if (!(beta > 0.0)) throw ValidationError("thermal_oscillator_bath: beta must be > 0");
  if (!(nu > 0.0)) throw ValidationError("thermal_oscillator_bath: nu must be > 0");
  if (!(gamma0 > 0.0)) throw ValidationError("thermal_oscillator_bath: gamma0 must be > 0");
  const double nbar = bose_occupation(beta, nu);
  return {partition,
          {{oscillator::annihilation(n_fock), gamma0 * (nbar + 1.0)},
           {oscillator::creation(n_fock), gamma0 * nbar}},
          beta};
}

}  // namespace lembas
