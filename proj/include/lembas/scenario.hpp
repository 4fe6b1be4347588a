#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lembas/dynamics.hpp"
#include "lembas/entropy.hpp"
#include "lembas/models.hpp"

namespace lembas {

struct BathConfig {
  enum class Type { ThermalQubit, ThermalOscillator };
  std::string label;
  Partition partition = Partition::First;
  Type type = Type::ThermalQubit;
  double beta = 1.0;
  double gamma0 = 0.0;
};

/// One runnable scenario. Text form (INI-style, unknown keys rejected):
///
///   [model]      kind, omega0, V, nu, g, n_fock
///   [initial]    spin (+ c | theta, phi), mode (+ n | x0 | beta2 | kT)
///   [bath.N]     partition, type, beta | kT, gamma0
///   [evolution]  t_final | periods, dt, sample_every, integrator
///   [outputs]    name, csv, decomposition, columns
struct ScenarioConfig {
  std::string name = "scenario";
  ModelKind kind = ModelKind::Dispersive;
  ModelParams params;
  SpinState spin;
  ModeState mode;
  std::vector<BathConfig> baths;
  double t_final = 0.0;
  double dt = 0.0;  // 0 = default_dt
  int sample_every = 1;
  Integrator integrator = Integrator::ExactExp;
  std::string csv_path;
  bool decomposition = true;
  std::vector<std::string> columns;  // empty = all
};

/// Every problem found in a scenario document, each prefixed with the path
/// of the offending field (e.g. "bath.1.partition: ...").
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

ScenarioConfig parse_config(std::string_view text, const std::string& default_name = "scenario");
ScenarioConfig load_config(const std::filesystem::path& path);

BipartiteSystem build_system(const ScenarioConfig& cfg);
std::vector<BathSpec> build_baths(const ScenarioConfig& cfg);

enum class VerdictStatus { Pass, Fail, NotApplicable };

std::string to_string(VerdictStatus status);

struct Verdict {
  std::string name;
  VerdictStatus status = VerdictStatus::NotApplicable;
  std::string detail;
};

struct RunSummary {
  std::string scenario;
  std::string commutation_class;
  double max_energy_drift = 0.0;            // max |E(t) - E(0)| / max(|E(0)|, 1)
  double max_first_law_residual = 0.0;      // max |dU/dt - (W + Q)| / max(|U|, 1)
  double max_cumulative_first_law_residual = 0.0;  // max |dU - (W + Q)| over trapezoid integrals
  double max_heat_form_residual = 0.0;
  std::size_t clausius_counterexamples = 0;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  double wall_clock_seconds = 0.0;

  bool all_passed() const;
  const Verdict* find(std::string_view name) const;
};

struct ScenarioResult {
  CommutationClass commutation_class = CommutationClass::FullyCommuting;
  Trajectory trajectory;
  std::vector<EntropyRecord> entropy;  // empty when decomposition is off
  RunSummary summary;
};

/// Deterministic for a fixed config.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Canonical CSV column order.
const std::vector<std::string>& csv_columns();

void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<EntropyRecord>& entropy,
               const std::vector<std::string>& columns = {});
void emit_csv(const Trajectory& traj, const std::vector<EntropyRecord>& entropy,
              const std::filesystem::path& path, const std::vector<std::string>& columns = {});

nlohmann::json to_json(const RunSummary& summary);

}  // namespace lembas
