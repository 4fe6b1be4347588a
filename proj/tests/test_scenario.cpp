#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lembas/scenario.hpp"

using namespace lembas;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kMinimal = R"(
[model]
kind = dispersive
omega0 = 1
nu = 1
g = 0.1
n_fock = 6

[initial]
spin = superposition
theta = 1.0
mode = thermal
beta2 = 1

[evolution]
t_final = 2
dt = 0.05
)";

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

std::string scenario_path(const std::string& name) {
  return std::string(LEMBAS_SCENARIO_DIR) + "/" + name + ".scenario";
}

}  // namespace

TEST_CASE("parse a minimal scenario", "[scenario]") {
  const ScenarioConfig cfg = parse_config(kMinimal, "minimal");
  CHECK(cfg.name == "minimal");
  CHECK(cfg.kind == ModelKind::Dispersive);
  CHECK(cfg.params.n_fock == 6);
  CHECK(cfg.spin.kind == SpinState::Kind::Superposition);
  CHECK(cfg.spin.theta == 1.0);
  CHECK(cfg.mode.kind == ModeState::Kind::Thermal);
  CHECK(cfg.t_final == 2.0);
  CHECK(cfg.integrator == Integrator::ExactExp);
  CHECK(cfg.baths.empty());
  CHECK(cfg.decomposition);

  const ScenarioConfig kt = parse_config(replace(kMinimal, "beta2 = 1", "kT = 4"));
  CHECK(kt.mode.beta2 == 0.25);

  const ScenarioConfig periods = parse_config(replace(kMinimal, "t_final = 2", "periods = 2"));
  CHECK_THAT(periods.t_final, WithinAbs(4 * std::acos(-1.0), 1e-12));

  const ScenarioConfig open = parse_config(kMinimal + "\n[bath.1]\npartition = 1\ntype = thermal_qubit\nbeta = 1\ngamma0 = 0.1\n");
  CHECK(open.integrator == Integrator::RK4);
  REQUIRE(open.baths.size() == 1);
  CHECK(build_baths(open).front().partition == Partition::First);
}

TEST_CASE("scenario validation errors", "[scenario]") {
  const auto bad_partition = errors_of(kMinimal + "\n[bath.1]\npartition = 3\ntype = thermal_qubit\nbeta = 1\ngamma0 = 0.1\n");
  REQUIRE(bad_partition.size() == 1);
  CHECK_THAT(bad_partition.front(), ContainsSubstring("bath.1.partition"));
  CHECK_THAT(bad_partition.front(), ContainsSubstring("partition must be 1 or 2"));

  // every problem is reported at once
  std::string many = replace(kMinimal, "g = 0.1", "g = abc");
  many = replace(many, "n_fock = 6", "n_fock = 1");
  many = replace(many, "dt = 0.05", "dt = -1");
  const auto errs = errors_of(many);
  CHECK(errs.size() >= 3);
  CHECK(any_contains(errs, "model.g"));
  CHECK(any_contains(errs, "model.n_fock"));
  CHECK(any_contains(errs, "evolution.dt"));

  CHECK(any_contains(errors_of(kMinimal + "\n[extra]\nfoo = 1\n"), "extra"));
  CHECK(any_contains(errors_of(replace(kMinimal, "nu = 1", "nu = 1\ncolour = red")), "colour"));
  CHECK(any_contains(errors_of(replace(kMinimal, "beta2 = 1", "beta2 = 1\nkT = 1")), "beta2"));
  CHECK(any_contains(errors_of(replace(kMinimal, "g = 0.1", "g = 0.1\nV = 0.3")), "V"));
  CHECK(any_contains(errors_of(replace(kMinimal, "kind = dispersive", "kind = lattice")), "kind"));
  CHECK(any_contains(errors_of(replace(kMinimal, "t_final = 2", "")), "t_final"));

  const std::string two_baths = kMinimal +
                                "\n[bath.1]\npartition = 1\ntype = thermal_qubit\nbeta = 1\ngamma0 = 0.1\n"
                                "\n[bath.2]\npartition = 2\ntype = thermal_oscillator\nbeta = 1\ngamma0 = 0.1\n";
  CHECK_NOTHROW(parse_config(two_baths));
  CHECK(!parse_config(two_baths).decomposition);
  CHECK(any_contains(errors_of(two_baths + "\n[outputs]\ndecomposition = true\n"), "decomposition"));
  CHECK(any_contains(
      errors_of(kMinimal + "\n[bath.1]\npartition = 2\ntype = thermal_qubit\nbeta = 1\ngamma0 = 0.1\n"),
      "bath.1"));
  CHECK(any_contains(errors_of(kMinimal + "\n[outputs]\ncolumns = t, nope\n"), "nope"));
  CHECK(any_contains(errors_of(replace(kMinimal, "dt = 0.05", "dt = 0.05\nintegrator = exact") +
                               "\n[bath.1]\npartition = 1\ntype = thermal_qubit\nbeta = 1\ngamma0 = 0.1\n"),
                     "evolution.integrator"));
}

TEST_CASE("shipped scenario files", "[scenario]") {
  const ScenarioConfig fig2 = load_config(scenario_path("fig2"));
  CHECK(fig2.name == "fig2");
  CHECK(fig2.kind == ModelKind::SpinBosonMode);
  CHECK(fig2.params.omega0 == 150.0);
  CHECK(fig2.params.V == 50.0);
  CHECK(fig2.params.nu == 180.0);
  CHECK(fig2.params.g == 50.0);
  CHECK_THAT(fig2.mode.beta2, WithinAbs(1.0 / 208.5, 1e-15));
  CHECK(fig2.spin.kind == SpinState::Kind::Excited);

  for (const auto& entry : std::filesystem::directory_iterator(LEMBAS_SCENARIO_DIR)) {
    INFO(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
  }
  CHECK_THROWS(load_config(scenario_path("does_not_exist")));
}

TEST_CASE("decoupled scenario has no energy exchange", "[scenario]") {
  const ScenarioConfig cfg = parse_config(replace(kMinimal, "g = 0.1", "g = 0"));
  const ScenarioResult res = run_scenario(cfg);
  for (const auto& s : res.trajectory.samples) {
    CHECK(std::abs(s.w1) + std::abs(s.w2) + std::abs(s.q1) + std::abs(s.q2) <= 1e-12);
  }
  for (const auto& e : res.entropy) {
    CHECK(std::abs(e.s_irr) <= 1e-10);
    CHECK(std::abs(e.s_rev) <= 1e-12);
  }
  CHECK(res.summary.all_passed());
}

TEST_CASE("CSV output", "[scenario]") {
  const ScenarioConfig cfg = parse_config(kMinimal, "csv");
  const ScenarioResult a = run_scenario(cfg);
  const ScenarioResult b = run_scenario(cfg);
  std::ostringstream sa, sb;
  write_csv(sa, a.trajectory, a.entropy);
  write_csv(sb, b.trajectory, b.entropy);
  CHECK(sa.str() == sb.str());

  std::istringstream lines(sa.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("t,W1dot,Q1dot,W2dot,Q2dot", 0) == 0);
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == a.trajectory.samples.size());
  CHECK(sa.str().find('\r') == std::string::npos);

  std::ostringstream empty;
  write_csv(empty, Trajectory{}, {});
  const std::string header_only = empty.str();
  CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);

  std::ostringstream picked;
  write_csv(picked, a.trajectory, a.entropy, {"t", "dS_irr"});
  CHECK(picked.str().rfind("t,dS_irr\n0,", 0) == 0);

  std::ostringstream no_entropy;
  write_csv(no_entropy, a.trajectory, {}, {"dS_irr"});
  CHECK_THAT(no_entropy.str(), ContainsSubstring("nan"));

  std::ostringstream sink;
  CHECK_THROWS_AS(write_csv(sink, a.trajectory, a.entropy, {"bogus"}), ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "lembas_test_scenario.csv";
  emit_csv(a.trajectory, a.entropy, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream file;
  file << in.rdbuf();
  CHECK(file.str() == sa.str());
  std::filesystem::remove(path);
  CHECK_THROWS(emit_csv(a.trajectory, a.entropy, "/nonexistent_dir/x.csv"));
}

TEST_CASE("summary JSON", "[scenario]") {
  const ScenarioResult res = run_scenario(parse_config(kMinimal, "json"));
  const nlohmann::json j = to_json(res.summary);
  for (const char* key : {"scenario", "commutation_class", "max_energy_drift", "max_first_law_residual",
                          "max_cumulative_first_law_residual", "max_heat_form_residual",
                          "clausius_counterexamples", "verdicts", "warnings", "wall_clock_seconds",
                          "all_passed"}) {
    INFO(key);
    CHECK(j.contains(key));
  }
  CHECK(j["scenario"] == "json");
  REQUIRE(j["verdicts"].is_array());
  for (const auto& v : j["verdicts"]) {
    CHECK(v.contains("name"));
    CHECK(v.contains("detail"));
    const std::string status = v["status"];
    CHECK((status == "pass" || status == "fail" || status == "n/a"));
  }
  CHECK(res.summary.find("energy_conservation") != nullptr);
  CHECK(res.summary.find("first_law") != nullptr);
  CHECK(res.summary.find("no_such_verdict") == nullptr);
}
