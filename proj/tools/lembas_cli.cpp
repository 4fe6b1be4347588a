#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "lembas/scenario.hpp"

namespace {

constexpr const char* kVersion = "lembas 1.0.0";

void print_summary(const lembas::RunSummary& s, std::ostream& out) {
  out << "scenario " << s.scenario << " (" << s.commutation_class << ")\n";
  std::size_t width = 0;
  for (const auto& v : s.verdicts) width = std::max(width, v.name.size());
  for (const auto& v : s.verdicts) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << v.name << "  "
        << std::setw(4) << lembas::to_string(v.status) << "  " << v.detail << '\n';
  }
  out << "  clausius counterexamples: " << s.clausius_counterexamples << '\n';
  out << "  wall clock: " << s.wall_clock_seconds << " s\n";
}

int run_command(const std::string& file, std::string out_path, const std::string& json_path) {
  const lembas::ScenarioConfig cfg = lembas::load_config(file);
  const lembas::ScenarioResult result = lembas::run_scenario(cfg);
  for (const auto& w : result.summary.warnings) std::cerr << "warning: " << w << '\n';

  if (out_path.empty()) out_path = cfg.csv_path.empty() ? cfg.name + ".csv" : cfg.csv_path;
  lembas::emit_csv(result.trajectory, result.entropy, out_path, cfg.columns);

  if (!json_path.empty()) {
    std::ofstream js(json_path);
    if (!js) throw lembas::Error("cannot open '" + json_path + "' for writing");
    js << lembas::to_json(result.summary).dump(2) << '\n';
  }
  print_summary(result.summary, std::cout);
  return result.summary.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local energy flux analysis for bipartite quantum systems"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string file, out_path, json_path;
  auto* run = app.add_subcommand("run", "Run a scenario and write its CSV time series");
  run->add_option("scenario", file, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "CSV output path (default <name>.csv)");
  run->add_option("--summary-json", json_path, "Write the run summary as JSON");

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", file, "Scenario file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const lembas::ScenarioConfig cfg = lembas::load_config(file);
      std::cout << file << ": ok (" << lembas::to_string(cfg.kind) << ", " << cfg.baths.size()
                << " bath" << (cfg.baths.size() == 1 ? "" : "s") << ")\n";
      return 0;
    }
    return run_command(file, out_path, json_path);
  } catch (const lembas::ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << file << ": " << msg << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
