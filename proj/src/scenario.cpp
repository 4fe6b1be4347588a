#include "lembas/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace lembas {

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Pass: return "pass";
    case VerdictStatus::Fail: return "fail";
    case VerdictStatus::NotApplicable: return "n/a";
  }
  return "?";
}

bool RunSummary::all_passed() const {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const Verdict& v) { return v.status == VerdictStatus::Fail; });
}

const Verdict* RunSummary::find(std::string_view name) const {
  for (const auto& v : verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Tracks the worst value of a per-sample quantity against a bound.
struct Bound {
  std::string label;
  double limit;
  double worst = 0.0;
  double at = 0.0;

  void see(double value, double t) {
    if (std::isnan(value) || std::abs(value) > worst) {
      worst = std::isnan(value) ? std::numeric_limits<double>::infinity() : std::abs(value);
      at = t;
    }
  }
  Verdict verdict(const std::string& name) const {
    const bool ok = worst <= limit;
    return {name, ok ? VerdictStatus::Pass : VerdictStatus::Fail,
            "max " + label + " = " + fmt(worst) + (ok ? "" : " at t = " + fmt(at)) +
                " (limit " + fmt(limit) + ")"};
  }
};

Verdict not_applicable(const std::string& name, const std::string& why) {
  return {name, VerdictStatus::NotApplicable, why};
}

bool has_bath_on(const ScenarioConfig& cfg, Partition p) {
  return std::any_of(cfg.baths.begin(), cfg.baths.end(),
                     [p](const BathConfig& b) { return b.partition == p; });
}

// W_s = sum_i <F_s,i> Tr{F_o,i L_o[rho_o]} for a fully commuting interaction,
// where F are the interaction factors and L_o the baths on the other side.
double relaxation_work(const FluxCalculator& calc, const DensityMatrix& state, Partition side) {
  const BipartiteSystem& sys = calc.system();
  const Dims dims = sys.dims();
  const Partition o = other(side);
  const Operator rho_s = partial_trace(state.op(), dims, side);
  const Operator rho_o = partial_trace(state.op(), dims, o);
  const Operator dissipated = calc.bath_dissipator(rho_o, o);
  double w = 0.0;
  for (const auto& term : sys.interaction()) {
    const Operator& fs = side == Partition::First ? term.a : term.b;
    const Operator& fo = side == Partition::First ? term.b : term.a;
    w += trace_product(fs, rho_s).real() * trace_product(fo, dissipated).real();
  }
  return w;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  ScenarioResult result;
  RunSummary& summary = result.summary;
  summary.scenario = cfg.name;

  const BipartiteSystem sys = build_system(cfg);
  const std::vector<BathSpec> baths = build_baths(cfg);
  const CommutationClass cls = classify(sys);
  result.commutation_class = cls;
  summary.commutation_class = to_string(cls);

  const TruncatedState init = initial_state(cfg.spin, cfg.mode, cfg.params);
  summary.warnings = init.warnings;

  const bool closed = baths.empty();
  const double scale = max_norm(sys.hamiltonian());
  const double tol = 1e-8 * scale;

  const FluxCalculator calc(sys, baths);
  std::optional<EntropyTracker> tracker;
  if (cfg.decomposition) tracker.emplace(init.rho, sys.dims());

  Bound relax1{"|W1 - relaxation form|", 1e-9};
  Bound relax2{"|W2 - relaxation form|", 1e-9};
  const bool check_relaxation = !closed && cls == CommutationClass::FullyCommuting;

  EvolutionSpec spec{sys, baths, cfg.t_final, cfg.dt, cfg.sample_every, cfg.integrator};
  result.trajectory = run(spec, init.rho, [&](const FluxSample& s, const DensityMatrix& rho) {
    if (tracker) tracker->observe(s, rho);
    if (check_relaxation) {
      relax1.see(s.w1 - relaxation_work(calc, rho, Partition::First), s.t);
      relax2.see(s.w2 - relaxation_work(calc, rho, Partition::Second), s.t);
    }
  });
  const Trajectory& traj = result.trajectory;
  if (tracker) {
    result.entropy = tracker->take();
    attach_beta_star(result.entropy, traj);
  }

  auto over = [&](const std::function<double(const FluxSample&)>& f, Bound b) {
    for (const auto& s : traj.samples) b.see(f(s), s.t);
    return b;
  };

  // Conservation and bookkeeping.
  auto& V = summary.verdicts;
  const double e0 = traj.samples.empty() ? 0.0 : traj.samples.front().e_total;
  for (const auto& s : traj.samples) {
    summary.max_energy_drift =
        std::max(summary.max_energy_drift, std::abs(s.e_total - e0) / std::max(std::abs(e0), 1.0));
    summary.max_first_law_residual =
        std::max(summary.max_first_law_residual,
                 s.first_law_residual / std::max({std::abs(s.u1), std::abs(s.u2), 1.0}));
    summary.max_heat_form_residual = std::max(summary.max_heat_form_residual, s.heat_form_residual);
  }
  for (const auto& c : traj.running) {
    summary.max_cumulative_first_law_residual =
        std::max({summary.max_cumulative_first_law_residual, std::abs(c.du1 - (c.w1 + c.q1)),
                  std::abs(c.du2 - (c.w2 + c.q2))});
  }
  if (closed) {
    Bound b{"relative energy drift", 1e-8};
    b.worst = summary.max_energy_drift;
    V.push_back(b.verdict("energy_conservation"));
  } else {
    V.push_back(not_applicable("energy_conservation", "energy is exchanged with a bath"));
  }
  {
    Bound b{"relative first-law residual", 1e-6};
    b.worst = summary.max_first_law_residual;
    V.push_back(b.verdict("first_law"));
  }
  V.push_back(over([](const FluxSample& s) { return s.heat_form_residual; },
                   {"|internal heat - reduced form|", 1e-9})
                  .verdict("heat_form_equivalence"));
  {
    double worst_trace = 0.0, worst_eig = 0.0;
    for (const auto& s : traj.samples) {
      worst_trace = std::max(worst_trace, s.trace_err);
      worst_eig = std::min(worst_eig, s.min_eig);
    }
    const bool ok = worst_trace <= 1e-8 && worst_eig >= -1e-8;
    V.push_back({"integrator_health", ok ? VerdictStatus::Pass : VerdictStatus::Fail,
                 "max trace error " + fmt(worst_trace) + ", min eigenvalue " + fmt(worst_eig)});
  }

  // Flux structure expected from the commutation class.
  auto q_internal1 = [](const FluxSample& s) { return s.q1 - s.q1_bath; };
  auto q_internal2 = [](const FluxSample& s) { return s.q2 - s.q2_bath; };
  auto work_sum = [](const FluxSample& s) { return s.w1 + s.w2; };
  auto heat_sum = [](const FluxSample& s) { return s.q1 + s.q2; };

  switch (cls) {
    case CommutationClass::FullyCommuting: {
      if (closed) {
        V.push_back(over(
                        [](const FluxSample& s) {
                          return std::max({std::abs(s.w1), std::abs(s.w2), std::abs(s.q1),
                                           std::abs(s.q2)});
                        },
                        {"|flux|", tol})
                        .verdict("all_fluxes_zero"));
      } else {
        V.push_back(over(
                        [&](const FluxSample& s) {
                          return std::max(std::abs(q_internal1(s)), std::abs(q_internal2(s)));
                        },
                        {"|internal heat|", tol})
                        .verdict("internal_heat_zero"));
        Bound relax = relax1.worst >= relax2.worst ? relax1 : relax2;
        V.push_back(relax.verdict("bath_relaxation_work"));
        double gamma_min = std::numeric_limits<double>::infinity();
        for (const auto& b : cfg.baths) gamma_min = std::min(gamma_min, b.gamma0);
        if (cfg.t_final >= 10.0 / gamma_min && !traj.samples.empty()) {
          const FluxSample& s = traj.samples.back();
          Bound b{"|flux| at t_final", 1e-7};
          for (double f : {s.w1, s.w2, s.q1, s.q2, s.q1_bath, s.q2_bath}) b.see(f, s.t);
          V.push_back(b.verdict("steady_state"));
        } else {
          V.push_back(not_applicable("steady_state", "t_final < 10 / gamma0"));
        }
      }
      break;
    }
    case CommutationClass::PartiallyCommuting1:
    case CommutationClass::PartiallyCommuting2: {
      const Partition commuting = cls == CommutationClass::PartiallyCommuting1
                                      ? Partition::First
                                      : Partition::Second;
      const Partition moving = other(commuting);
      const bool bath_free = !has_bath_on(cfg, commuting);
      auto heat = [&](const FluxSample& s) {
        const double internal = commuting == Partition::First ? q_internal1(s) : q_internal2(s);
        const double total = commuting == Partition::First ? s.q1 : s.q2;
        return bath_free ? std::max(std::abs(internal), std::abs(total)) : std::abs(internal);
      };
      V.push_back(over(heat, {"|commuting-side heat|", tol}).verdict("commuting_side_heat_zero"));

      // W1 + W2 = 0 needs the non-commuting side to be free of baths and its
      // interaction factors to have no part inside its local eigenspaces.
      bool pinched_zero = true;
      const Pinching& pinch = calc.pinching(moving);
      for (const auto& term : sys.interaction()) {
        const Operator& f = moving == Partition::First ? term.a : term.b;
        if (max_norm(pinch(f)) > 1e-12 * std::max(max_norm(f), 1.0)) pinched_zero = false;
      }
      if (has_bath_on(cfg, moving)) {
        V.push_back(not_applicable("work_sum_zero", "the non-commuting partition has a bath"));
      } else if (!pinched_zero) {
        V.push_back(not_applicable("work_sum_zero",
                                   "interaction factor has a commuting part on the "
                                   "non-commuting partition"));
      } else {
        V.push_back(over(work_sum, {"|W1 + W2|", tol}).verdict("work_sum_zero"));
      }
      break;
    }
    case CommutationClass::NonCommuting: {
      if (!satisfies_resonance_condition(sys)) {
        V.push_back(not_applicable("work_sum_zero", "resonance condition not satisfied"));
        V.push_back(not_applicable("heat_sum_zero", "resonance condition not satisfied"));
      } else if (!closed) {
        V.push_back(not_applicable("work_sum_zero", "open system"));
        V.push_back(not_applicable("heat_sum_zero", "open system"));
      } else {
        V.push_back(over(work_sum, {"|W1 + W2|", tol}).verdict("work_sum_zero"));
        V.push_back(over(heat_sum, {"|Q1 + Q2|", tol}).verdict("heat_sum_zero"));
      }
      break;
    }
  }

  // Entropy.
  if (!tracker) {
    V.push_back(not_applicable("entropy_decomposition", "decomposition disabled"));
    V.push_back(not_applicable("entropy_production_nonnegative", "decomposition disabled"));
    V.push_back(not_applicable("reversible_thermal_identity", "decomposition disabled"));
  } else {
    Bound identity{"|dS1 - (dS_irr + dS_rev + dS_joint)|", 1e-8};
    Bound negative{"negative part of dS_irr", 1e-10};
    std::size_t finite = 0, finite_later = 0;
    for (const auto& r : result.entropy) {
      if (r.support_violation) continue;
      ++finite;
      if (r.t > 0.0) ++finite_later;
      identity.see(r.delta_s1 - (r.s_irr + r.s_rev + r.s_joint), r.t);
      negative.see(std::min(r.s_irr, 0.0), r.t);
    }
    if (finite_later == 0 && finite < result.entropy.size()) {
      const std::string why =
          "relative entropy is infinite after t = 0: rho2(0) is rank deficient";
      V.push_back(not_applicable("entropy_decomposition", why));
      V.push_back(not_applicable("entropy_production_nonnegative", why));
    } else {
      V.push_back(identity.verdict("entropy_decomposition"));
      V.push_back(negative.verdict("entropy_production_nonnegative"));
    }
    if (finite < result.entropy.size()) {
      summary.warnings.push_back(std::to_string(result.entropy.size() - finite) +
                                 " samples have infinite entropy production (support violation)");
    }

    if (cfg.mode.kind == ModeState::Kind::Thermal) {
      const std::vector<double> thermal =
          reversible_thermal_form(traj, cfg.mode.beta2, sys.h2());
      Bound b{"|dS_rev + beta2 d<H2>|", 1e-8};
      for (std::size_t k = 0; k < thermal.size() && k < result.entropy.size(); ++k) {
        if (!result.entropy[k].support_violation) {
          b.see(result.entropy[k].s_rev - thermal[k], result.entropy[k].t);
        }
      }
      V.push_back(b.verdict("reversible_thermal_identity"));
    } else {
      V.push_back(not_applicable("reversible_thermal_identity", "mode does not start thermal"));
    }
  }

  summary.clausius_counterexamples = clausius_diagnostic(traj).counterexamples.size();
  summary.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "t",     "W1dot", "Q1dot", "W2dot",  "Q2dot",  "Q1dot_bath", "U1",        "U2",
      "W1cum", "Q1cum", "S1",    "dS1",    "dS_irr", "dS_rev",     "corr_norm", "E_total",
      "trace_err", "min_eig"};
  return cols;
}

void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<EntropyRecord>& entropy,
               const std::vector<std::string>& columns) {
  const std::vector<std::string>& cols = columns.empty() ? csv_columns() : columns;
  using Getter = std::function<double(std::size_t)>;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto ent = [&](double EntropyRecord::*field) -> Getter {
    return [&, field](std::size_t k) { return k < entropy.size() ? entropy[k].*field : nan; };
  };
  auto smp = [&](double FluxSample::*field) -> Getter {
    return [&, field](std::size_t k) { return traj.samples[k].*field; };
  };
  const std::map<std::string, Getter> getters = {
      {"t", smp(&FluxSample::t)},
      {"W1dot", smp(&FluxSample::w1)},
      {"Q1dot", smp(&FluxSample::q1)},
      {"W2dot", smp(&FluxSample::w2)},
      {"Q2dot", smp(&FluxSample::q2)},
      {"Q1dot_bath", smp(&FluxSample::q1_bath)},
      {"U1", smp(&FluxSample::u1)},
      {"U2", smp(&FluxSample::u2)},
      {"W1cum", [&](std::size_t k) { return traj.running[k].w1; }},
      {"Q1cum", [&](std::size_t k) { return traj.running[k].q1; }},
      {"S1", smp(&FluxSample::s1)},
      {"dS1", ent(&EntropyRecord::delta_s1)},
      {"dS_irr", ent(&EntropyRecord::s_irr)},
      {"dS_rev", ent(&EntropyRecord::s_rev)},
      {"corr_norm", smp(&FluxSample::corr_norm)},
      {"E_total", smp(&FluxSample::e_total)},
      {"trace_err", smp(&FluxSample::trace_err)},
      {"min_eig", smp(&FluxSample::min_eig)},
  };
  std::vector<const Getter*> row;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto it = getters.find(cols[i]);
    if (it == getters.end()) throw ValidationError("write_csv: unknown column '" + cols[i] + "'");
    row.push_back(&it->second);
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt((*row[i])(k));
    out << '\n';
  }
}

void emit_csv(const Trajectory& traj, const std::vector<EntropyRecord>& entropy,
              const std::filesystem::path& path, const std::vector<std::string>& columns) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_csv(out, traj, entropy, columns);
  out.flush();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : s.verdicts) {
    verdicts.push_back({{"name", v.name}, {"status", to_string(v.status)}, {"detail", v.detail}});
  }
  return {{"scenario", s.scenario},
          {"commutation_class", s.commutation_class},
          {"max_energy_drift", s.max_energy_drift},
          {"max_first_law_residual", s.max_first_law_residual},
          {"max_cumulative_first_law_residual", s.max_cumulative_first_law_residual},
          {"max_heat_form_residual", s.max_heat_form_residual},
          {"clausius_counterexamples", s.clausius_counterexamples},
          {"verdicts", verdicts},
          {"warnings", s.warnings},
          {"wall_clock_seconds", s.wall_clock_seconds},
          {"all_passed", s.all_passed()}};
}

}  // namespace lembas
