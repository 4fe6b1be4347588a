#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lembas/scenario.hpp"

namespace lembas {

namespace {

namespace pt = boost::property_tree;

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Reads the keys of one section, remembering which were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(std::string path, const pt::ptree* node, std::vector<std::string>& errors)
      : path_(std::move(path)), node_(node), errors_(errors) {}

  bool present() const { return node_ != nullptr; }
  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::optional<std::string> string(const std::string& key) {
    auto v = raw(key);
    used_.insert(key);
    return v;
  }

  std::optional<double> number(const std::string& key) {
    auto v = string(key);
    if (!v) return std::nullopt;
    double x = 0.0;
    const std::string s = trim(*v);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      error(key, "expected a number, got '" + *v + "'");
      return std::nullopt;
    }
    if (!std::isfinite(x)) {
      error(key, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<int> integer(const std::string& key) {
    auto v = string(key);
    if (!v) return std::nullopt;
    int x = 0;
    const std::string s = trim(*v);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      error(key, "expected an integer, got '" + *v + "'");
      return std::nullopt;
    }
    return x;
  }

  std::optional<bool> boolean(const std::string& key) {
    auto v = string(key);
    if (!v) return std::nullopt;
    const std::string s = trim(*v);
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    error(key, "expected true or false, got '" + *v + "'");
    return std::nullopt;
  }

  template <typename T>
  T required(std::optional<T> v, const std::string& key, T fallback) {
    if (!v && !has(key)) error(key, "required field is missing");
    return v.value_or(fallback);
  }

  void error(const std::string& key, const std::string& msg) {
    errors_.push_back(path_ + "." + key + ": " + msg);
  }

  void reject_unknown() {
    if (!node_) return;
    for (const auto& [key, child] : *node_) {
      if (!used_.count(key)) error(key, "unknown key");
    }
  }

 private:
  std::optional<std::string> raw(const std::string& key) const {
    if (!node_) return std::nullopt;
    const auto it = node_->find(key);
    if (it == node_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  std::string path_;
  const pt::ptree* node_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

// beta or kT (k_B T in energy units), exactly one.
std::optional<double> inverse_temperature(Section& s, const std::string& beta_key, bool required) {
  const bool has_beta = s.has(beta_key);
  const bool has_kt = s.has("kT");
  if (has_beta && has_kt) {
    s.error(beta_key, "give either " + beta_key + " or kT, not both");
    s.string(beta_key), s.string("kT");
    return std::nullopt;
  }
  if (has_kt) {
    const auto kt = s.number("kT");
    if (!kt) return std::nullopt;
    if (*kt <= 0.0) {
      s.error("kT", "must be > 0");
      return std::nullopt;
    }
    return 1.0 / *kt;
  }
  if (has_beta) {
    const auto b = s.number(beta_key);
    if (b && *b <= 0.0) {
      s.error(beta_key, "must be > 0");
      return std::nullopt;
    }
    return b;
  }
  if (required) s.error(beta_key, "required field is missing (or give kT)");
  return std::nullopt;
}

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
  const auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : Error("invalid scenario:\n  " + join(errors, "\n  ")), errors_(std::move(errors)) {}

ScenarioConfig parse_config(std::string_view text, const std::string& default_name) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
  }

  std::vector<std::string> errors;
  ScenarioConfig cfg;
  cfg.name = default_name;

  static const std::set<std::string> kSections = {"model", "initial", "evolution", "outputs"};
  std::vector<std::pair<std::string, const pt::ptree*>> bath_nodes;
  for (const auto& [name, node] : root) {
    if (!node.data().empty() && node.empty()) {
      errors.push_back(name + ": keys must live inside a section");
    } else if (name.rfind("bath.", 0) == 0 && name.size() > 5) {
      bath_nodes.emplace_back(name, &node);
    } else if (!kSections.count(name)) {
      errors.push_back(name + ": unknown section");
    }
  }

  // [model]
  Section model("model", child(root, "model"), errors);
  if (!model.present()) errors.push_back("model: required section is missing");
  {
    const auto kind = model.string("kind");
    static const std::map<std::string, ModelKind> kKinds = {
        {"dispersive", ModelKind::Dispersive},
        {"displaced", ModelKind::Displaced},
        {"jaynes_cummings", ModelKind::JaynesCummings},
        {"spin_boson_mode", ModelKind::SpinBosonMode}};
    if (!kind) {
      if (model.present()) model.error("kind", "required field is missing");
    } else if (auto it = kKinds.find(*kind); it == kKinds.end()) {
      model.error("kind", "unknown model kind '" + *kind +
                              "' (dispersive, displaced, jaynes_cummings, spin_boson_mode)");
    } else {
      cfg.kind = it->second;
    }
    if (model.present()) {
      cfg.params.omega0 = model.required(model.number("omega0"), "omega0", 1.0);
      cfg.params.nu = model.required(model.number("nu"), "nu", 1.0);
      cfg.params.g = model.required(model.number("g"), "g", 0.0);
      cfg.params.V = model.number("V").value_or(0.0);
      cfg.params.n_fock = model.integer("n_fock").value_or(20);
    }
    if (cfg.params.n_fock < 2) model.error("n_fock", "must be >= 2");
    if (cfg.params.nu <= 0.0) model.error("nu", "must be > 0");
    if (cfg.params.V != 0.0 && cfg.kind != ModelKind::SpinBosonMode) {
      model.error("V", "tunnelling only applies to kind = spin_boson_mode");
    }
    model.reject_unknown();
  }

  // [initial]
  Section init("initial", child(root, "initial"), errors);
  if (!init.present()) errors.push_back("initial: required section is missing");
  if (init.present()) {
    const auto spin = init.string("spin");
    if (!spin) {
      init.error("spin", "required field is missing");
    } else if (*spin == "excited") {
      cfg.spin = SpinState::excited();
    } else if (*spin == "ground") {
      cfg.spin = SpinState::ground();
    } else if (*spin == "mixture") {
      const double c = init.required(init.number("c"), "c", 0.0);
      if (!(c >= 0.0 && c <= 1.0)) init.error("c", "must lie in [0, 1]");
      cfg.spin = SpinState::mixture(c);
      cfg.params.c = c;
    } else if (*spin == "superposition") {
      const double theta = init.required(init.number("theta"), "theta", 0.0);
      cfg.spin = SpinState::superposition(theta, init.number("phi").value_or(0.0));
    } else {
      init.error("spin", "unknown spin state '" + *spin +
                             "' (excited, ground, mixture, superposition)");
    }

    const auto mode = init.string("mode");
    if (!mode) {
      init.error("mode", "required field is missing");
    } else if (*mode == "fock") {
      const int n = init.integer("n").value_or(0);
      if (n < 0 || n >= cfg.params.n_fock) {
        init.error("n", "Fock index must lie in [0, n_fock - 1]");
      }
      cfg.mode = ModeState::fock(n);
    } else if (*mode == "coherent") {
      cfg.params.x0 = init.required(init.number("x0"), "x0", 0.0);
      cfg.mode = ModeState::coherent(cfg.params.x0);
    } else if (*mode == "thermal") {
      const auto beta = inverse_temperature(init, "beta2", true);
      cfg.params.beta2 = beta.value_or(1.0);
      cfg.mode = ModeState::thermal(cfg.params.beta2);
    } else {
      init.error("mode", "unknown mode state '" + *mode + "' (fock, coherent, thermal)");
    }
    init.reject_unknown();
  }

  // [bath.N]
  for (const auto& [name, node] : bath_nodes) {
    Section bath(name, node, errors);
    BathConfig b;
    b.label = name;
    const auto partition = bath.integer("partition");
    if (!partition) {
      if (!bath.has("partition")) bath.error("partition", "required field is missing");
    } else if (*partition != 1 && *partition != 2) {
      bath.error("partition", "partition must be 1 or 2");
    } else {
      b.partition = *partition == 1 ? Partition::First : Partition::Second;
    }
    const auto type = bath.string("type");
    if (!type) {
      bath.error("type", "required field is missing");
    } else if (*type == "thermal_qubit") {
      b.type = BathConfig::Type::ThermalQubit;
      if (partition && *partition == 2) {
        bath.error("type", "thermal_qubit couples to the spin, which is partition 1");
      }
    } else if (*type == "thermal_oscillator") {
      b.type = BathConfig::Type::ThermalOscillator;
      if (partition && *partition == 1) {
        bath.error("type", "thermal_oscillator couples to the mode, which is partition 2");
      }
    } else {
      bath.error("type", "unknown bath type '" + *type + "' (thermal_qubit, thermal_oscillator)");
    }
    b.beta = inverse_temperature(bath, "beta", true).value_or(1.0);
    b.gamma0 = bath.required(bath.number("gamma0"), "gamma0", 0.0);
    if (bath.has("gamma0") && !(b.gamma0 > 0.0)) bath.error("gamma0", "must be > 0");
    bath.reject_unknown();
    cfg.baths.push_back(b);
  }

  // [evolution]
  Section evo("evolution", child(root, "evolution"), errors);
  if (!evo.present()) errors.push_back("evolution: required section is missing");
  if (evo.present()) {
    const bool has_t = evo.has("t_final"), has_p = evo.has("periods");
    if (has_t && has_p) {
      evo.error("t_final", "give either t_final or periods, not both");
      evo.string("t_final"), evo.string("periods");
    } else if (has_p) {
      const double periods = evo.number("periods").value_or(0.0);
      cfg.t_final = periods * 2.0 * std::numbers::pi / cfg.params.nu;
    } else if (has_t) {
      cfg.t_final = evo.number("t_final").value_or(0.0);
    } else {
      evo.error("t_final", "required field is missing (or give periods)");
    }
    if (cfg.t_final < 0.0) evo.error("t_final", "must be >= 0");
    cfg.dt = evo.number("dt").value_or(0.0);
    if (evo.has("dt") && !(cfg.dt > 0.0)) evo.error("dt", "must be > 0");
    cfg.sample_every = evo.integer("sample_every").value_or(1);
    if (cfg.sample_every < 1) evo.error("sample_every", "must be >= 1");
    cfg.integrator = cfg.baths.empty() ? Integrator::ExactExp : Integrator::RK4;
    if (const auto integ = evo.string("integrator")) {
      if (*integ == "exact") {
        cfg.integrator = Integrator::ExactExp;
        if (!cfg.baths.empty()) {
          evo.error("integrator", "exact propagation is only available without baths");
        }
      } else if (*integ == "rk4") {
        cfg.integrator = Integrator::RK4;
      } else {
        evo.error("integrator", "unknown integrator '" + *integ + "' (exact, rk4)");
      }
    }
    evo.reject_unknown();
  }

  // [outputs]
  Section out("outputs", child(root, "outputs"), errors);
  cfg.decomposition = cfg.baths.size() <= 1;
  if (out.present()) {
    if (auto n = out.string("name")) cfg.name = *n;
    cfg.csv_path = out.string("csv").value_or("");
    if (auto d = out.boolean("decomposition")) {
      cfg.decomposition = *d;
      if (*d && cfg.baths.size() > 1) {
        out.error("decomposition",
                  "the entropy decomposition needs unitary or single-bath dynamics; refused "
                  "with two baths");
      }
    }
    if (auto cols = out.string("columns")) {
      std::stringstream ss(*cols);
      std::string col;
      while (std::getline(ss, col, ',')) {
        col = trim(col);
        const auto& known = csv_columns();
        if (std::find(known.begin(), known.end(), col) == known.end()) {
          out.error("columns", "unknown column '" + col + "'");
        } else {
          cfg.columns.push_back(col);
        }
      }
    }
    out.reject_unknown();
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.stem().string());
}

BipartiteSystem build_system(const ScenarioConfig& cfg) { return build_model(cfg.kind, cfg.params); }

std::vector<BathSpec> build_baths(const ScenarioConfig& cfg) {
  std::vector<BathSpec> out;
  for (const auto& b : cfg.baths) {
    if (b.type == BathConfig::Type::ThermalQubit) {
      out.push_back(thermal_qubit_bath(b.beta, cfg.params.omega0, b.gamma0));
    } else {
      out.push_back(
          thermal_oscillator_bath(b.beta, cfg.params.nu, b.gamma0, cfg.params.n_fock, b.partition));
    }
  }
  return out;
}

}  // namespace lembas
