#include "kmslab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "kmslab/errors.hpp"
#include "kmslab/hash.hpp"

namespace kmslab {

namespace {

constexpr ExperimentKind kKinds[] = {
    ExperimentKind::GaussianDiagnostics, ExperimentKind::KmsFree,    ExperimentKind::KmsGibbs,
    ExperimentKind::KmsLocal,            ExperimentKind::Hierarchy,  ExperimentKind::Stationarity,
    ExperimentKind::Ibp,                 ExperimentKind::DensityOde, ExperimentKind::FiniteDim,
    ExperimentKind::Liouville,           ExperimentKind::Estimates,
};

using json = nlohmann::json;

// Walks a JSON object, reading typed members and rejecting unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a table");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(name(it.key()), "unknown key");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::runtime_error("");
        out = v.get<double>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::runtime_error("");
        out = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::runtime_error("");
        if constexpr (std::is_unsigned_v<T>)
          if (v.get<long long>() < 0) throw std::runtime_error("");
        out = v.get<T>();
      } else {
        out = v.get<T>();
      }
    } catch (const std::exception&) {
      throw ConfigError(name(key), "has the wrong type");
    }
  }

  template <class T>
  void get_optional(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    T value{};
    get(key, value);
    out = value;
  }

  Reader sub(const std::string& key) {
    seen_.insert(key);
    return Reader(j_.at(key), name(key));
  }

  const json& array(const std::string& key) {
    seen_.insert(key);
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(name(key), "expected an array");
    return v;
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

InteractionSpec read_interaction(Reader r, const SamplerBlock& s) {
  InteractionSpec spec;
  std::string variant;
  r.get("variant", variant);
  if (variant.empty()) throw ConfigError("interaction.variant", "is required");
  spec.variant = parse_variant(variant);
  spec.dimension = s.dimension;
  spec.cutoff = s.cutoff;
  spec.beta = s.beta;
  // Shared parameters may be repeated here but must agree with the sampler.
  std::optional<int> d, n;
  std::optional<double> beta;
  r.get_optional("d", d);
  r.get_optional("n", n);
  r.get_optional("beta", beta);
  if (d && *d != s.dimension) throw ConfigError("interaction.d", "disagrees with sampler.d");
  if (n && *n != s.cutoff) throw ConfigError("interaction.n", "disagrees with sampler.n");
  if (beta && *beta != s.beta) throw ConfigError("interaction.beta", "disagrees with sampler.beta");
  r.get("power", spec.power);
  r.get("focusing", spec.focusing);
  r.get_optional("mass_cutoff", spec.mass_cutoff);
  if (r.has("potential")) {
    Reader p = r.sub("potential");
    std::string file;
    p.get("file", file);
    if (!file.empty()) {
      spec.potential = load_potential_csv(file, s.dimension);
    } else {
      double C = 1.0, gamma = 0.0;
      p.get("C", C);
      p.get("gamma", gamma);
      spec.potential = Potential::power_law(C, gamma);
    }
    p.get_optional("bound_C", spec.potential.bound_C);
    p.get_optional("bound_eps", spec.potential.bound_eps);
  }
  return spec;
}

ExperimentConfig from_json(const json& root) {
  ExperimentConfig c;
  Reader r(root, "");
  std::string kind;
  r.get("kind", kind);
  if (kind.empty()) throw ConfigError("kind", "is required");
  c.kind = parse_kind(kind);
  c.has_seed = r.has("seed");
  r.get("seed", c.seed);
  if (r.has("sampler")) {
    Reader s = r.sub("sampler");
    s.get("beta", c.sampler.beta);
    s.get("d", c.sampler.dimension);
    s.get("n", c.sampler.cutoff);
    s.get("samples", c.sampler.samples);
    s.get("wave", c.sampler.wave);
  }
  if (r.has("interaction")) c.interaction = read_interaction(r.sub("interaction"), c.sampler);
  if (r.has("probes")) {
    Reader p = r.sub("probes");
    p.get("count", c.probes.count);
    p.get("amplitude", c.probes.amplitude);
    p.get("max_mode", c.probes.max_mode);
    p.get("hierarchy_max_p", c.probes.hierarchy_max_p);
    p.get("radial_radius", c.probes.radial_radius);
  }
  if (r.has("tolerance")) {
    Reader t = r.sub("tolerance");
    t.get("multiplier", c.tolerance.multiplier);
    t.get("batches", c.tolerance.batches);
    t.get("min_ess_fraction", c.min_ess_fraction);
  }
  if (r.has("dynamics")) {
    Reader d = r.sub("dynamics");
    d.get("dt", c.dynamics.dt);
    d.get("horizon", c.dynamics.horizon);
    d.get("checkpoints", c.dynamics.checkpoints);
  }
  if (r.has("finite_dim")) {
    Reader f = r.sub("finite_dim");
    f.get("modes", c.finite_dim.modes);
    f.get("quartic", c.finite_dim.quartic);
    f.get("perturbation", c.finite_dim.perturbation);
  }
  if (r.has("estimates")) {
    Reader e = r.sub("estimates");
    e.get("conv_probes", c.estimates.conv_probes);
    e.get("truncation", c.estimates.truncation);
    e.get("hyper_p", c.estimates.hyper_p);
    e.get("hyper_samples", c.estimates.hyper_samples);
    if (e.has("conv")) {
      const json& list = e.array("conv");
      for (std::size_t i = 0; i < list.size(); ++i) {
        Reader x(list[i], "estimates.conv[" + std::to_string(i) + "]");
        ConvSpec cs;
        x.get("d", cs.dimension);
        x.get("delta", cs.delta);
        x.get("M", cs.M);
        x.get("rho", cs.rho);
        c.estimates.conv.push_back(cs);
      }
    }
    if (e.has("cauchy")) {
      const json& list = e.array("cauchy");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "estimates.cauchy[" + std::to_string(i) + "]";
        Reader x(list[i], where);
        CauchySpec cs;
        std::string variant;
        x.get("variant", variant);
        if (variant.empty()) throw ConfigError(where + ".variant", "is required");
        cs.variant = parse_variant(variant);
        x.get("d", cs.dimension);
        x.get("power", cs.power);
        x.get("gamma", cs.gamma);
        x.get("levels", cs.levels);
        x.get("samples", cs.samples);
        c.estimates.cauchy.push_back(cs);
      }
    }
  }
  if (r.has("output")) {
    Reader o = r.sub("output");
    o.get("dir", c.out_dir);
  }
  c.validate();
  return c;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::GaussianDiagnostics: return "gaussian-diagnostics";
    case ExperimentKind::KmsFree: return "kms-free";
    case ExperimentKind::KmsGibbs: return "kms-gibbs";
    case ExperimentKind::KmsLocal: return "kms-local";
    case ExperimentKind::Hierarchy: return "hierarchy";
    case ExperimentKind::Stationarity: return "stationarity";
    case ExperimentKind::Ibp: return "ibp";
    case ExperimentKind::DensityOde: return "density-ode";
    case ExperimentKind::FiniteDim: return "finite-dim";
    case ExperimentKind::Liouville: return "liouville";
    case ExperimentKind::Estimates: return "estimates";
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto k : kKinds)
    if (to_string(k) == name) return k;
  throw ConfigError("kind", "unknown experiment '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (!has_seed) throw ConfigError("seed", "is mandatory");
  if (!(sampler.beta > 0.0) || !std::isfinite(sampler.beta)) throw ConfigError("sampler.beta", "must be positive");
  if (sampler.dimension < 1 || sampler.dimension > 3) throw ConfigError("sampler.d", "must be 1, 2 or 3");
  if (sampler.cutoff < 0) throw ConfigError("sampler.n", "must be >= 0");
  if (sampler.samples < 2) throw ConfigError("sampler.samples", "must be >= 2");
  if (probes.count < 1) throw ConfigError("probes.count", "must be >= 1");
  if (!(probes.amplitude > 0.0)) throw ConfigError("probes.amplitude", "must be positive");
  if (probes.hierarchy_max_p < 0) throw ConfigError("probes.hierarchy_max_p", "must be >= 0");
  if (!(probes.radial_radius > 0.0)) throw ConfigError("probes.radial_radius", "must be positive");
  if (!(tolerance.multiplier > 0.0)) throw ConfigError("tolerance.multiplier", "must be positive");
  if (tolerance.batches < 2) throw ConfigError("tolerance.batches", "must be >= 2");
  if (static_cast<std::size_t>(tolerance.batches) > sampler.samples)
    throw ConfigError("tolerance.batches", "exceeds sampler.samples");
  if (min_ess_fraction < 0.0 || min_ess_fraction > 1.0)
    throw ConfigError("tolerance.min_ess_fraction", "must lie in [0, 1]");
  if (!(dynamics.dt > 0.0)) throw ConfigError("dynamics.dt", "must be positive");
  if (!(dynamics.horizon > 0.0)) throw ConfigError("dynamics.horizon", "must be positive");
  if (dynamics.checkpoints < 1) throw ConfigError("dynamics.checkpoints", "must be >= 1");
  if (finite_dim.modes < 1 || finite_dim.modes > 2) throw ConfigError("finite_dim.modes", "must be 1 or 2");
  if (interaction) {
    interaction->validate();
    if (interaction->is_wave() != sampler.wave)
      throw ConfigError("sampler.wave", "must be true exactly for the wave variant");
  }
  const bool needs_interaction = kind == ExperimentKind::KmsGibbs || kind == ExperimentKind::KmsLocal ||
                                 kind == ExperimentKind::DensityOde || kind == ExperimentKind::Liouville;
  if (needs_interaction && !interaction) throw ConfigError("interaction", "is required for " + to_string(kind));
  if (kind == ExperimentKind::KmsLocal && !(interaction->focusing && interaction->mass_cutoff))
    throw ConfigError("interaction.mass_cutoff", "kms-local needs a focusing interaction with a mass cutoff");
  if (kind == ExperimentKind::Estimates && estimates.conv.empty() && estimates.cauchy.empty() &&
      estimates.hyper_p.empty())
    throw ConfigError("estimates", "nothing to run");
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  j["kind"] = to_string(kind);
  j["seed"] = seed;
  j["sampler"] = {{"beta", sampler.beta},
                  {"d", sampler.dimension},
                  {"n", sampler.cutoff},
                  {"samples", sampler.samples},
                  {"wave", sampler.wave}};
  if (interaction) j["interaction"] = {{"variant", to_string(interaction->variant)}, {"hash", interaction->hash()}};
  j["probes"] = {{"count", probes.count},
                 {"amplitude", probes.amplitude},
                 {"max_mode", probes.max_mode},
                 {"hierarchy_max_p", probes.hierarchy_max_p},
                 {"radial_radius", probes.radial_radius}};
  j["tolerance"] = {
      {"multiplier", tolerance.multiplier}, {"batches", tolerance.batches}, {"min_ess_fraction", min_ess_fraction}};
  j["dynamics"] = {{"dt", dynamics.dt}, {"horizon", dynamics.horizon}, {"checkpoints", dynamics.checkpoints}};
  j["finite_dim"] = {
      {"modes", finite_dim.modes}, {"quartic", finite_dim.quartic}, {"perturbation", finite_dim.perturbation}};
  json conv = json::array();
  for (const auto& c : estimates.conv) conv.push_back({{"d", c.dimension}, {"delta", c.delta}, {"M", c.M}, {"rho", c.rho}});
  json cauchy = json::array();
  for (const auto& c : estimates.cauchy)
    cauchy.push_back({{"variant", to_string(c.variant)},
                      {"d", c.dimension},
                      {"power", c.power},
                      {"gamma", c.gamma},
                      {"levels", c.levels},
                      {"samples", c.samples}});
  j["estimates"] = {{"conv", conv},
                    {"conv_probes", estimates.conv_probes},
                    {"truncation", estimates.truncation},
                    {"hyper_p", estimates.hyper_p},
                    {"hyper_samples", estimates.hyper_samples},
                    {"cauchy", cauchy}};
  return j;
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(to_json().dump()); }

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("JSON parse error: ") + e.what());
  }
  return from_json(j);
}

ExperimentConfig parse_config_toml(const std::string& text) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError("<file>", msg.str());
  }
  std::ostringstream ss;
  ss << toml::json_formatter{table};
  return from_json(json::parse(ss.str()));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return is_json ? parse_config_json(buffer.str()) : parse_config_toml(buffer.str());
}

}  // namespace kmslab
