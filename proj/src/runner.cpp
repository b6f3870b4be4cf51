#include "kmslab/runner.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "kmslab/diagnostics.hpp"
#include "kmslab/dynamics.hpp"
#include "kmslab/errors.hpp"
#include "kmslab/estimates.hpp"
#include "kmslab/finite_dim.hpp"
#include "kmslab/gibbs.hpp"
#include "kmslab/kms.hpp"
#include "kmslab/rng.hpp"
#include "kmslab/serialize.hpp"

namespace kmslab {

bool RunResult::pass() const {
  for (const auto& r : residuals)
    if (!r.pass) return false;
  for (const auto& b : bounds)
    if (!b.bounded) return false;
  return !empty();
}

namespace {

constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;

// Runs `f`, rethrowing library failures tagged with the module name.
template <class F>
auto stage(const char* module, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const ModuleError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModuleError(module, e.what());
  }
}

class Context {
 public:
  Context(const ExperimentConfig& c, const RunOptions& o) : config(c), options(o) {
    lattice = build_lattice(c.sampler.dimension, c.sampler.cutoff);
  }

  void log(const std::string& msg) const {
    if (options.verbose) std::cerr << "[" << to_string(config.kind) << "] " << msg << "\n";
  }

  SamplerConfig sampler() const { return SamplerConfig{config.sampler.beta, lattice, config.seed, 0}; }

  // Random trig probe on the allowed modes, reproducible from the seed.
  SpectralField random_field(std::uint64_t index) const {
    auto engine = substream_engine(config.seed, kProbeStream, index);
    const std::size_t top = config.probes.max_mode >= 0
                                ? std::min<std::size_t>(config.probes.max_mode, lattice->size() - 1)
                                : lattice->size() - 1;
    std::uniform_int_distribution<std::size_t> mode(0, top);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<std::tuple<std::size_t, double, double>> terms;
    for (int j = 0; j < 2; ++j)
      terms.emplace_back(mode(engine), config.probes.amplitude * coef(engine), config.probes.amplitude * coef(engine));
    return trig_probe(lattice, terms);
  }

  template <class State>
  State probe(std::uint64_t index) const {
    if constexpr (std::is_same_v<State, FieldPair>)
      return make_pair(real_part(random_field(2 * index)), real_part(random_field(2 * index + 1)));
    else
      return random_field(index);
  }

  template <class State>
  Ensemble<State> free_ensemble() const {
    return stage("gff-sampler", [&] {
      if constexpr (std::is_same_v<State, FieldPair>)
        return sample_wave_pair(sampler(), config.sampler.samples, options.exec);
      else
        return sample_free(sampler(), config.sampler.samples, options.exec);
    });
  }

  template <class State>
  typename ModelFor<State>::type model() const {
    using Model = typename ModelFor<State>::type;
    return stage("functionals", [&] {
      return config.interaction ? Model(*config.interaction) : Model::linear(config.sampler.beta);
    });
  }

  // Free ensemble, reweighted to the Gibbs measure when an interaction is set.
  template <class State>
  Ensemble<State> equilibrium_ensemble(RunResult& out) const {
    Ensemble<State> e = free_ensemble<State>();
    if (!config.interaction) return e;
    const InteractionSpec& spec = *config.interaction;
    const GibbsWeights w = stage("gibbs-measure", [&] {
      if constexpr (std::is_same_v<State, FieldPair>)
        return gibbs_weights(e, spec, options.exec);
      else
        return gibbs_weights(e, spec, spec.mass_cutoff, options.exec);
    });
    log("ESS/N = " + std::to_string(w.ess_fraction()));
    if (config.min_ess_fraction > 0.0) {
      ResidualReport r = make_absolute_report("ess_fraction", w.ess_fraction(), config.min_ess_fraction, e.size());
      r.gate = Gate::Above;
      r.spec_hash = spec.hash();
      r.seed = config.seed;
      decide(r);
      out.residuals.push_back(r);
    }
    return with_weights(std::move(e), w);
  }

  void add(RunResult& out, ResidualReport r) const {
    if (r.spec_hash.empty() && config.interaction) r.spec_hash = config.interaction->hash();
    r.seed = config.seed;
    log(r.identity + (r.pass ? " pass" : " FAIL"));
    out.residuals.push_back(std::move(r));
  }

  const ExperimentConfig& config;
  const RunOptions& options;
  LatticePtr lattice;
};

template <class State>
void run_gaussian(const Context& ctx, RunResult& out) {
  const auto e = ctx.free_ensemble<State>();
  std::vector<State> probes;
  if constexpr (std::is_same_v<State, FieldPair>)
    probes = wave_basis_probes(ctx.lattice);
  else
    probes = basis_probes(ctx.lattice);
  DiagnosticsOptions opt;
  opt.policy = ctx.config.tolerance;
  for (auto& r : stage("gff-sampler", [&] {
         return gaussian_diagnostics(e, probes, ctx.config.sampler.beta, opt, ctx.options.exec);
       }))
    ctx.add(out, std::move(r));
}

// Exponential residuals for every probe pair, bracket residuals for sin/cos
// functionals of the same probes.
template <class State>
void run_kms(const Context& ctx, RunResult& out, const Ensemble<State>& e) {
  const auto model = ctx.model<State>();
  const int n = ctx.config.probes.count;
  stage("kms-verify", [&] {
    KmsEstimator<State> est(e, model, ctx.config.tolerance, ctx.options.exec);
    for (int i = 0; i < n; ++i) {
      const State a = ctx.probe<State>(2 * i), b = ctx.probe<State>(2 * i + 1);
      ctx.add(out, est.exponential(a, b));
      ctx.add(out, est.bracket(TestFunctional<State>::sin(a), TestFunctional<State>::cos(b)));
    }
    return 0;
  });
}

template <class State>
void run_stationarity(const Context& ctx, RunResult& out) {
  const auto e = ctx.equilibrium_ensemble<State>(out);
  const auto model = ctx.model<State>();
  stage("kms-verify", [&] {
    KmsEstimator<State> est(e, model, ctx.config.tolerance, ctx.options.exec);
    for (int i = 0; i < ctx.config.probes.count; ++i)
      for (auto& r : est.stationarity(ctx.probe<State>(i))) ctx.add(out, std::move(r));
    return 0;
  });
}

template <class State>
void run_ibp(const Context& ctx, RunResult& out) {
  const auto e = ctx.free_ensemble<State>();
  using TF = TestFunctional<State>;
  stage("kms-verify", [&] {
    for (int i = 0; i < ctx.config.probes.count; ++i) {
      const State a = ctx.probe<State>(3 * i), b = ctx.probe<State>(3 * i + 1), phi = ctx.probe<State>(3 * i + 2);
      const TF F = i % 2 == 0 ? TF::sin(a) : TF::moment(a, 2);
      const TF G = i % 3 == 0 ? TF::constant() : TF::cos(b);
      ctx.add(out, ibp_residual(e, ctx.config.sampler.beta, F, G, phi, ctx.config.tolerance, ctx.options.exec));
    }
    return 0;
  });
}

template <class State>
void run_liouville(const Context& ctx, RunResult& out) {
  const auto e = ctx.equilibrium_ensemble<State>(out);
  const auto model = ctx.model<State>();
  const auto& dyn = ctx.config.dynamics;
  std::vector<double> times;
  const long long total = std::llround(dyn.horizon / dyn.dt);
  for (int c = 1; c <= dyn.checkpoints; ++c) times.push_back(dyn.dt * std::llround(double(total) * c / dyn.checkpoints));
  stage("dynamics", [&] {
    for (int i = 0; i < ctx.config.probes.count; ++i) {
      const auto F = TestFunctional<State>::cos(ctx.probe<State>(i));
      std::function<double(const State&)> obs = [F](const State& u) { return F.value(u); };
      for (auto& r : liouville_drift(e, model, obs, times, dyn.dt, ctx.config.tolerance, ctx.options.exec))
        ctx.add(out, std::move(r));
    }
    return 0;
  });
}

void run_local(const Context& ctx, RunResult& out) {
  const auto e = ctx.equilibrium_ensemble<SpectralField>(out);
  const auto model = ctx.model<SpectralField>();
  using TF = TestFunctional<SpectralField>;
  stage("kms-verify", [&] {
    KmsEstimator<SpectralField> est(e, model, ctx.config.tolerance, ctx.options.exec);
    const TF F = TF::radial(Bump{ctx.config.probes.radial_radius});
    for (int i = 0; i < ctx.config.probes.count; ++i) {
      const SpectralField a = ctx.probe<SpectralField>(i);
      ctx.add(out, est.bracket(F, i % 2 == 0 ? TF::sin(a) : TF::cos(a)));
    }
    return 0;
  });
}

void run_hierarchy(const Context& ctx, RunResult& out) {
  const auto e = ctx.free_ensemble<SpectralField>();
  const auto model = ComplexModel::linear(ctx.config.sampler.beta);
  stage("kms-verify", [&] {
    KmsEstimator<SpectralField> est(e, model, ctx.config.tolerance, ctx.options.exec);
    for (int p = 0; p <= ctx.config.probes.hierarchy_max_p; ++p)
      for (int i = 0; i < ctx.config.probes.count; ++i)
        ctx.add(out, est.hierarchy(ctx.probe<SpectralField>(2 * i), ctx.probe<SpectralField>(2 * i + 1), p));
    return 0;
  });
}

void run_density_ode(const Context& ctx, RunResult& out) {
  const auto& spec = *ctx.config.interaction;
  SamplerConfig sc = ctx.sampler();
  const std::size_t n = std::min<std::size_t>(ctx.config.sampler.samples, 200);
  std::vector<SpectralField> samples;
  for (std::size_t i = 0; i < n; ++i) samples.push_back(sample_free_one(sc, i));
  const double s = default_sobolev_exponent(spec.dimension);
  ctx.add(out, stage("kms-verify", [&] { return density_ode_residual(spec, samples, s); }));
}

void run_finite_dim(const Context& ctx, RunResult& out) {
  const auto& fd = ctx.config.finite_dim;
  const double beta = ctx.config.sampler.beta;
  std::vector<double> a(2 * fd.modes);
  for (int i = 0; i < 2 * fd.modes; ++i) a[i] = 0.7 - 0.3 * i;
  std::vector<double> b(2 * fd.modes);
  for (int i = 0; i < 2 * fd.modes; ++i) b[i] = -0.4 + 0.5 * i;
  const PhaseFunction F = windowed_trig(a, 0.3, 1.5);
  const PhaseFunction G = windowed_trig(b, -0.2, 2.0);
  stage("kms-verify", [&] {
    for (double q : fd.quartic) {
      const PhaseFunction h = harmonic_quartic(fd.modes, q);
      const QuadratureResult r = finite_dim_quadrature_check(h, beta, F, G);
      std::ostringstream id;
      id << "finite_dim[quartic=" << q << "]";
      ResidualReport rep = make_absolute_report(id.str(), r.gap, 1e-8);
      rep.details = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"box", r.box}, {"points", double(r.points)}};
      ctx.add(out, rep);
    }
    // Negative control: a non-Gibbs density must violate the identity.
    const PhaseFunction h = harmonic_quartic(fd.modes, fd.quartic.empty() ? 0.0 : fd.quartic.back());
    const double eps = fd.perturbation;
    auto density = [&h, beta, eps](std::span<const double> z) {
      return std::exp(-beta * h.value(z)) * (1.0 + eps * std::sin(z[0]));
    };
    const QuadratureResult r = finite_dim_quadrature_check(h, beta, F, G, density);
    ResidualReport rep = make_absolute_report("finite_dim[perturbed]", r.gap, 1e-3);
    rep.gate = Gate::Above;
    decide(rep);
    rep.details = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"perturbation", eps}};
    ctx.add(out, rep);
    return 0;
  });
}

void run_estimates(const Context& ctx, RunResult& out) {
  const auto& es = ctx.config.estimates;
  stage("estimates-lab", [&] {
    for (const auto& c : es.conv) {
      ConvParams p;
      p.dimension = c.dimension;
      p.delta = c.delta;
      p.M = c.M;
      p.rho = c.rho;
      p.probes = es.conv_probes;
      p.truncation = es.truncation;
      out.bounds.push_back(conv_check(p, ctx.options.exec));
      ctx.log(out.bounds.back().lemma + " " + out.bounds.back().note);
    }
    for (int p : es.hyper_p)
      for (const auto& member : chaos_battery()) {
        HyperParams hp{p, es.hyper_samples, ctx.config.seed, ctx.config.tolerance.batches};
        out.bounds.push_back(hypercontractivity_check(member, hp, ctx.options.exec));
      }
    for (const auto& c : es.cauchy) {
      CauchyParams cp;
      cp.spec.variant = c.variant;
      cp.spec.dimension = c.dimension;
      cp.spec.power = c.power;
      cp.spec.beta = ctx.config.sampler.beta;
      cp.spec.potential = Potential::power_law(1.0, c.gamma);
      cp.levels = c.levels;
      cp.samples = c.samples;
      cp.seed = ctx.config.seed;
      out.bounds.push_back(cauchy_decay_check(cp, ctx.options.exec));
      ctx.log(out.bounds.back().note);
    }
    return 0;
  });
}

template <class F>
void dispatch_state(const ExperimentConfig& c, F&& f) {
  if (c.sampler.wave)
    f(FieldPair{});
  else
    f(SpectralField{});
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  RunResult out;
  out.config = config;
  Context ctx(config, options);
  auto need_complex = [&](const char* what) {
    if (config.sampler.wave) throw ConfigError("sampler.wave", std::string(what) + " takes complex fields");
  };
  switch (config.kind) {
    case ExperimentKind::GaussianDiagnostics:
      dispatch_state(config, [&]<class S>(S) { run_gaussian<S>(ctx, out); });
      break;
    case ExperimentKind::KmsFree:
      dispatch_state(config, [&]<class S>(S) {
        const auto e = ctx.free_ensemble<S>();
        // The free experiment ignores any interaction block.
        ExperimentConfig free = config;
        free.interaction.reset();
        Context fctx(free, options);
        run_kms<S>(fctx, out, e);
      });
      break;
    case ExperimentKind::KmsGibbs:
      dispatch_state(config, [&]<class S>(S) {
        const auto e = ctx.equilibrium_ensemble<S>(out);
        run_kms<S>(ctx, out, e);
      });
      break;
    case ExperimentKind::KmsLocal:
      need_complex("kms-local");
      run_local(ctx, out);
      break;
    case ExperimentKind::Hierarchy:
      need_complex("hierarchy");
      run_hierarchy(ctx, out);
      break;
    case ExperimentKind::Stationarity:
      dispatch_state(config, [&]<class S>(S) { run_stationarity<S>(ctx, out); });
      break;
    case ExperimentKind::Ibp:
      dispatch_state(config, [&]<class S>(S) { run_ibp<S>(ctx, out); });
      break;
    case ExperimentKind::DensityOde:
      need_complex("density-ode");
      run_density_ode(ctx, out);
      break;
    case ExperimentKind::FiniteDim:
      run_finite_dim(ctx, out);
      break;
    case ExperimentKind::Liouville:
      dispatch_state(config, [&]<class S>(S) { run_liouville<S>(ctx, out); });
      break;
    case ExperimentKind::Estimates:
      run_estimates(ctx, out);
      break;
  }
  return out;
}

nlohmann::json report_json(const RunResult& result) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["run"] = {{"kind", to_string(result.config.kind)},
              {"seed", result.config.seed},
              {"samples", result.config.sampler.samples}};
  j["config_hash"] = result.config.hash();
  j["config"] = result.config.to_json();
  nlohmann::json items = nlohmann::json::array();
  for (const auto& r : result.residuals) items.push_back(to_json(r));
  for (const auto& b : result.bounds) items.push_back(to_json(b));
  j["results"] = items;
  j["pass"] = result.pass();
  return j;
}

std::string summary_csv(const RunResult& result) {
  std::ostringstream s;
  s.precision(17);
  s << "type,identity,value_re,value_im,stderr_re,stderr_im,gate,threshold,pass\n";
  auto quoted = [](const std::string& x) {
    std::string q = "\"";
    for (char c : x) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& r : result.residuals)
    s << "residual," << quoted(r.identity) << "," << r.estimate.real() << "," << r.estimate.imag() << ","
      << r.stderr_re << "," << r.stderr_im << "," << to_string(r.gate) << ","
      << (r.gate == Gate::Stderr || r.gate == Gate::Exceeds ? r.multiplier : r.threshold) << ","
      << (r.pass ? 1 : 0) << "\n";
  for (const auto& b : result.bounds)
    for (const auto& row : b.rows)
      s << "bound," << quoted(b.lemma + " " + b.probe_range + " n=" + std::to_string(row.n)) << "," << row.value
        << ",0," << row.stderr_ << ",0,ratio," << row.ratio << "," << (b.bounded ? 1 : 0) << "\n";
  return s.str();
}

void emit_report(const RunResult& result, const std::string& dir) {
  if (result.empty()) throw std::invalid_argument("emit_report: no results to write");
  const std::string base = dir.empty() ? std::string(".") : dir;
  write_atomic(base + "/report.json", report_json(result).dump(2) + "\n");
  write_atomic(base + "/summary.csv", summary_csv(result));
}

}  // namespace kmslab
