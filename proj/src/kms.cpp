#include "kmslab/kms.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "kmslab/errors.hpp"

namespace kmslab {

namespace {
constexpr cplx I(0.0, 1.0);

void check_lattice(const SpectralField& a, const SpectralField& b) { require_same_lattice(a, b); }
void check_lattice(const FieldPair& a, const FieldPair& b) { require_same_lattice(a, b); }

cplx ipow(cplx z, int p) {
  cplx r = 1.0;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

bool needs_real_probes(const SpectralField&) { return false; }
bool needs_real_probes(const FieldPair&) { return true; }

bool is_local(const ComplexModel& m) {
  const InteractionSpec* s = m.spec();
  return s && (s->focusing || s->mass_cutoff);
}
bool is_local(const WaveModel&) { return false; }
}  // namespace

template <class State>
KmsEstimator<State>::KmsEstimator(const Ensemble<State>& ensemble, Model model, TolerancePolicy policy, Exec exec)
    : ensemble_(ensemble), model_(std::move(model)), policy_(policy), exec_(exec) {
  ensemble_.validate();
  if (ensemble_.size() == 0) throw std::invalid_argument("empty ensemble");
  x_.resize(ensemble_.size());
  for_each_index(ensemble_.size(), exec_, [&](std::size_t i) { x_[i] = model_.vector_field(ensemble_.samples[i]); });
}

template <class State>
void KmsEstimator<State>::check_probe(const State& phi) const {
  check_lattice(ensemble_.samples.front(), phi);
  if (needs_real_probes(phi) && !is_real_field(phi, 1e-14)) {
    throw std::invalid_argument("wave probes must be real fields (c_{-k} = conj(c_k))");
  }
}

template <class State>
ResidualReport KmsEstimator<State>::finish(std::string identity, const std::vector<cplx>& contributions) const {
  auto est = batch_mean(contributions, ensemble_.weight_span(), policy_.batches);
  auto r = make_stderr_report(std::move(identity), est, ensemble_.size(), policy_);
  r.spec_hash = model_.hash();
  r.seed = ensemble_.provenance.seed;
  if (ensemble_.weighted()) r.details["ess"] = effective_sample_size(ensemble_.weight_span());
  return r;
}

template <class State>
ResidualReport KmsEstimator<State>::exponential(const State& phi1, const State& phi2) const {
  check_probe(phi1);
  check_probe(phi2);
  const double beta = model_.beta();
  const double sympl = pair_real(phi1, apply_J(phi2));
  std::vector<cplx> c(ensemble_.size());
  for_each_index(c.size(), exec_, [&](std::size_t i) {
    const cplx phase = std::exp(I * pair_real(ensemble_.samples[i], phi2));
    c[i] = (sympl + I * beta * pair_real(phi1, x_[i])) * phase;
  });
  auto r = finish("kms-exponential", c);
  r.details["symplectic_pairing"] = sympl;
  return r;
}

template <class State>
ResidualReport KmsEstimator<State>::bracket(const TestFunctional<State>& F, const TestFunctional<State>& G) const {
  using Kind = typename TestFunctional<State>::Kind;
  if (G.is_radial()) throw std::invalid_argument("unsupported functional combination: radial G");
  if (F.is_radial() && !is_local(model_)) {
    throw std::invalid_argument("unsupported functional combination: radial F needs a local (mass-cutoff) model");
  }
  if (F.kind() != Kind::Constant && F.kind() != Kind::Radial) check_probe(F.probe());
  if (G.kind() != Kind::Constant) check_probe(G.probe());
  const double beta = model_.beta();
  std::vector<cplx> c(ensemble_.size());
  for_each_index(c.size(), exec_, [&](std::size_t i) {
    const State& u = ensemble_.samples[i];
    const State gf = F.gradient(u);
    const State gg = G.gradient(u);
    const double poisson = pair_real(gf, apply_J(gg));
    c[i] = poisson - beta * pair_real(gf, x_[i]) * G.value(u);
  });
  return finish("kms-bracket[" + F.describe() + "," + G.describe() + "]", c);
}

template <class State>
std::vector<ResidualReport> KmsEstimator<State>::stationarity(const State& phi) const {
  check_probe(phi);
  std::vector<cplx> c(ensemble_.size()), m(ensemble_.size());
  for_each_index(c.size(), exec_, [&](std::size_t i) {
    const double drift = pair_real(phi, x_[i]);
    c[i] = drift * std::exp(I * pair_real(ensemble_.samples[i], phi));
    m[i] = drift;
  });
  return {finish("stationarity", c), finish("stationarity-first-moment", m)};
}

template <class State>
ResidualReport KmsEstimator<State>::passivity(const TestFunctional<State>& F) const {
  if (F.is_radial() && !is_local(model_)) {
    throw std::invalid_argument("unsupported functional combination: radial F needs a local (mass-cutoff) model");
  }
  if (F.kind() != TestFunctional<State>::Kind::Constant && !F.is_radial()) check_probe(F.probe());
  std::vector<cplx> c(ensemble_.size());
  for_each_index(c.size(), exec_, [&](std::size_t i) {
    const State& u = ensemble_.samples[i];
    c[i] = pair_real(F.gradient(u), x_[i]) * F.value(u);
  });
  return finish("passivity[" + F.describe() + "]", c);
}

template <class State>
ResidualReport KmsEstimator<State>::hierarchy(const State& phi1, const State& phi2, int p) const {
  if constexpr (std::is_same_v<State, FieldPair>) {
    (void)phi1, (void)phi2, (void)p;
    throw std::invalid_argument("hierarchy residual is not defined for the wave system");
  } else {
    if (p < 0) throw std::invalid_argument("hierarchy order p must be >= 0");
    check_probe(phi1);
    check_probe(phi2);
    const double beta = model_.beta();
    const cplx overlap = pair_complex(phi2, phi1);
    std::vector<cplx> c(ensemble_.size());
    for_each_index(c.size(), exec_, [&](std::size_t i) {
      const cplx z = pair_complex(phi2, ensemble_.samples[i]);
      const cplx xphi = pair_complex(x_[i], phi1);
      const cplx lhs = beta / (p + 1.0) * ipow(z, p + 1) * ipow(std::conj(z), p) * xphi;
      const cplx rhs = 2.0 * I * overlap * std::pow(std::norm(z), static_cast<double>(p));
      c[i] = lhs - rhs;
    });
    auto r = finish("hierarchy-p" + std::to_string(p), c);
    r.details["p"] = p;
    return r;
  }
}

template class KmsEstimator<SpectralField>;
template class KmsEstimator<FieldPair>;

template <class State>
ResidualReport ibp_residual(const Ensemble<State>& ensemble, double beta, const TestFunctional<State>& F,
                            const TestFunctional<State>& G, const State& phi, const TolerancePolicy& policy,
                            Exec exec) {
  if (ensemble.weighted()) throw std::invalid_argument("ibp_residual needs an unweighted free ensemble");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (F.is_radial() || G.is_radial()) throw std::invalid_argument("ibp_residual takes trig-cylindrical functionals");
  ensemble.validate();
  check_lattice(ensemble.samples.front(), phi);
  const State a_phi = apply_A(phi);
  std::vector<cplx> c(ensemble.size());
  for_each_index(c.size(), exec, [&](std::size_t i) {
    const State& u = ensemble.samples[i];
    const double f = F.value(u), g = G.value(u);
    const double lhs = g * pair_real(F.gradient(u), phi);
    const double rhs = f * (-pair_real(G.gradient(u), phi) + beta * g * pair_real(u, a_phi));
    c[i] = lhs - rhs;
  });
  auto est = batch_mean(c, {}, policy.batches);
  auto r = make_stderr_report("ibp[" + F.describe() + "," + G.describe() + "]", est, ensemble.size(), policy);
  r.seed = ensemble.provenance.seed;
  return r;
}

template ResidualReport ibp_residual(const Ensemble<SpectralField>&, double, const TestFunctional<SpectralField>&,
                                     const TestFunctional<SpectralField>&, const SpectralField&,
                                     const TolerancePolicy&, Exec);
template ResidualReport ibp_residual(const Ensemble<FieldPair>&, double, const TestFunctional<FieldPair>&,
                                     const TestFunctional<FieldPair>&, const FieldPair&, const TolerancePolicy&, Exec);

LogDensity gibbs_log_density(const InteractionSpec& spec) {
  auto ev = std::make_shared<const InteractionEvaluator>(spec);
  const double beta = spec.beta;
  return LogDensity{[ev, beta](const SpectralField& u) { return -beta * ev->energy(u); },
                    [ev, beta](const SpectralField& u) { return -beta * ev->gradient(u); }};
}

ResidualReport density_ode_residual(const InteractionSpec& spec, std::span<const SpectralField> samples, double s,
                                    const LogDensity* density, double threshold) {
  spec.validate();
  if (spec.focusing) throw std::invalid_argument("density ODE check needs a defocusing interaction");
  if (spec.is_wave()) throw std::invalid_argument("density ODE check takes complex fields");
  if (samples.empty()) throw std::invalid_argument("density ODE check needs samples");
  InteractionEvaluator ev(spec);
  const LogDensity fallback = gibbs_log_density(spec);
  const LogDensity& rho = density ? *density : fallback;
  const double beta = spec.beta;
  double worst = 0.0, worst_abs = 0.0;
  for (const SpectralField& u : samples) {
    const SpectralField grad_h = ev.gradient(u);
    const double r = std::exp(rho.value(u));
    SpectralField res = r * rho.gradient(u);  // grad rho
    res.axpy(beta * r, grad_h);
    const double norm = sobolev_norm(res, -s);
    worst_abs = std::max(worst_abs, norm);
    worst = std::max(worst, norm / (1.0 + sobolev_norm(grad_h, -s)));
  }
  auto rep = make_absolute_report("density-ode", worst, threshold, samples.size());
  rep.spec_hash = spec.hash();
  rep.details["max_abs_residual"] = worst_abs;
  rep.details["sobolev_s"] = s;
  return rep;
}

double default_sobolev_exponent(int dimension) { return std::max(0.0, dimension / 2.0 - 1.0 + 0.25); }

}  // namespace kmslab
