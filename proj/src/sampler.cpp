#include "kmslab/sampler.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "kmslab/rng.hpp"
#include "kmslab/stats.hpp"

namespace kmslab {

void SamplerConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  if (!lattice) throw std::invalid_argument("sampler needs a lattice");
}

template <class State>
void Ensemble<State>::validate() const {
  if (provenance.count != samples.size()) throw std::invalid_argument("ensemble count does not match provenance");
  if (!weights) return;
  if (weights->size() != samples.size()) throw std::invalid_argument("weight count does not match sample count");
  bool any = false;
  for (double w : *weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("weights must be finite and nonnegative");
    any = any || w > 0.0;
  }
  if (!any) throw std::invalid_argument("all weights are zero");
}

template struct Ensemble<SpectralField>;
template struct Ensemble<FieldPair>;

SpectralField sample_free_one(const SamplerConfig& config, std::uint64_t index) {
  auto engine = substream_engine(config.seed, config.stream, index);
  std::normal_distribution<double> normal;
  SpectralField u(config.lattice);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double scale = 1.0 / std::sqrt(config.beta * config.lattice->eigenvalue(i));
    const double a = normal(engine);
    const double b = normal(engine);
    u[i] = cplx(a, b) * scale;
  }
  return u;
}

namespace {
Provenance make_provenance(const SamplerConfig& c, std::size_t count, const char* kind) {
  return Provenance{c.seed, c.stream, count, c.beta, c.lattice->dimension(), c.lattice->cutoff(), kind};
}

// Real field with E|c_k|^2 = 1/(beta * weight(k)).
template <class Weight>
SpectralField real_gaussian(const ModeLattice& lat, const LatticePtr& ptr, double beta, Weight weight,
                            std::mt19937_64& engine, std::normal_distribution<double>& normal) {
  SpectralField u(ptr);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const std::size_t j = lat.negated(i);
    if (j < i) continue;  // partner already drawn
    const double var = 1.0 / (beta * weight(i));
    if (j == i) {
      u[i] = normal(engine) * std::sqrt(var);
    } else {
      const double s = std::sqrt(0.5 * var);
      const double a = normal(engine), b = normal(engine);
      u[i] = cplx(a * s, b * s);
      u[j] = std::conj(u[i]);
    }
  }
  return u;
}
}  // namespace

FieldEnsemble sample_free(const SamplerConfig& config, std::size_t count, Exec exec) {
  config.validate();
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  FieldEnsemble e;
  e.samples.resize(count);
  for_each_index(count, exec, [&](std::size_t i) { e.samples[i] = sample_free_one(config, i); });
  e.provenance = make_provenance(config, count, "free");
  return e;
}

FieldPair sample_wave_one(const SamplerConfig& config, std::uint64_t index) {
  auto engine = substream_engine(config.seed, config.stream, index);
  std::normal_distribution<double> normal;
  const ModeLattice& lat = *config.lattice;
  FieldPair p;
  p.u = real_gaussian(lat, config.lattice, config.beta, [&](std::size_t i) { return lat.eigenvalue(i); }, engine,
                      normal);
  p.v = real_gaussian(lat, config.lattice, config.beta, [](std::size_t) { return 1.0; }, engine, normal);
  return p;
}

PairEnsemble sample_wave_pair(const SamplerConfig& config, std::size_t count, Exec exec) {
  config.validate();
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  PairEnsemble e;
  e.samples.resize(count);
  for_each_index(count, exec, [&](std::size_t i) { e.samples[i] = sample_wave_one(config, i); });
  e.provenance = make_provenance(config, count, "wave");
  return e;
}

template <class State>
Ensemble<State> mix_ensembles(const Ensemble<State>& first, const Ensemble<State>& second, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("mixture weight must lie in [0,1]");
  if (first.size() == 0 || second.size() == 0) throw std::invalid_argument("cannot mix empty ensembles");
  auto normalized = [](const Ensemble<State>& e, double mass) {
    std::vector<double> w = e.weights ? *e.weights : std::vector<double>(e.size(), 1.0);
    const double s = pairwise_sum(w);
    for (double& x : w) x *= mass / s;
    return w;
  };
  Ensemble<State> out;
  out.samples = first.samples;
  out.samples.insert(out.samples.end(), second.samples.begin(), second.samples.end());
  auto w = normalized(first, alpha);
  auto w2 = normalized(second, 1.0 - alpha);
  w.insert(w.end(), w2.begin(), w2.end());
  out.weights = std::move(w);
  out.provenance = first.provenance;
  out.provenance.count = out.samples.size();
  out.provenance.kind = "mixture";
  return out;
}

template Ensemble<SpectralField> mix_ensembles(const Ensemble<SpectralField>&, const Ensemble<SpectralField>&, double);
template Ensemble<FieldPair> mix_ensembles(const Ensemble<FieldPair>&, const Ensemble<FieldPair>&, double);

}  // namespace kmslab
