#include "kmslab/gibbs.hpp"

#include <cmath>
#include <stdexcept>

#include "kmslab/errors.hpp"

namespace kmslab {

namespace {
void check_compatible(const Provenance& p, const InteractionSpec& spec) {
  if (p.dimension != spec.dimension || p.cutoff != spec.cutoff) {
    throw LatticeMismatch("ensemble lattice does not match interaction spec");
  }
  if (std::abs(p.beta - spec.beta) > 1e-12 * spec.beta) {
    throw std::invalid_argument("ensemble was drawn at a different beta than the interaction spec");
  }
}

GibbsWeights finish(std::vector<double> energies, std::vector<double> weights, double beta, std::string hash) {
  GibbsWeights g;
  g.energies = std::move(energies);
  g.weights = std::move(weights);
  g.beta = beta;
  g.spec_hash = std::move(hash);
  const double total = pairwise_sum(g.weights);
  if (!(total > 0.0)) throw std::invalid_argument("all Gibbs weights are zero (cutoff excludes every sample)");
  g.normalizer = total / static_cast<double>(g.weights.size());
  g.ess = effective_sample_size(g.weights);
  return g;
}
}  // namespace

GibbsWeights gibbs_weights(const FieldEnsemble& ensemble, const InteractionSpec& spec, std::optional<double> mass_cutoff,
                           Exec exec, std::optional<double> beta_override) {
  if (ensemble.weighted()) throw std::invalid_argument("gibbs_weights needs an unweighted free ensemble");
  spec.validate();
  check_compatible(ensemble.provenance, spec);
  std::optional<double> R = mass_cutoff ? mass_cutoff : spec.mass_cutoff;
  if (spec.focusing && !R) throw std::invalid_argument("focusing interaction requires a mass cutoff R");
  if (R && !(*R > 0.0)) throw std::invalid_argument("mass cutoff must be positive");
  const double beta = beta_override ? *beta_override : spec.beta;
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");

  ComplexModel model(spec);
  const std::size_t n = ensemble.size();
  std::vector<double> energies(n), weights(n);
  for_each_index(n, exec, [&](std::size_t i) {
    const SpectralField& u = ensemble.samples[i];
    if (R && mass(u) > *R) {
      energies[i] = 0.0;
      weights[i] = 0.0;
      return;
    }
    energies[i] = model.interaction_energy(u);
    weights[i] = std::exp(-beta * energies[i]);
  });
  return finish(std::move(energies), std::move(weights), beta, spec.hash());
}

GibbsWeights gibbs_weights(const PairEnsemble& ensemble, const InteractionSpec& spec, Exec exec,
                           std::optional<double> beta_override) {
  if (ensemble.weighted()) throw std::invalid_argument("gibbs_weights needs an unweighted free ensemble");
  spec.validate();
  check_compatible(ensemble.provenance, spec);
  const double beta = beta_override ? *beta_override : spec.beta;
  WaveModel model(spec);
  const std::size_t n = ensemble.size();
  std::vector<double> energies(n), weights(n);
  for_each_index(n, exec, [&](std::size_t i) {
    energies[i] = model.interaction_energy(ensemble.samples[i]);
    weights[i] = std::exp(-beta * energies[i]);
  });
  return finish(std::move(energies), std::move(weights), beta, spec.hash());
}

}  // namespace kmslab
