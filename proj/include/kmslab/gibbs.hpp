#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kmslab/functionals.hpp"
#include "kmslab/sampler.hpp"
#include "kmslab/stats.hpp"

namespace kmslab {

// w_i = exp(-beta h^I(u_i)), times 1{|u_i|^2 <= R} when a mass cutoff is set.
struct GibbsWeights {
  std::vector<double> weights;
  std::vector<double> energies;
  double normalizer = 0.0;  // mean(w), unbiased for z_beta
  double ess = 0.0;
  double beta = 1.0;
  std::string spec_hash;

  double ess_fraction() const { return weights.empty() ? 0.0 : ess / static_cast<double>(weights.size()); }
};

// `beta_override` weights with exp(-beta' h^I) instead of the spec's beta.
GibbsWeights gibbs_weights(const FieldEnsemble& ensemble, const InteractionSpec& spec,
                           std::optional<double> mass_cutoff = std::nullopt, Exec exec = Exec::Parallel,
                           std::optional<double> beta_override = std::nullopt);
GibbsWeights gibbs_weights(const PairEnsemble& ensemble, const InteractionSpec& spec, Exec exec = Exec::Parallel,
                           std::optional<double> beta_override = std::nullopt);

template <class State>
Ensemble<State> with_weights(Ensemble<State> ensemble, const GibbsWeights& w) {
  if (w.weights.size() != ensemble.size()) throw std::invalid_argument("weights do not match ensemble");
  ensemble.weights = w.weights;
  ensemble.validate();
  return ensemble;
}

// Self-normalized estimate with delta-method stderr; plain mean when unweighted.
template <class State>
Estimate expect(const Ensemble<State>& ensemble, const std::function<double(const State&)>& observable,
                Exec exec = Exec::Parallel) {
  std::vector<double> values(ensemble.size());
  for_each_index(ensemble.size(), exec, [&](std::size_t i) { values[i] = observable(ensemble.samples[i]); });
  return weighted_mean(values, ensemble.weight_span());
}

}  // namespace kmslab
