#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmslab/field.hpp"
#include "kmslab/parallel.hpp"

namespace kmslab {

struct SamplerConfig {
  double beta = 1.0;
  LatticePtr lattice;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  void validate() const;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t count = 0;
  double beta = 1.0;
  int dimension = 1;
  int cutoff = 0;
  std::string kind;  // "free", "wave", "derived"
};

// A batch of phase-space points standing in for a measure. Weights, when
// present, are nonnegative, finite and not all zero.
template <class State>
struct Ensemble {
  std::vector<State> samples;
  Provenance provenance;
  std::optional<std::vector<double>> weights;

  std::size_t size() const { return samples.size(); }
  bool weighted() const { return weights.has_value(); }
  std::span<const double> weight_span() const {
    return weights ? std::span<const double>(*weights) : std::span<const double>();
  }
  void validate() const;
};

using FieldEnsemble = Ensemble<SpectralField>;
using PairEnsemble = Ensemble<FieldPair>;

// Free Gaussian measure with covariance beta^{-1} A^{-1} on the real space:
// c_k = (a + ib)/sqrt(beta lambda_k), a, b standard normal, so
// E(Re c_k)^2 = E(Im c_k)^2 = 1/(beta lambda_k).
FieldEnsemble sample_free(const SamplerConfig& config, std::size_t count, Exec exec = Exec::Parallel);
SpectralField sample_free_one(const SamplerConfig& config, std::uint64_t index);

// Real wave fields: E|u_k|^2 = 1/(beta lambda_k), E|v_k|^2 = 1/beta,
// c_{-k} = conj(c_k), u and v independent.
PairEnsemble sample_wave_pair(const SamplerConfig& config, std::size_t count, Exec exec = Exec::Parallel);
FieldPair sample_wave_one(const SamplerConfig& config, std::uint64_t index);

// Ensemble whose self-normalized estimates are alpha*E_1 + (1-alpha)*E_2.
template <class State>
Ensemble<State> mix_ensembles(const Ensemble<State>& first, const Ensemble<State>& second, double alpha);

}  // namespace kmslab
