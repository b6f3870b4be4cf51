#pragma once

#include <vector>

#include "kmslab/report.hpp"
#include "kmslab/sampler.hpp"

namespace kmslab {

struct DiagnosticsOptions {
  TolerancePolicy policy;
  // Exponent of the H^{-s} trace check; negative selects the default for d.
  double sobolev = -1.0;
  // Adds (f_i, f_{i+1}) covariance gates next to the diagonal ones.
  bool cross_pairs = true;
};

// Gaussian certification of a free ensemble against covariance beta^{-1} A^{-1}
// on the real space H_R:
//   covariance[i,j]:   E[<f_i,u>_R <u,f_j>_R] - beta^{-1} <f_i, A^{-1} f_j>_R
//   characteristic[i]: E[exp(i<f_i,u>_R)] - exp(-<f_i, A^{-1} f_i>_R / (2 beta))
//   trace:             E|u|^2_{H^{-s}} - sum over real coordinates of lambda^{-s} Var
// For the complex field each mode carries two real coordinates of variance
// 1/(beta lambda), so the trace target is sum 2/(beta lambda^{1+s}); for wave
// fields the u-part contributes sum 1/(beta lambda^{1+s}) and v contributes
// sum 1/beta. Rejects weighted ensembles; wave probes must be real.
template <class State>
std::vector<ResidualReport> gaussian_diagnostics(const Ensemble<State>& ensemble, const std::vector<State>& probes,
                                                 double beta, const DiagnosticsOptions& options = {},
                                                 Exec exec = Exec::Parallel);

// e_k and i e_k for every mode.
std::vector<SpectralField> basis_probes(const LatticePtr& lattice);
// Real basis of the wave phase space: e_0, e_k + e_{-k}, i(e_k - e_{-k}) in
// each component.
std::vector<FieldPair> wave_basis_probes(const LatticePtr& lattice);

}  // namespace kmslab
