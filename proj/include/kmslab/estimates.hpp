#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kmslab/field.hpp"
#include "kmslab/interaction.hpp"
#include "kmslab/parallel.hpp"
#include "kmslab/report.hpp"

namespace kmslab {

// ---- discrete convolution sums ----
//
// S(n) = sum_{k + l = n, max(|k|,|l|) >= M} <k>^{-delta'} <l>^{-2},
// delta' = delta (d = 2) or 2 + delta (d = 3), with n = |n| e_1.
// The sum over the sup-norm box |k|_inf <= K is exact; the exterior is
// bracketed by integral comparison.

struct ConvParams {
  int dimension = 2;
  double delta = 2.0;
  double M = 0.0;
  double rho = 0.0;
  std::vector<int> probes{2, 4, 8, 16, 32, 64};
  int truncation = 256;  // K
  double tail_guard = 0.01;
};

struct ConvSum {
  int n = 0;
  double partial = 0.0;     // box sum
  double tail_lower = 0.0;  // bounds on the exterior
  double tail_upper = 0.0;
  double value() const { return partial + 0.5 * (tail_lower + tail_upper); }
  double uncertainty() const { return 0.5 * (tail_upper - tail_lower); }
};

// Rejects parameters outside the lemma hypotheses.
void validate(const ConvParams& p);
// Box sum only, no tail (used for small hand-checkable cases).
double conv_partial_sum(int dimension, double delta, double M, int n, int K);
// Throws ConvergenceError when the tail bracket exceeds tail_guard * S(n).
std::vector<ConvSum> conv_sums(const ConvParams& p, Exec exec = Exec::Parallel);
// Ratio used for the boundedness verdict.
double conv_ratio(const ConvParams& p, int n, double S);
BoundCheck conv_check(const ConvParams& p, Exec exec = Exec::Parallel);
// max/min <= spread and no growth over the last four ratios: a strictly
// increasing run counts as growth unless its increments contract by half.
bool ratios_bounded(const std::vector<double>& ratios, double spread = 10.0);

// ---- hypercontractivity ----

// psi(g) for complex standard Gaussians g_0, g_1, g_2 (E|g|^2 = 1).
struct ChaosMember {
  std::string name;
  int degree = 0;
  std::function<cplx(const cplx*)> psi;
};

std::vector<ChaosMember> chaos_battery();

struct HyperParams {
  int p = 4;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  int batches = 100;
};

// Verdict: |psi|_p <= (p-1)^{m/2} |psi|_2 (1 + 5 rel. stderr).
BoundCheck hypercontractivity_check(const ChaosMember& member, const HyperParams& p, Exec exec = Exec::Parallel);

// ---- Cauchy decay of truncated Wick energies ----

struct CauchyParams {
  InteractionSpec spec;       // cutoff ignored; levels supply it
  std::vector<int> levels;    // m values; each compared against 2m
  double p = 2.0;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  double sobolev = -1.0;      // H^{-s} exponent for the gradient; < 0 picks the default
};

// Energy at truncation level m evaluated on the projection of u.
using LevelEnergy = std::function<double(int level, const SpectralField& u)>;

// Restriction of u to the ball of radius `cutoff` (a prefix of the mode order).
SpectralField truncate(const SpectralField& u, int cutoff);
// Zero-padding of u onto a larger lattice.
SpectralField embed(const SpectralField& u, const LatticePtr& lattice);

// D(m) = |h_{2m} - h_m|_{L^p(mu_beta,0)} with common random numbers: all
// levels share one free sample at the finest truncation. Verdict: each step
// decreases by more than 2 combined stderr. The H^{-s} norm of the gradient
// difference is carried in each row's aux column.
BoundCheck cauchy_decay_check(const CauchyParams& p, Exec exec = Exec::Parallel);
BoundCheck cauchy_decay_check(const CauchyParams& p, const LevelEnergy& energy, Exec exec = Exec::Parallel);

}  // namespace kmslab
