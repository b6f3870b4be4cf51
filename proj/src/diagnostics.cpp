#include "kmslab/diagnostics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kmslab/kms.hpp"

namespace kmslab {

namespace {

struct Entry {
  int comp;
  std::size_t index;
  cplx coeff;
};

using Sparse = std::vector<Entry>;

const SpectralField& component(const SpectralField& u, int) { return u; }
const SpectralField& component(const FieldPair& p, int c) { return c == 0 ? p.u : p.v; }
int components(const SpectralField&) { return 1; }
int components(const FieldPair&) { return 2; }

// Weight of A^{-1} on a component: 1/lambda on positions, 1 on velocities.
double inverse_weight(const ModeLattice& lat, int comp, std::size_t i) { return comp == 0 ? 1.0 / lat.eigenvalue(i) : 1.0; }

template <class State>
Sparse sparsify(const State& f) {
  Sparse s;
  for (int c = 0; c < components(f); ++c) {
    const auto& x = component(f, c);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != cplx(0.0)) s.push_back({c, i, x[i]});
  }
  return s;
}

template <class State>
double pairing(const Sparse& f, const State& u) {
  double s = 0.0;
  for (const auto& e : f) {
    const cplx v = component(u, e.comp)[e.index];
    s += e.coeff.real() * v.real() + e.coeff.imag() * v.imag();
  }
  return s;
}

template <class State>
double covariance_target(const State& f, const State& g, double beta) {
  const auto& lat = f.lattice();
  double s = 0.0;
  for (int c = 0; c < components(f); ++c) {
    const auto& x = component(f, c);
    const auto& y = component(g, c);
    for (std::size_t i = 0; i < x.size(); ++i) s += (std::conj(x[i]) * y[i]).real() * inverse_weight(lat, c, i);
  }
  return s / beta;
}

template <class State>
double trace_target(const State& sample, double beta, double s) {
  const auto& lat = sample.lattice();
  double t = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double lam = lat.eigenvalue(i);
    if constexpr (std::is_same_v<State, FieldPair>)
      t += std::pow(lam, -s) / (beta * lam) + 1.0 / beta;
    else
      t += 2.0 * std::pow(lam, -s) / (beta * lam);
  }
  return t;
}

}  // namespace

template <class State>
std::vector<ResidualReport> gaussian_diagnostics(const Ensemble<State>& ensemble, const std::vector<State>& probes,
                                                 double beta, const DiagnosticsOptions& options, Exec exec) {
  if (ensemble.weighted()) throw std::invalid_argument("gaussian diagnostics need an unweighted ensemble");
  if (ensemble.size() < 2) throw std::invalid_argument("gaussian diagnostics need at least two samples");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const State& first = ensemble.samples.front();
  for (const auto& f : probes) {
    require_same_lattice(f, first);
    if constexpr (std::is_same_v<State, FieldPair>)
      if (!is_real_field(f, 1e-14)) throw std::invalid_argument("wave probes must be real fields");
  }
  const double s = options.sobolev >= 0.0 ? options.sobolev : default_sobolev_exponent(first.lattice().dimension());

  std::vector<Sparse> sparse;
  for (const auto& f : probes) sparse.push_back(sparsify(f));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    pairs.emplace_back(i, i);
    if (options.cross_pairs && i + 1 < probes.size()) pairs.emplace_back(i, i + 1);
  }
  std::vector<double> cov_target(pairs.size()), char_target(probes.size());
  for (std::size_t g = 0; g < pairs.size(); ++g)
    cov_target[g] = covariance_target(probes[pairs[g].first], probes[pairs[g].second], beta);
  for (std::size_t i = 0; i < probes.size(); ++i)
    char_target[i] = std::exp(-0.5 * covariance_target(probes[i], probes[i], beta));
  const double tr_target = trace_target(first, beta, s);

  // Gates: covariance pairs, characteristic functions, trace.
  const std::size_t G = pairs.size() + probes.size() + 1;
  const std::size_t N = ensemble.size();
  const std::size_t B = std::min<std::size_t>(std::max(options.policy.batches, 2), N);
  std::vector<cplx> sums(B * G);
  std::vector<double> counts(B);
  for_each_index(B, exec, [&](std::size_t b) {
    const std::size_t lo = b * N / B, hi = (b + 1) * N / B;
    counts[b] = static_cast<double>(hi - lo);
    std::vector<cplx> acc(G);
    std::vector<double> proj(probes.size());
    for (std::size_t i = lo; i < hi; ++i) {
      const State& u = ensemble.samples[i];
      for (std::size_t p = 0; p < probes.size(); ++p) proj[p] = pairing(sparse[p], u);
      for (std::size_t g = 0; g < pairs.size(); ++g)
        acc[g] += proj[pairs[g].first] * proj[pairs[g].second] - cov_target[g];
      for (std::size_t p = 0; p < probes.size(); ++p)
        acc[pairs.size() + p] += std::polar(1.0, proj[p]) - char_target[p];
      const double norm = sobolev_norm(u, -s);
      acc[G - 1] += norm * norm - tr_target;
    }
    std::copy(acc.begin(), acc.end(), sums.begin() + b * G);
  });

  std::vector<ResidualReport> out;
  std::vector<cplx> column(B);
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t b = 0; b < B; ++b) column[b] = sums[b * G + g];
    const ComplexEstimate e = batch_mean_from_sums(column, counts);
    std::ostringstream id;
    if (g < pairs.size())
      id << "covariance[" << pairs[g].first << "," << pairs[g].second << "]";
    else if (g < G - 1)
      id << "characteristic[" << g - pairs.size() << "]";
    else
      id << "trace[s=" << s << "]";
    ResidualReport r = make_stderr_report(id.str(), e, N, options.policy);
    r.seed = ensemble.provenance.seed;
    if (g < pairs.size())
      r.details["target"] = cov_target[g];
    else if (g < G - 1)
      r.details["target"] = char_target[g - pairs.size()];
    else
      r.details["target"] = tr_target;
    r.details["beta"] = beta;
    out.push_back(std::move(r));
  }
  return out;
}

template std::vector<ResidualReport> gaussian_diagnostics(const FieldEnsemble&, const std::vector<SpectralField>&,
                                                          double, const DiagnosticsOptions&, Exec);
template std::vector<ResidualReport> gaussian_diagnostics(const PairEnsemble&, const std::vector<FieldPair>&, double,
                                                          const DiagnosticsOptions&, Exec);

std::vector<SpectralField> basis_probes(const LatticePtr& lattice) {
  std::vector<SpectralField> out;
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    out.push_back(SpectralField::basis(lattice, i));
    out.push_back(SpectralField::basis(lattice, i, cplx(0.0, 1.0)));
  }
  return out;
}

std::vector<FieldPair> wave_basis_probes(const LatticePtr& lattice) {
  std::vector<SpectralField> real;
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    const std::size_t j = lattice->negated(i);
    if (j < i) continue;
    if (j == i) {
      real.push_back(SpectralField::basis(lattice, i));
      continue;
    }
    real.push_back(SpectralField::basis(lattice, i) + SpectralField::basis(lattice, j));
    real.push_back(SpectralField::basis(lattice, i, cplx(0.0, 1.0)) + SpectralField::basis(lattice, j, cplx(0.0, -1.0)));
  }
  std::vector<FieldPair> out;
  const SpectralField zero(lattice);
  for (const auto& f : real) out.push_back(make_pair(f, zero));
  for (const auto& f : real) out.push_back(make_pair(zero, f));
  return out;
}

}  // namespace kmslab
