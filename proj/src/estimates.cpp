#include "kmslab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "kmslab/errors.hpp"
#include "kmslab/functionals.hpp"
#include "kmslab/kms.hpp"
#include "kmslab/rng.hpp"
#include "kmslab/sampler.hpp"
#include "kmslab/stats.hpp"

namespace kmslab {

namespace {

double bracket(double x) { return std::sqrt(1.0 + x * x); }

double effective_delta(int d, double delta) { return d == 2 ? delta : 2.0 + delta; }

std::string join(const std::vector<int>& v) {
  std::ostringstream s;
  s << "{";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << "}";
  return s.str();
}

// Fraction of the sphere |x| = r lying outside the cube |x|_inf < a, as a
// function of t = a / r.
double outside_fraction_2d(double t) {
  if (t <= 1.0 / std::numbers::sqrt2) return 1.0;
  if (t >= 1.0) return 0.0;
  return 4.0 * std::acos(t) / std::numbers::pi;
}

double outside_fraction_3d(double t) {
  if (t <= 1.0 / std::numbers::sqrt3) return 1.0;
  if (t >= 1.0) return 0.0;
  // omega_3 is uniform on [-1, 1]; conditionally (omega_1, omega_2) is uniform
  // on a circle of radius sqrt(1 - z^2).
  auto inside_2d = [t](double z) {
    const double s = t / std::sqrt(1.0 - z * z);
    return 1.0 - outside_fraction_2d(s);
  };
  const double z0 = t < 1.0 / std::numbers::sqrt2 ? std::sqrt(1.0 - 2.0 * t * t) : 0.0;
  const double z1 = std::min(t, std::sqrt(1.0 - t * t));
  boost::math::quadrature::tanh_sinh<double> q;
  double inside = 0.0;
  if (z1 > z0) inside += q.integrate(inside_2d, z0, z1);
  if (t > z1) inside += t - z1;
  return 1.0 - inside;
}

// Integral of h(|x|) over |x|_inf >= a, via r = a / t.
double cube_exterior_integral(int d, double a, const std::function<double(double)>& h) {
  const double omega = d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  // Below t = 1e-60 (r beyond 1e60 a) the integrable t^{-1/2}-type endpoint
  // contributes less than 1e-29 and the naive product overflows.
  auto integrand = [&](double t) {
    if (t <= 1e-60) return 0.0;
    const double r = a / t;
    const double frac = d == 2 ? outside_fraction_2d(t) : outside_fraction_3d(t);
    return h(r) * omega * std::pow(r, d - 1) * frac * a / (t * t);
  };
  boost::math::quadrature::tanh_sinh<double> q;
  std::vector<double> cuts{0.0, 1.0 / std::sqrt(double(d))};
  if (d == 3) cuts.push_back(1.0 / std::numbers::sqrt2);
  cuts.push_back(1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += q.integrate(integrand, cuts[i], cuts[i + 1]);
  return total;
}

// Brackets the exterior sum over |k|_inf > K. Pairing k with -k gives a
// symmetric summand between the radial functions g_lo(|k|) and g_up(|k|);
// unit cubes around exterior points tile |x|_inf >= K + 1/2 and move |x| by at
// most sqrt(d)/2.
void tail_bounds(int d, double dp, int n, int K, double& lower, double& upper) {
  const double c = std::sqrt(double(d)) / 2.0;
  const double a = K + 0.5;
  const double nn = n;
  auto w = [dp](double r) { return std::pow(1.0 + r * r, -dp / 2.0); };
  auto g_lo = [&](double r) { return w(r) / (1.0 + r * r + nn * nn); };
  auto g_up = [&](double r) {
    return w(r) * 0.5 * (1.0 / (1.0 + (r - nn) * (r - nn)) + 1.0 / (1.0 + (r + nn) * (r + nn)));
  };
  lower = cube_exterior_integral(d, a, [&](double r) { return g_lo(r + c); });
  upper = cube_exterior_integral(d, a, [&](double r) { return g_up(r - c); });
}

// Box sums for all probes at once; n = probe * e_1. The summand is symmetric
// in the transverse coordinates, so only k_2 >= k_3 >= 0 is visited.
std::vector<double> box_sums(int d, double dp, double M, const std::vector<int>& probes, int K, Exec exec) {
  const long long rmax = static_cast<long long>(d) * K * K;
  std::vector<double> table(static_cast<std::size_t>(std::min<long long>(rmax + 1, 1LL << 23)));
  for (std::size_t r = 0; r < table.size(); ++r) table[r] = std::pow(1.0 + double(r), -dp / 2.0);
  auto weight = [&](long long r2) {
    return r2 < static_cast<long long>(table.size()) ? table[r2] : std::pow(1.0 + double(r2), -dp / 2.0);
  };
  const double M2 = M * M;
  const std::size_t P = probes.size();
  const std::size_t slabs = 2 * static_cast<std::size_t>(K) + 1;
  std::vector<double> slab_sums(slabs * P, 0.0);
  for_each_index(slabs, exec, [&](std::size_t s) {
    const long long k1 = static_cast<long long>(s) - K;
    std::vector<double> acc(P, 0.0);
    auto visit = [&](long long r2, double mult) {
      const double wk = weight(r2) * mult;
      for (std::size_t j = 0; j < P; ++j) {
        const long long n = probes[j];
        const long long l2 = r2 - 2 * n * k1 + n * n;
        if (static_cast<double>(std::max(r2, l2)) < M2) continue;
        acc[j] += wk / (1.0 + double(l2));
      }
    };
    for (long long k2 = 0; k2 <= K; ++k2) {
      const double m2 = k2 == 0 ? 1.0 : 2.0;
      if (d == 2) {
        visit(k1 * k1 + k2 * k2, m2);
        continue;
      }
      for (long long k3 = 0; k3 <= k2; ++k3) {
        const double m3 = (k3 == 0 ? 1.0 : 2.0) * (k3 == k2 ? 1.0 : 2.0);
        visit(k1 * k1 + k2 * k2 + k3 * k3, m2 * m3);
      }
    }
    for (std::size_t j = 0; j < P; ++j) slab_sums[s * P + j] = acc[j];
  });
  std::vector<double> out(P);
  std::vector<double> column(slabs);
  for (std::size_t j = 0; j < P; ++j) {
    for (std::size_t s = 0; s < slabs; ++s) column[s] = slab_sums[s * P + j];
    out[j] = pairwise_sum(column);
  }
  return out;
}

}  // namespace

void validate(const ConvParams& p) {
  if (p.dimension != 2 && p.dimension != 3) throw ConfigError("dimension", "must be 2 or 3");
  if (p.dimension == 2 && !(p.delta > 0.0 && p.delta <= 2.0)) throw ConfigError("delta", "must lie in (0, 2] for d = 2");
  if (p.dimension == 3 && !(p.delta >= 0.0)) throw ConfigError("delta", "must be >= 0 for d = 3");
  if (!(p.M >= 0.0)) throw ConfigError("M", "must be >= 0");
  const double rho_max = p.dimension == 2 ? p.delta : 1.0;
  if (!(p.rho >= 0.0 && p.rho < rho_max)) throw ConfigError("rho", "outside the admissible range");
  if (p.probes.empty()) throw ConfigError("probes", "empty probe range");
  for (int n : p.probes) {
    if (n < 1) throw ConfigError("probes", "probes must be >= 1");
    if (p.truncation < n + 2) throw ConfigError("truncation", "must exceed every probe by at least 2");
  }
  if (p.truncation + 1 <= p.M) throw ConfigError("truncation", "must exceed M");
  if (!(p.tail_guard > 0.0)) throw ConfigError("tail_guard", "must be positive");
}

double conv_partial_sum(int dimension, double delta, double M, int n, int K) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("dimension must be 2 or 3");
  if (n < 0 || K < 0) throw std::invalid_argument("n and K must be nonnegative");
  return box_sums(dimension, effective_delta(dimension, delta), M, {n}, K, Exec::Serial)[0];
}

std::vector<ConvSum> conv_sums(const ConvParams& p, Exec exec) {
  validate(p);
  const double dp = effective_delta(p.dimension, p.delta);
  const auto partial = box_sums(p.dimension, dp, p.M, p.probes, p.truncation, exec);
  std::vector<ConvSum> out(p.probes.size());
  for (std::size_t j = 0; j < p.probes.size(); ++j) {
    ConvSum& s = out[j];
    s.n = p.probes[j];
    s.partial = partial[j];
    tail_bounds(p.dimension, dp, s.n, p.truncation, s.tail_lower, s.tail_upper);
    if (!(s.uncertainty() <= p.tail_guard * s.value())) {
      std::ostringstream msg;
      msg << "tail-bound guard violated at |n| = " << s.n << ": bracket " << s.uncertainty() << " vs S(n) "
          << s.value() << "; increase the truncation K = " << p.truncation;
      throw ConvergenceError(msg.str());
    }
  }
  return out;
}

double conv_ratio(const ConvParams& p, int n, double S) {
  const double bn = bracket(n), bM = bracket(p.M);
  if (p.dimension == 2) return S * std::pow(bn, p.delta - p.rho) * std::pow(bM, p.rho) / std::log(bn);
  return S * std::pow(bn, 1.0 + p.delta - p.rho) * std::pow(bM, p.rho);
}

bool ratios_bounded(const std::vector<double>& ratios, double spread) {
  if (ratios.empty()) return false;
  for (double r : ratios)
    if (!std::isfinite(r) || !(r > 0.0)) return false;
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  if (*hi / *lo > spread) return false;
  if (ratios.size() >= 4) {
    // Growth over the last four probes: strictly increasing with increments
    // that do not contract (last step at least half the first). A sequence
    // saturating towards its limit has geometrically shrinking increments.
    const std::size_t k = ratios.size() - 4;
    const double d1 = ratios[k + 1] - ratios[k], d2 = ratios[k + 2] - ratios[k + 1], d3 = ratios[k + 3] - ratios[k + 2];
    if (d1 > 0.0 && d2 > 0.0 && d3 > 0.0 && d3 >= 0.5 * d1) return false;
  }
  return true;
}

BoundCheck conv_check(const ConvParams& p, Exec exec) {
  const auto sums = conv_sums(p, exec);
  BoundCheck b;
  b.lemma = p.dimension == 2 ? "discrete-convolution-2d" : "discrete-convolution-3d";
  b.parameters = {{"d", p.dimension}, {"delta", p.delta}, {"M", p.M}, {"rho", p.rho}, {"K", p.truncation}};
  b.probe_range = "|n| in " + join(p.probes);
  std::vector<double> ratios;
  double tail_rel = 0.0;
  for (const auto& s : sums) {
    const double r = conv_ratio(p, s.n, s.value());
    ratios.push_back(r);
    b.rows.push_back(BoundRow{double(s.n), s.value(), r, s.uncertainty()});
    tail_rel = std::max(tail_rel, s.uncertainty() / s.value());
  }
  b.worst_ratio = *std::max_element(ratios.begin(), ratios.end());
  b.bounded = ratios_bounded(ratios);
  const double spread = b.worst_ratio / *std::min_element(ratios.begin(), ratios.end());
  std::ostringstream note;
  note << "max/min " << spread << ", largest tail bracket " << tail_rel << " of S(n)";
  b.note = note.str();
  return b;
}

std::vector<ChaosMember> chaos_battery() {
  auto c = [](cplx z) { return std::conj(z); };
  return {
      {"1", 0, [](const cplx*) { return cplx(1.0); }},
      {"g0", 1, [](const cplx* g) { return g[0]; }},
      {"(g0+i*g1)/sqrt2", 1, [](const cplx* g) { return (g[0] + cplx(0, 1) * g[1]) / std::numbers::sqrt2; }},
      {"g0^2", 2, [](const cplx* g) { return g[0] * g[0]; }},
      {"g0*g1", 2, [](const cplx* g) { return g[0] * g[1]; }},
      {"g0*conj(g1)", 2, [c](const cplx* g) { return g[0] * c(g[1]); }},
      {"|g0|^2-1", 2, [](const cplx* g) { return cplx(std::norm(g[0]) - 1.0); }},
      {"g0^3", 3, [](const cplx* g) { return g[0] * g[0] * g[0]; }},
      {"g0*g1*g2", 3, [](const cplx* g) { return g[0] * g[1] * g[2]; }},
      {"g0^2*conj(g1)", 3, [c](const cplx* g) { return g[0] * g[0] * c(g[1]); }},
      {"|g0|^2*g0-2*g0", 3, [](const cplx* g) { return (std::norm(g[0]) - 2.0) * g[0]; }},
  };
}

BoundCheck hypercontractivity_check(const ChaosMember& member, const HyperParams& hp, Exec exec) {
  if (hp.p < 2) throw std::invalid_argument("p must be >= 2");
  if (hp.batches < 2 || hp.samples < static_cast<std::size_t>(hp.batches))
    throw std::invalid_argument("need at least two batches of samples");
  const std::size_t B = hp.batches;
  std::vector<double> mp(B), m2(B), counts(B);
  for_each_index(B, exec, [&](std::size_t b) {
    const std::size_t begin = hp.samples * b / B, end = hp.samples * (b + 1) / B;
    auto engine = substream_engine(hp.seed, 0x6863ULL, b);
    std::normal_distribution<double> normal;
    std::vector<double> vp, v2;
    vp.reserve(end - begin);
    v2.reserve(end - begin);
    cplx g[3];
    for (std::size_t i = begin; i < end; ++i) {
      for (auto& z : g) {
        const double x = normal(engine), y = normal(engine);
        z = cplx(x, y) / std::numbers::sqrt2;
      }
      const double a2 = std::norm(member.psi(g));
      v2.push_back(a2);
      vp.push_back(std::pow(a2, hp.p / 2.0));
    }
    mp[b] = pairwise_sum(vp) / double(end - begin);
    m2[b] = pairwise_sum(v2) / double(end - begin);
  });
  const Estimate Mp = weighted_mean(mp), M2 = weighted_mean(m2);
  const double Lp = std::pow(Mp.value, 1.0 / hp.p), L2 = std::sqrt(M2.value);
  const double rel_p = Mp.value > 0 ? Mp.stderr_ / (hp.p * Mp.value) : 0.0;
  const double rel_2 = M2.value > 0 ? M2.stderr_ / (2.0 * M2.value) : 0.0;
  const double rel = std::hypot(rel_p, rel_2);
  const double factor = std::pow(hp.p - 1.0, member.degree / 2.0);
  BoundCheck b;
  b.lemma = "wiener-chaos";
  b.parameters = {{"m", member.degree}, {"p", hp.p}, {"N", double(hp.samples)}};
  b.probe_range = member.name;
  b.worst_ratio = L2 > 0 ? Lp / (factor * L2) : 0.0;
  b.bounded = std::isfinite(Lp) && Lp <= factor * L2 * (1.0 + 5.0 * rel);
  b.rows.push_back(BoundRow{double(hp.p), Lp, b.worst_ratio, Lp * rel_p});
  std::ostringstream note;
  note << "|psi|_2 = " << L2 << ", bound factor " << factor << ", relative stderr " << rel;
  b.note = note.str();
  return b;
}

SpectralField truncate(const SpectralField& u, int cutoff) {
  const auto& lat = u.lattice();
  if (cutoff > lat.cutoff()) throw std::invalid_argument("truncation above the field's cutoff");
  if (cutoff == lat.cutoff()) return u;
  auto small = build_lattice(lat.dimension(), cutoff);
  // Modes are ordered by |k|^2, so the smaller ball is a prefix.
  SpectralField out(small);
  for (std::size_t i = 0; i < small->size(); ++i) out[i] = u[i];
  if (small->size() && small->mode(small->size() - 1) != lat.mode(small->size() - 1))
    throw std::logic_error("lattice ordering is not prefix-compatible");
  return out;
}

SpectralField embed(const SpectralField& u, const LatticePtr& lattice) {
  const auto& lat = u.lattice();
  if (lattice->dimension() != lat.dimension() || lattice->cutoff() < lat.cutoff())
    throw LatticeMismatch("embedding needs a larger lattice of the same dimension");
  SpectralField out(lattice);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i];
  return out;
}

namespace {

struct LevelData {
  std::vector<int> levels;  // sorted unique, includes 2m for each m
  int finest = 0;
};

LevelData collect_levels(const std::vector<int>& ms) {
  if (ms.empty()) throw ConfigError("levels", "empty");
  LevelData d;
  for (int m : ms) {
    if (m < 1) throw ConfigError("levels", "levels must be >= 1");
    d.levels.push_back(m);
    d.levels.push_back(2 * m);
  }
  std::sort(d.levels.begin(), d.levels.end());
  d.levels.erase(std::unique(d.levels.begin(), d.levels.end()), d.levels.end());
  d.finest = d.levels.back();
  return d;
}

std::size_t level_index(const LevelData& d, int m) {
  return std::lower_bound(d.levels.begin(), d.levels.end(), m) - d.levels.begin();
}

struct Moment {
  double value = 0.0;
  double stderr_ = 0.0;
};

// (E X)^{1/p} with delta-method stderr, X = |Delta|^p.
Moment lp_norm(const std::vector<double>& x, double p) {
  const Estimate e = weighted_mean(x);
  if (!(e.value > 0.0)) return {0.0, 0.0};
  const double D = std::pow(e.value, 1.0 / p);
  return {D, D * e.stderr_ / (p * e.value)};
}

BoundCheck decay_report(const CauchyParams& cp, const std::vector<int>& ms, const std::vector<Moment>& D,
                        const std::vector<Moment>& G, const std::string& what) {
  BoundCheck b;
  b.lemma = "cauchy-decay";
  b.parameters = {{"p", cp.p}, {"N", double(cp.samples)}, {"beta", cp.spec.beta}, {"d", cp.spec.dimension}};
  b.probe_range = "m in " + join(ms) + " vs 2m";
  b.aux_label = G.empty() ? "" : "grad_hminus_s";
  bool all_zero = true, decreasing = true, grad_decreasing = true;
  for (std::size_t j = 0; j < ms.size(); ++j) {
    BoundRow row{double(ms[j]), D[j].value, j ? D[j].value / D[j - 1].value : 1.0, D[j].stderr_};
    if (!G.empty()) {
      row.aux = G[j].value;
      row.aux_stderr = G[j].stderr_;
    }
    b.rows.push_back(row);
    all_zero = all_zero && D[j].value == 0.0;
    if (j == 0) continue;
    const double band = 2.0 * std::hypot(D[j].stderr_, D[j - 1].stderr_);
    decreasing = decreasing && D[j - 1].value - D[j].value > band;
    if (!G.empty())
      grad_decreasing =
          grad_decreasing && G[j - 1].value - G[j].value > 2.0 * std::hypot(G[j].stderr_, G[j - 1].stderr_);
  }
  b.worst_ratio = 0.0;
  for (std::size_t j = 1; j < ms.size(); ++j) b.worst_ratio = std::max(b.worst_ratio, b.rows[j].ratio);
  b.bounded = all_zero || (ms.size() >= 2 && decreasing);
  std::ostringstream note;
  note << what << "; ";
  if (all_zero)
    note << "D identically zero (no truncation dependence)";
  else
    note << (decreasing ? "D strictly decreasing beyond 2 stderr" : "D not resolved as strictly decreasing");
  if (!G.empty()) note << "; gradient " << (grad_decreasing ? "decreasing" : "not resolved as decreasing");
  b.note = note.str();
  b.parameters["gradient_decreasing"] = G.empty() ? 0.0 : double(grad_decreasing);
  return b;
}

template <class PerSample>
void run_levels(const CauchyParams& cp, const LevelData& ld, Exec exec, PerSample&& per_sample) {
  SamplerConfig sc{cp.spec.beta, build_lattice(cp.spec.dimension, ld.finest), cp.seed, 0x63617563ULL};
  sc.validate();
  for_each_index(cp.samples, exec, [&](std::size_t i) { per_sample(i, sample_free_one(sc, i)); });
}

}  // namespace

BoundCheck cauchy_decay_check(const CauchyParams& cp, Exec exec) {
  if (cp.spec.is_wave()) throw ConfigError("variant", "Cauchy decay is implemented for complex fields");
  if (!(cp.p >= 1.0)) throw ConfigError("p", "must be >= 1");
  if (cp.samples < 2) throw ConfigError("samples", "need at least two samples");
  const LevelData ld = collect_levels(cp.levels);
  const double s = cp.sobolev >= 0.0 ? cp.sobolev : default_sobolev_exponent(cp.spec.dimension);
  std::vector<std::shared_ptr<const InteractionEvaluator>> evals;
  for (int n : ld.levels) {
    InteractionSpec spec = cp.spec;
    spec.cutoff = n;
    spec.validate();
    evals.push_back(std::make_shared<InteractionEvaluator>(spec));
  }
  const std::size_t J = cp.levels.size();
  std::vector<std::vector<double>> de(J, std::vector<double>(cp.samples)), dg = de;
  run_levels(cp, ld, exec, [&](std::size_t i, const SpectralField& u) {
    std::vector<double> h(ld.levels.size());
    std::vector<SpectralField> grads(ld.levels.size());
    for (std::size_t l = 0; l < ld.levels.size(); ++l) {
      const SpectralField ul = truncate(u, ld.levels[l]);
      h[l] = evals[l]->energy(ul);
      grads[l] = evals[l]->gradient(ul);
    }
    for (std::size_t j = 0; j < J; ++j) {
      const std::size_t lo = level_index(ld, cp.levels[j]), hi = level_index(ld, 2 * cp.levels[j]);
      de[j][i] = std::pow(std::abs(h[hi] - h[lo]), cp.p);
      const SpectralField diff = grads[hi] - embed(grads[lo], grads[hi].lattice_ptr());
      dg[j][i] = std::pow(sobolev_norm(diff, -s), cp.p);
    }
  });
  std::vector<Moment> D, G;
  for (std::size_t j = 0; j < J; ++j) {
    D.push_back(lp_norm(de[j], cp.p));
    G.push_back(lp_norm(dg[j], cp.p));
  }
  BoundCheck b = decay_report(cp, cp.levels, D, G, to_string(cp.spec.variant));
  b.parameters["s"] = s;
  return b;
}

BoundCheck cauchy_decay_check(const CauchyParams& cp, const LevelEnergy& energy, Exec exec) {
  if (!(cp.p >= 1.0)) throw ConfigError("p", "must be >= 1");
  if (cp.samples < 2) throw ConfigError("samples", "need at least two samples");
  const LevelData ld = collect_levels(cp.levels);
  const std::size_t J = cp.levels.size();
  std::vector<std::vector<double>> de(J, std::vector<double>(cp.samples));
  run_levels(cp, ld, exec, [&](std::size_t i, const SpectralField& u) {
    for (std::size_t j = 0; j < J; ++j) {
      const int m = cp.levels[j];
      de[j][i] = std::pow(std::abs(energy(2 * m, truncate(u, 2 * m)) - energy(m, truncate(u, m))), cp.p);
    }
  });
  std::vector<Moment> D;
  for (std::size_t j = 0; j < J; ++j) D.push_back(lp_norm(de[j], cp.p));
  return decay_report(cp, cp.levels, D, {}, "custom energy family");
}

}  // namespace kmslab
