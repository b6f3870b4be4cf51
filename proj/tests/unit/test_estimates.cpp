#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "kmslab/errors.hpp"
#include "kmslab/estimates.hpp"
#include "kmslab/functionals.hpp"

using namespace kmslab;

namespace {
double bracket(const Mode& k) { return std::sqrt(1.0 + mode_norm2(k)); }

// Direct sum over the sup-norm box, k + l = n e_1.
double brute_force(int d, double delta, double M, int n, int K) {
  const double dp = d == 2 ? delta : 2.0 + delta;
  double s = 0;
  const int K3 = d == 3 ? K : 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = -K3; c <= K3; ++c) {
        const Mode k{a, b, c}, l{n - a, -b, -c};
        const double big = std::max(std::sqrt(double(mode_norm2(k))), std::sqrt(double(mode_norm2(l))));
        if (big < M) continue;
        s += std::pow(bracket(k), -dp) * std::pow(bracket(l), -2.0);
      }
  return s;
}
}  // namespace

TEST(Conv, SmallBoxMatchesHandSum) {
  EXPECT_NEAR(conv_partial_sum(2, 2.0, 0.0, 0, 1), 1.0 + 4.0 / 4.0 + 4.0 / 9.0, 1e-14);
}

TEST(Conv, PartialSumsMatchBruteForce) {
  for (int d : {2, 3})
    for (double delta : {0.0, 0.5, 2.0})
      for (double M : {0.0, 3.0})
        for (int n : {0, 3, 8}) {
          if (d == 2 && delta == 0.0) continue;
          const int K = d == 2 ? 20 : 8;
          const double b = brute_force(d, delta, M, n, K);
          EXPECT_NEAR(conv_partial_sum(d, delta, M, n, K), b, 1e-12 * b) << d << " " << delta << " " << M << " " << n;
        }
}

// The tail bracket must contain the mass between the K box and a larger box.
TEST(Conv, TailBracketContainsTheNextShell) {
  ConvParams p;
  p.dimension = 2;
  p.delta = 2.0;
  p.probes = {1, 4, 16};
  p.truncation = 32;
  p.tail_guard = 1.0;
  const auto sums = conv_sums(p, Exec::Serial);
  for (const auto& s : sums) {
    const double shell = conv_partial_sum(2, 2.0, 0.0, s.n, 512) - s.partial;
    EXPECT_LE(shell, s.tail_upper) << s.n;
    EXPECT_GE(s.tail_lower, 0.0);
    EXPECT_LE(s.tail_lower, s.tail_upper);
  }
}

TEST(Conv, TailLowerBoundIsBelowTheInfiniteTail) {
  ConvParams p;
  p.dimension = 2;
  p.delta = 2.0;
  p.probes = {1, 8};
  p.truncation = 16;
  p.tail_guard = 1.0;
  for (const auto& s : conv_sums(p, Exec::Serial)) {
    // A box of 2048 leaves a tail below its own upper bound; the difference is a
    // lower estimate of the true tail beyond 16.
    const double far = conv_partial_sum(2, 2.0, 0.0, s.n, 2048) - s.partial;
    EXPECT_LE(s.tail_lower, far * 1.01) << s.n;
  }
}

TEST(Conv, DoublingTheBoxMovesTheEstimateByUnderOnePercent) {
  for (auto [d, delta] : {std::pair{2, 2.0}, std::pair{2, 0.5}, std::pair{3, 0.5}}) {
    ConvParams p;
    p.dimension = d;
    p.delta = delta;
    p.probes = {2, 16, 64};
    p.truncation = d == 2 ? 256 : 128;
    p.tail_guard = 0.05;
    const auto a = conv_sums(p);
    p.truncation *= 2;
    const auto b = conv_sums(p);
    for (std::size_t i = 0; i < a.size(); ++i)
      EXPECT_LT(std::abs(a[i].value() - b[i].value()) / b[i].value(), 0.01) << d << " " << delta << " " << a[i].n;
  }
}

TEST(Conv, SerialAndParallelAgree) {
  ConvParams p;
  p.dimension = 3;
  p.delta = 0.0;
  p.probes = {2, 8};
  p.truncation = 24;
  p.tail_guard = 1.0;
  const auto a = conv_sums(p, Exec::Serial), b = conv_sums(p, Exec::Parallel);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].partial, b[i].partial);
}

TEST(Conv, TightGuardRaisesConvergenceError) {
  ConvParams p;
  p.dimension = 2;
  p.delta = 0.5;
  p.probes = {2};
  p.truncation = 16;
  p.tail_guard = 1e-3;
  EXPECT_THROW(conv_sums(p), ConvergenceError);
}

TEST(Conv, ValidationRejectsParametersOutsideTheLemmas) {
  ConvParams p;
  p.dimension = 2;
  p.delta = 0.0;
  EXPECT_THROW(validate(p), ConfigError);
  p.delta = 0.5;
  p.rho = 0.5;
  EXPECT_THROW(validate(p), ConfigError);
  p.dimension = 3;
  p.rho = 1.0;
  EXPECT_THROW(validate(p), ConfigError);
  p.dimension = 4;
  p.rho = 0;
  EXPECT_THROW(validate(p), ConfigError);
}

TEST(Conv, BoundedRatioVerdicts) {
  EXPECT_TRUE(ratios_bounded({1, 1.2, 1.1, 1.3, 1.25, 1.3}));
  EXPECT_FALSE(ratios_bounded({1, 2, 3, 4, 5, 6}));
  EXPECT_FALSE(ratios_bounded({1, 1, 1, 1, 1, 11}));
  EXPECT_TRUE(ratios_bounded({2, 1.5, 1.2, 1.1, 1.05, 1.0}));
  // Saturating from below: increments halve or faster.
  EXPECT_TRUE(ratios_bounded({17.4, 22.5, 26.4, 28.6, 29.8, 30.4}));
  // Logarithmic growth: constant increments per doubling.
  EXPECT_FALSE(ratios_bounded({1.0, 1.1, 1.2, 1.3, 1.4, 1.5}));
  EXPECT_FALSE(ratios_bounded({1.0, 1.1, 1.2}, 1.1));
  EXPECT_FALSE(ratios_bounded({}));
}

TEST(Conv, CheckOnTheTwoDimensionalCase) {
  ConvParams p;
  p.dimension = 2;
  p.delta = 2.0;
  const auto b = conv_check(p);
  EXPECT_TRUE(b.bounded) << b.note;
  EXPECT_EQ(b.rows.size(), 6u);
  EXPECT_EQ(b.lemma, "discrete-convolution-2d");
}

TEST(Hyper, SingleGaussianFourthNorm) {
  const auto battery = chaos_battery();
  HyperParams hp;
  hp.samples = 200000;
  hp.seed = 3;
  const auto b = hypercontractivity_check(battery[1], hp);
  EXPECT_TRUE(b.bounded);
  EXPECT_NEAR(b.rows[0].value, std::pow(2.0, 0.25), 5 * b.rows[0].stderr_ + 1e-3);
}

TEST(Hyper, ConstantSaturatesWithFactorOne) {
  HyperParams hp;
  hp.samples = 1000;
  const auto b = hypercontractivity_check(chaos_battery()[0], hp);
  EXPECT_TRUE(b.bounded);
  EXPECT_DOUBLE_EQ(b.worst_ratio, 1.0);
}

TEST(Hyper, BatteryHoldsAtModerateSize) {
  HyperParams hp;
  hp.samples = 100000;
  hp.seed = 4;
  for (const auto& m : chaos_battery())
    for (int p : {4, 6}) {
      hp.p = p;
      EXPECT_TRUE(hypercontractivity_check(m, hp).bounded) << m.name << " p=" << p;
    }
}

TEST(Hyper, SerialAndParallelAgree) {
  HyperParams hp;
  hp.samples = 5000;
  const auto m = chaos_battery()[4];
  EXPECT_EQ(hypercontractivity_check(m, hp, Exec::Serial).rows[0].value,
            hypercontractivity_check(m, hp, Exec::Parallel).rows[0].value);
}

TEST(Cauchy, TruncateAndEmbedAreInverse) {
  auto l = build_lattice(2, 4);
  SpectralField u(l);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = cplx(double(i), 1.0);
  const auto t = truncate(u, 2);
  EXPECT_EQ(t.lattice().cutoff(), 2);
  const auto back = embed(t, l);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(back[i], u[i]);
  for (std::size_t i = t.size(); i < u.size(); ++i) EXPECT_EQ(back[i], cplx(0.0));
  EXPECT_THROW(truncate(u, 5), std::invalid_argument);
}

TEST(Cauchy, LevelIndependentEnergyGivesZero) {
  CauchyParams cp;
  cp.spec.variant = Variant::Hartree1D;
  cp.spec.dimension = 1;
  cp.spec.potential = Potential::power_law(1.0, 1.0);
  cp.levels = {2, 4};
  cp.samples = 200;
  // Energy of the coarsest projection only: no dependence on the level.
  InteractionSpec base = cp.spec;
  base.cutoff = 1;
  InteractionEvaluator ev(base);
  const auto b = cauchy_decay_check(cp, [&](int, const SpectralField& u) { return ev.energy(truncate(u, 1)); });
  EXPECT_TRUE(b.bounded);
  for (const auto& r : b.rows) EXPECT_EQ(r.value, 0.0);
}

namespace {
// For the complex Wick square, E[:|u|^4:(x) :|u|^4:(y)] = 4 |C(x - y)|^4, so
// with h_N = (1/4) int :|u_N|^4: and nested truncations
// E|h_2m - h_m|^2 = S(2m) - S(m), S(N) = (1/4) sum_{k1+k2=k3+k4} prod 2/lambda.
double wick_square_moment(int N) {
  auto l = build_lattice(2, N);
  std::map<std::pair<int, int>, double> pair_sum;
  for (std::size_t a = 0; a < l->size(); ++a)
    for (std::size_t b = 0; b < l->size(); ++b) {
      const auto &ka = l->mode(a), &kb = l->mode(b);
      pair_sum[{ka[0] + kb[0], ka[1] + kb[1]}] += (2.0 / l->eigenvalue(a)) * (2.0 / l->eigenvalue(b));
    }
  double s = 0;
  for (const auto& [q, v] : pair_sum) s += v * v;
  return 0.25 * s;
}
}  // namespace

TEST(Cauchy, WickNlsMatchesTheExactSecondMoment) {
  CauchyParams cp;
  cp.spec.variant = Variant::WickNLS2D;
  cp.spec.dimension = 2;
  cp.spec.power = 2;
  cp.levels = {2, 4};
  cp.samples = 400;
  cp.seed = 9;
  const auto b = cauchy_decay_check(cp);
  EXPECT_EQ(b.aux_label, "grad_hminus_s");
  ASSERT_EQ(b.rows.size(), 2u);
  for (const auto& r : b.rows) {
    const int m = static_cast<int>(r.n);
    const double exact = std::sqrt(wick_square_moment(2 * m) - wick_square_moment(m));
    EXPECT_NEAR(r.value, exact, 4 * r.stderr_) << "m=" << m;
  }
  // D(2) < D(4) exactly, so no decrease can be certified on these levels.
  EXPECT_LT(std::sqrt(wick_square_moment(4) - wick_square_moment(2)),
            std::sqrt(wick_square_moment(8) - wick_square_moment(4)));
  EXPECT_FALSE(b.bounded);
}

TEST(Cauchy, WickNlsDifferencesDecreaseBeyondTheFirstLevels) {
  EXPECT_GT(std::sqrt(wick_square_moment(8) - wick_square_moment(4)),
            std::sqrt(wick_square_moment(16) - wick_square_moment(8)));
  CauchyParams cp;
  cp.spec.variant = Variant::WickNLS2D;
  cp.spec.dimension = 2;
  cp.spec.power = 2;
  cp.levels = {4, 8};
  cp.samples = 400;
  cp.seed = 10;
  const auto b = cauchy_decay_check(cp);
  EXPECT_TRUE(b.bounded) << b.note;
  EXPECT_LT(b.rows[1].value, b.rows[0].value);
}

TEST(Cauchy, RejectsBadParameters) {
  CauchyParams cp;
  cp.spec.variant = Variant::WickNLS2D;
  cp.spec.dimension = 2;
  cp.spec.power = 2;
  cp.levels = {};
  EXPECT_THROW(cauchy_decay_check(cp), ConfigError);
  cp.levels = {0};
  EXPECT_THROW(cauchy_decay_check(cp), ConfigError);
}
