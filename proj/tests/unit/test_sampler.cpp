#include <gtest/gtest.h>

#include <cmath>

#include "kmslab/sampler.hpp"
#include "kmslab/stats.hpp"

using namespace kmslab;

namespace {
Estimate mean_of(const FieldEnsemble& e, std::size_t mode, bool fourth = false) {
  std::vector<double> v(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double a = std::norm(e.samples[i][mode]);
    v[i] = fourth ? a * a : a;
  }
  return weighted_mean(v);
}
}  // namespace

// Each coefficient has two real coordinates of variance 1/(beta lambda).
TEST(Sampler, ZeroModeSecondMoment) {
  const auto e = sample_free({1.0, build_lattice(1, 2), 1, 0}, 100000);
  const auto m = mean_of(e, 0);
  EXPECT_NEAR(m.value, 2.0, 3 * m.stderr_);
}

TEST(Sampler, FirstShellSecondMomentAtBetaTwo) {
  auto l = build_lattice(2, 1);
  const auto e = sample_free({2.0, l, 2, 0}, 100000);
  for (std::size_t k = 1; k < l->size(); ++k) {
    const auto m = mean_of(e, k);
    EXPECT_NEAR(m.value, 0.5, 3 * m.stderr_) << k;
  }
}

// |c|^2 is exponential for a complex Gaussian: E|c|^4 = 2 (E|c|^2)^2.
TEST(Sampler, FourthMomentIsGaussian) {
  const auto e = sample_free({1.0, build_lattice(1, 1), 3, 0}, 100000);
  const auto m = mean_of(e, 1, true);
  EXPECT_NEAR(m.value, 2.0, 4 * m.stderr_);
}

TEST(Sampler, ModesAreUncorrelated) {
  auto l = build_lattice(1, 1);
  const auto e = sample_free({1.0, l, 4, 0}, 100000);
  std::vector<double> v(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) v[i] = (std::conj(e.samples[i][0]) * e.samples[i][1]).real();
  const auto m = weighted_mean(v);
  EXPECT_NEAR(m.value, 0.0, 4 * m.stderr_);
}

TEST(Sampler, SameSeedAndStreamIsBitIdentical) {
  SamplerConfig c{1.0, build_lattice(2, 2), 42, 3};
  const auto a = sample_free(c, 50), b = sample_free(c, 50);
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t k = 0; k < a.samples[i].size(); ++k) EXPECT_EQ(a.samples[i][k], b.samples[i][k]);
  c.stream = 4;
  const auto d = sample_free(c, 1);
  EXPECT_NE(a.samples[0][0], d.samples[0][0]);
}

TEST(Sampler, SerialAndParallelAgree) {
  SamplerConfig c{0.7, build_lattice(1, 3), 5, 0};
  const auto a = sample_free(c, 200, Exec::Serial), b = sample_free(c, 200, Exec::Parallel);
  for (std::size_t i = 0; i < 200; ++i)
    for (std::size_t k = 0; k < a.samples[i].size(); ++k) EXPECT_EQ(a.samples[i][k], b.samples[i][k]);
  EXPECT_EQ(a.provenance.count, 200u);
  EXPECT_EQ(a.provenance.kind, "free");
}

TEST(Sampler, RejectsBadInput) {
  EXPECT_THROW(sample_free({0.0, build_lattice(1, 1), 0, 0}, 10), std::invalid_argument);
  EXPECT_THROW(sample_free({-1.0, build_lattice(1, 1), 0, 0}, 10), std::invalid_argument);
  EXPECT_THROW(sample_free({1.0, nullptr, 0, 0}, 10), std::invalid_argument);
  EXPECT_THROW(sample_free({1.0, build_lattice(1, 1), 0, 0}, 0), std::invalid_argument);
}

TEST(WaveSampler, RealFieldsWithDocumentedVariances) {
  auto l = build_lattice(1, 2);
  const auto e = sample_wave_pair({1.0, l, 6, 0}, 100000);
  for (const auto& p : e.samples) ASSERT_TRUE(is_real_field(p, 0.0));
  for (std::size_t k = 0; k < l->size(); ++k) {
    std::vector<double> u(e.size()), v(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      u[i] = std::norm(e.samples[i].u[k]);
      v[i] = std::norm(e.samples[i].v[k]);
    }
    const auto mu = weighted_mean(u), mv = weighted_mean(v);
    EXPECT_NEAR(mu.value, 1.0 / l->eigenvalue(k), 3 * mu.stderr_) << k;
    EXPECT_NEAR(mv.value, 1.0, 3 * mv.stderr_) << k;
  }
}

TEST(Mixture, WeightsSplitMass) {
  SamplerConfig c{1.0, build_lattice(1, 0), 1, 0};
  const auto a = sample_free(c, 10);
  c.stream = 1;
  const auto b = sample_free(c, 30);
  const auto m = mix_ensembles(a, b, 0.25);
  ASSERT_EQ(m.size(), 40u);
  double wa = 0, wb = 0;
  for (std::size_t i = 0; i < 10; ++i) wa += (*m.weights)[i];
  for (std::size_t i = 10; i < 40; ++i) wb += (*m.weights)[i];
  EXPECT_NEAR(wa, 0.25, 1e-15);
  EXPECT_NEAR(wb, 0.75, 1e-15);
  EXPECT_THROW(mix_ensembles(a, b, 1.5), std::invalid_argument);
}
