#include <gtest/gtest.h>

#include <cmath>

#include "kmslab/errors.hpp"
#include "kmslab/finite_dim.hpp"

using namespace kmslab;

TEST(FiniteDim, BracketOfCoordinatesIsCanonical) {
  const auto x = coordinate_function(1, 0), y = coordinate_function(1, 1);
  std::vector<double> z{0.3, -0.2};
  EXPECT_EQ(poisson_bracket(x, y, z), 1.0);
  EXPECT_EQ(poisson_bracket(y, x, z), -1.0);
  EXPECT_EQ(poisson_bracket(x, x, z), 0.0);
}

TEST(FiniteDim, HarmonicCoordinates) {
  const auto r = finite_dim_quadrature_check(harmonic_quartic(1, 0.0), 1.0, coordinate_function(1, 0),
                                             coordinate_function(1, 1));
  EXPECT_NEAR(r.lhs, 1.0, 1e-10);
  EXPECT_NEAR(r.rhs, 1.0, 1e-10);
  EXPECT_LE(r.gap, 1e-10);
}

TEST(FiniteDim, EqualFunctionsGiveZero) {
  const auto F = windowed_trig({0.7, -0.4}, 0.3, 1.5);
  const auto r = finite_dim_quadrature_check(harmonic_quartic(1, 0.5), 1.0, F, F);
  EXPECT_NEAR(r.lhs, 0.0, 1e-14);
  EXPECT_LE(r.gap, 1e-10);
}

TEST(FiniteDim, QuarticWithWindowedTrig) {
  const auto F = windowed_trig({1.0, 0.5}, 0.2, 1.5), G = windowed_trig({-0.3, 0.8}, 1.1, 2.0);
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto r = finite_dim_quadrature_check(harmonic_quartic(1, 0.5), beta, F, G);
    EXPECT_LE(r.gap, 1e-8) << beta;
    EXPECT_GT(std::abs(r.lhs), 1e-4);
  }
}

TEST(FiniteDim, TwoModes) {
  const auto F = windowed_trig({1.0, 0.5, -0.2, 0.3}, 0.2, 1.5), G = windowed_trig({-0.3, 0.8, 0.4, 0.1}, 1.1, 2.0);
  QuadratureOptions o;
  o.tolerance = 1e-9;
  const auto r = finite_dim_quadrature_check(harmonic_quartic(2, 0.5), 1.0, F, G, {}, o);
  EXPECT_LE(r.gap, 1e-8);
}

TEST(FiniteDim, PerturbedDensityBreaksTheIdentity) {
  const auto h = harmonic_quartic(1, 0.5);
  const auto F = windowed_trig({1.0, 0.5}, 0.2, 1.5), G = windowed_trig({-0.3, 0.8}, 1.1, 2.0);
  auto density = [&](std::span<const double> z) { return std::exp(-h.value(z)) * (1.0 + 0.3 * std::sin(z[0])); };
  const auto r = finite_dim_quadrature_check(h, 1.0, F, G, density);
  EXPECT_GT(r.gap, 1e-3);
}

TEST(FiniteDim, GradientsMatchFiniteDifferences) {
  const auto h = harmonic_quartic(2, 0.7);
  const auto F = windowed_trig({1.0, 0.5, -0.2, 0.3}, 0.2, 1.5);
  std::vector<double> z{0.3, -0.4, 0.8, 0.1}, g(4), gf(4);
  h.gradient(z, g);
  F.gradient(z, gf);
  for (int i = 0; i < 4; ++i) {
    auto zp = z, zm = z;
    zp[i] += 1e-6;
    zm[i] -= 1e-6;
    EXPECT_NEAR(g[i], (h.value(zp) - h.value(zm)) / 2e-6, 1e-7);
    EXPECT_NEAR(gf[i], (F.value(zp) - F.value(zm)) / 2e-6, 1e-7);
  }
}
