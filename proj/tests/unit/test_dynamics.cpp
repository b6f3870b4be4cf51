#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kmslab/dynamics.hpp"
#include "kmslab/gibbs.hpp"
#include "support.hpp"

using namespace kmslab;

namespace {
const cplx I(0.0, 1.0);

InteractionSpec nls(int n, int q = 4) {
  InteractionSpec s;
  s.variant = Variant::NLS1D;
  s.dimension = 1;
  s.cutoff = n;
  s.power = q;
  return s;
}

InteractionSpec wick2d(int n) {
  InteractionSpec s;
  s.variant = Variant::WickNLS2D;
  s.dimension = 2;
  s.cutoff = n;
  s.power = 2;
  return s;
}

InteractionSpec hartree(int n) {
  InteractionSpec s;
  s.variant = Variant::Hartree1D;
  s.dimension = 1;
  s.cutoff = n;
  s.potential = Potential::power_law(1.0, 1.0);
  return s;
}
}  // namespace

TEST(Strang, LinearFlowIsExact) {
  auto l = build_lattice(1, 1);
  const auto u = SpectralField::basis(l, Mode{1, 0, 0});
  StrangIntegrator s(ComplexModel::linear(1.0));
  const auto out = s.advance(u, std::numbers::pi / 100, 100);
  EXPECT_NEAR(std::abs(out[l->index_of(Mode{1, 0, 0}).value()] - 1.0), 0.0, 1e-10);
}

// NLS on a single constant mode: c(t) = c0 exp(-i(1 + |c0|^2) t).
TEST(Strang, SecondOrderOnTheSingleModeSolution) {
  auto l = build_lattice(1, 2);
  const cplx c0(0.8, 0.3);
  const auto u0 = SpectralField::basis(l, 0, c0);
  StrangIntegrator s{ComplexModel(nls(2))};
  auto err = [&](int steps) {
    const auto u = s.advance(u0, 1.0 / steps, steps);
    return std::abs(u[0] - c0 * std::exp(-I * (1.0 + std::norm(c0))));
  };
  const double e1 = err(20), e2 = err(40), e3 = err(80);
  EXPECT_NEAR(e1 / e2, 4.0, 0.5);
  EXPECT_NEAR(e2 / e3, 4.0, 0.5);
}

TEST(Strang, MassIsConservedForEveryComplexVariant) {
  for (const auto& spec : {nls(4), nls(3, 6), wick2d(2), hartree(4)}) {
    auto l = build_lattice(spec.dimension, spec.cutoff);
    const auto u0 = support::random_field(l, 5);
    const auto u = StrangIntegrator(ComplexModel(spec)).advance(u0, 1e-3, 1000);
    EXPECT_NEAR(mass(u), mass(u0), 1e-10 * std::max(1.0, mass(u0))) << to_string(spec.variant);
  }
}

TEST(Strang, ForwardThenBackwardReturns) {
  for (const auto& spec : {nls(4), wick2d(2)}) {
    auto l = build_lattice(spec.dimension, spec.cutoff);
    const auto u0 = support::random_field(l, 6);
    StrangIntegrator s{ComplexModel(spec)};
    const auto back = s.advance(s.advance(u0, 1e-2, 100), -1e-2, 100);
    EXPECT_LE(max_abs(back - u0), 1e-8) << to_string(spec.variant);
  }
  auto l = build_lattice(1, 3);
  const auto u0 = support::random_field(l, 7);
  StrangIntegrator lin(ComplexModel::linear(1.0));
  EXPECT_LE(max_abs(lin.advance(lin.advance(u0, 0.05, 20), -0.05, 20) - u0), 1e-12);
}

TEST(Strang, EnergyErrorIsSecondOrderAndDoesNotGrow) {
  const auto spec = nls(4);
  auto l = build_lattice(1, 4);
  ComplexModel model(spec);
  StrangIntegrator s(model);
  for (int seed = 0; seed < 5; ++seed) {
    const auto u0 = support::random_field(l, 40 + seed);
    const double h0 = model.hamiltonian(u0);
    auto drift = [&](double dt, long long steps) {
      double worst = 0;
      auto u = u0;
      for (long long k = 0; k < steps; ++k) {
        u = s.step(u, dt);
        worst = std::max(worst, std::abs(model.hamiltonian(u) - h0));
      }
      return worst;
    };
    const double d1 = drift(0.02, 50), d2 = drift(0.01, 100);
    EXPECT_GT(d1 / d2, 3.0);
    EXPECT_LT(drift(0.02, 500), 3.0 * d1 + 1e-12);
  }
}

TEST(Verlet, LinearWaveEnergyAndReversibility) {
  auto l = build_lattice(1, 3);
  const auto p0 = support::random_real_pair(l, 9);
  VerletIntegrator v(WaveModel::linear(1.0));
  const auto p = v.advance(p0, 1e-2, 100);
  const WaveModel m = WaveModel::linear(1.0);
  EXPECT_NEAR(m.hamiltonian(p), m.hamiltonian(p0), 1e-3 * m.hamiltonian(p0));
  EXPECT_LE(max_abs(v.advance(p, -1e-2, 100) - p0), 1e-10);
  EXPECT_TRUE(is_real_field(p, 1e-12));
}

TEST(Evolve, ReturnsTheTrajectory) {
  auto l = build_lattice(1, 1);
  const auto traj = evolve(SpectralField::basis(l, 0), ComplexModel::linear(1.0), FlowConfig{0.25, 1.0});
  ASSERT_EQ(traj.size(), 5u);
  EXPECT_NEAR(std::abs(traj[4][0] - std::exp(-I)), 0.0, 1e-12);
  EXPECT_THROW(evolve(SpectralField::basis(l, 0), ComplexModel::linear(1.0), FlowConfig{0.3, 1.0}),
               std::invalid_argument);
  EXPECT_THROW(evolve(SpectralField::basis(l, 0), ComplexModel::linear(1.0), FlowConfig{-0.1, 1.0}),
               std::invalid_argument);
}

TEST(Liouville, PhaseInvariantObservableHasZeroDrift) {
  const auto e = sample_free({1.0, build_lattice(1, 2), 50, 0}, 1000);
  const auto rs = liouville_drift<SpectralField>(e, ComplexModel::linear(1.0),
                                                 [](const SpectralField& u) { return std::norm(u[0]); }, {0.5, 1.0},
                                                 0.01);
  for (const auto& r : rs) EXPECT_NEAR(std::abs(r.estimate), 0.0, 1e-12);
}

TEST(Liouville, FreeFlowPreservesTheGaussian) {
  auto l = build_lattice(1, 2);
  const auto e = sample_free({1.0, l, 51, 0}, 20000);
  const auto e0 = SpectralField::basis(l, 0);
  const auto rs = liouville_drift<SpectralField>(
      e, ComplexModel::linear(1.0), [&](const SpectralField& u) { return std::cos(pair_real(u, e0)); }, {0.5, 1.0},
      0.05);
  for (const auto& r : rs) EXPECT_LT(support::sigmas(r), 4.0);
}

TEST(Liouville, GibbsEnsembleIsInvariantAndWrongBetaDrifts) {
  const auto spec = nls(2);
  auto l = build_lattice(1, 2);
  const auto e = sample_free({1.0, l, 52, 0}, 20000);
  const auto obs = [](const SpectralField& u) { return std::norm(u[0]); };
  const auto gibbs = with_weights(e, gibbs_weights(e, spec));
  for (const auto& r : liouville_drift<SpectralField>(gibbs, ComplexModel(spec), obs, {0.5, 1.0}, 0.01))
    EXPECT_LT(support::sigmas(r), 4.0);
  const auto free = liouville_drift<SpectralField>(e, ComplexModel(spec), obs, {1.0}, 0.01);
  EXPECT_GT(support::sigmas(free[0]), 5.0);
}

TEST(Dynamics, SerialAndParallelDriftAgree) {
  const auto spec = nls(2);
  const auto e = sample_free({1.0, build_lattice(1, 2), 53, 0}, 300);
  const auto obs = [](const SpectralField& u) { return u[1].real(); };
  const auto a = liouville_drift<SpectralField>(e, ComplexModel(spec), obs, {0.1}, 0.01, {}, Exec::Serial);
  const auto b = liouville_drift<SpectralField>(e, ComplexModel(spec), obs, {0.1}, 0.01, {}, Exec::Parallel);
  EXPECT_EQ(a[0].estimate, b[0].estimate);
  EXPECT_EQ(a[0].stderr_re, b[0].stderr_re);
}
