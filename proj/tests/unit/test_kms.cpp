#include <gtest/gtest.h>

#include <cmath>

#include "kmslab/gibbs.hpp"
#include "kmslab/kms.hpp"
#include "support.hpp"

using namespace kmslab;

namespace {
const cplx I(0.0, 1.0);

FieldEnsemble free_ensemble(int d, int n, double beta, std::uint64_t seed, std::size_t N = 100000) {
  return sample_free({beta, build_lattice(d, n), seed, 0}, N);
}

InteractionSpec nls(int n) {
  InteractionSpec s;
  s.variant = Variant::NLS1D;
  s.dimension = 1;
  s.cutoff = n;
  s.power = 4;
  return s;
}

FieldEnsemble shifted(FieldEnsemble e, double shift) {
  for (auto& u : e.samples) u[0] += shift;
  return e;
}
}  // namespace

// One mode at beta = lambda = 1 with phi2 = e_0, phi1 = i e_0: the symplectic
// term and the drift term cancel in expectation.
TEST(Exponential, SingleModeFreeFieldIsZero) {
  const auto e = free_ensemble(1, 0, 1.0, 101);
  auto l = e.samples[0].lattice_ptr();
  const auto r = KmsEstimator<SpectralField>(e, ComplexModel::linear(1.0))
                     .exponential(SpectralField::basis(l, 0, I), SpectralField::basis(l, 0));
  EXPECT_TRUE(r.pass) << r.estimate << " " << r.stderr_re;
  EXPECT_EQ(r.details.at("symplectic_pairing"), -1.0);
}

TEST(Exponential, ZeroProbeGivesExactlyZero) {
  const auto e = free_ensemble(1, 2, 1.0, 102, 1000);
  auto l = e.samples[0].lattice_ptr();
  const auto r = KmsEstimator<SpectralField>(e, ComplexModel::linear(1.0))
                     .exponential(SpectralField(l), support::random_field(l, 1));
  EXPECT_EQ(r.estimate, cplx(0.0));
}

TEST(Exponential, RandomProbesOnTheFreeField) {
  const auto e = free_ensemble(1, 3, 0.8, 103);
  auto l = e.samples[0].lattice_ptr();
  KmsEstimator<SpectralField> est(e, ComplexModel::linear(0.8));
  int passes = 0;
  for (int j = 0; j < 10; ++j) {
    const auto r = est.exponential(support::random_field(l, 200 + j, 0.5), support::random_field(l, 300 + j, 0.5));
    passes += r.pass;
    EXPECT_LT(support::sigmas(r), 5.0);
  }
  EXPECT_GE(passes, 9);
}

TEST(Bracket, SinCosOnTheFreeField) {
  const auto e = free_ensemble(1, 2, 1.0, 104);
  auto l = e.samples[0].lattice_ptr();
  KmsEstimator<SpectralField> est(e, ComplexModel::linear(1.0));
  const auto F = TestFunctional<SpectralField>::sin(SpectralField::basis(l, 0));
  const auto G = TestFunctional<SpectralField>::cos(SpectralField::basis(l, 0, I));
  EXPECT_TRUE(est.bracket(F, G).pass);
  EXPECT_TRUE(est.bracket(F, TestFunctional<SpectralField>::constant()).pass);
  EXPECT_THROW(est.bracket(TestFunctional<SpectralField>::radial({1.0}), G), std::invalid_argument);
  EXPECT_THROW(est.bracket(F, TestFunctional<SpectralField>::radial({1.0})), std::invalid_argument);
}

TEST(Stationarity, FreeFieldBasisProbes) {
  const auto e = free_ensemble(2, 1, 1.0, 105, 50000);
  auto l = e.samples[0].lattice_ptr();
  KmsEstimator<SpectralField> est(e, ComplexModel::linear(1.0));
  for (std::size_t k = 0; k < l->size(); ++k) {
    for (const auto& r : est.stationarity(SpectralField::basis(l, k))) EXPECT_LT(support::sigmas(r), 4.0) << k;
  }
}

// A real shift of c_0 moves Re c_0, which <phi, X> sees for phi = i e_0
// (for phi = e_0 the drift is Im c_0, independent of the shifted coordinate).
TEST(Stationarity, ShiftedEnsembleIsDetected) {
  const auto e = shifted(free_ensemble(1, 1, 1.0, 106), 0.5);
  auto l = e.samples[0].lattice_ptr();
  KmsEstimator<SpectralField> est(e, ComplexModel::linear(1.0));
  const auto rs = est.stationarity(SpectralField::basis(l, 0, I));
  EXPECT_GT(std::max(support::sigmas(rs[0]), support::sigmas(rs[1])), 5.0);
  const auto r0 = est.stationarity(SpectralField::basis(l, 0));
  EXPECT_LT(std::max(support::sigmas(r0[0]), support::sigmas(r0[1])), 4.0);
}

TEST(Exponential, VarianceInflationIsDetected) {
  auto e = free_ensemble(1, 0, 1.0, 107);
  for (auto& u : e.samples) u *= std::sqrt(1.5);
  auto l = e.samples[0].lattice_ptr();
  const auto r = KmsEstimator<SpectralField>(e, ComplexModel::linear(1.0))
                     .exponential(SpectralField::basis(l, 0, I), SpectralField::basis(l, 0));
  EXPECT_GT(support::sigmas(r), 5.0);
}

TEST(Gibbs, NlsEnsembleSatisfiesKms) {
  const auto spec = nls(4);
  const auto e0 = free_ensemble(1, 4, 1.0, 108, 40000);
  const auto e = with_weights(e0, gibbs_weights(e0, spec));
  auto l = e.samples[0].lattice_ptr();
  KmsEstimator<SpectralField> est(e, ComplexModel(spec));
  EXPECT_LT(support::sigmas(est.exponential(SpectralField::basis(l, 1), SpectralField::basis(l, 0, 0.7))), 4.0);
  const auto F = TestFunctional<SpectralField>::sin(SpectralField::basis(l, 0));
  const auto G = TestFunctional<SpectralField>::cos(SpectralField::basis(l, 1, I));
  EXPECT_LT(support::sigmas(est.bracket(F, G)), 4.0);
  EXPECT_LT(support::sigmas(est.stationarity(SpectralField::basis(l, 0))[0]), 4.0);
}

// The free ensemble is not KMS for the interacting vector field.
TEST(Gibbs, FreeEnsembleFailsForTheInteractingModel) {
  const auto e = free_ensemble(1, 0, 1.0, 109);
  auto l = e.samples[0].lattice_ptr();
  const auto r = KmsEstimator<SpectralField>(e, ComplexModel(nls(0)))
                     .exponential(SpectralField::basis(l, 0, I), SpectralField::basis(l, 0));
  EXPECT_GT(support::sigmas(r), 5.0);
}

TEST(Residuals, AreLinearInTheMixture) {
  const auto a = free_ensemble(1, 1, 1.0, 110, 2000);
  const auto b = shifted(free_ensemble(1, 1, 1.0, 111, 3000), 0.5);
  const auto m = mix_ensembles(a, b, 0.3);
  auto l = a.samples[0].lattice_ptr();
  const auto phi1 = support::random_field(l, 1), phi2 = support::random_field(l, 2);
  const auto model = ComplexModel::linear(1.0);
  const cplx ra = KmsEstimator<SpectralField>(a, model).exponential(phi1, phi2).estimate;
  const cplx rb = KmsEstimator<SpectralField>(b, model).exponential(phi1, phi2).estimate;
  const cplx rm = KmsEstimator<SpectralField>(m, model).exponential(phi1, phi2).estimate;
  EXPECT_NEAR(std::abs(rm - (0.3 * ra + 0.7 * rb)), 0.0, 1e-12);
}

TEST(Hierarchy, OrderZeroBothSidesAreTwoI) {
  for (auto [beta, n] : {std::pair{1.0, 0}, std::pair{2.0, 1}, std::pair{0.5, 2}}) {
    const auto e = free_ensemble(1, n, beta, 112 + n, 50000);
    auto l = e.samples[0].lattice_ptr();
    const std::size_t k = l->size() - 1;
    const auto phi = SpectralField::basis(l, k);
    const auto r = hierarchy_residual(e, ComplexModel::linear(beta), phi, phi, 0);
    EXPECT_TRUE(r.pass) << "beta=" << beta << " lambda=" << l->eigenvalue(k);
  }
}

TEST(Hierarchy, OrthogonalProbesAndHigherOrders) {
  const auto e = free_ensemble(1, 1, 1.0, 120, 100000);
  auto l = e.samples[0].lattice_ptr();
  const auto model = ComplexModel::linear(1.0);
  const auto r0 = hierarchy_residual(e, model, SpectralField::basis(l, 1), SpectralField::basis(l, 0), 0);
  EXPECT_LT(support::sigmas(r0), 4.0);
  for (int p : {1, 2}) {
    const auto r = hierarchy_residual(e, model, SpectralField::basis(l, 0), SpectralField::basis(l, 0), p);
    EXPECT_LT(support::sigmas(r), 4.0) << p;
  }
  EXPECT_THROW(hierarchy_residual(e, model, SpectralField::basis(l, 0), SpectralField::basis(l, 0), -1),
               std::invalid_argument);
}

TEST(Ibp, FreeFieldCases) {
  const auto e = free_ensemble(1, 2, 1.0, 121);
  auto l = e.samples[0].lattice_ptr();
  using TF = TestFunctional<SpectralField>;
  const auto e0 = SpectralField::basis(l, 0);
  EXPECT_LT(support::sigmas(ibp_residual(e, 1.0, TF::constant(), TF::cos(e0), e0)), 4.0);
  EXPECT_LT(support::sigmas(ibp_residual(e, 1.0, TF::sin(e0), TF::sin(e0), e0)), 4.0);
  const auto high = SpectralField::basis(l, l->size() - 1);
  EXPECT_LT(support::sigmas(ibp_residual(e, 1.0, TF::sin(e0), TF::cos(e0), high)), 4.0);
  auto w = e;
  w.weights = std::vector<double>(e.size(), 1.0);
  EXPECT_THROW(ibp_residual(w, 1.0, TF::sin(e0), TF::sin(e0), e0), std::invalid_argument);
}

TEST(DensityOde, AlgebraicIdentityHolds) {
  const auto spec = nls(4);
  const auto e = free_ensemble(1, 4, 1.0, 122, 20);
  const auto r = density_ode_residual(spec, e.samples, default_sobolev_exponent(1), nullptr, 1e-10);
  EXPECT_TRUE(r.pass) << r.estimate;
  InteractionSpec zero;
  zero.variant = Variant::Hartree1D;
  zero.dimension = 1;
  zero.cutoff = 4;
  zero.potential = Potential::power_law(0.0, 0.0);
  EXPECT_EQ(density_ode_residual(zero, e.samples, 0.0).estimate, cplx(0.0));
}

TEST(DensityOde, PerturbedDensityIsFlagged) {
  const auto spec = nls(4);
  const auto e = free_ensemble(1, 4, 1.0, 123, 20);
  InteractionEvaluator ev(spec);
  LogDensity wrong{[&](const SpectralField& u) { return -(ev.energy(u) + 0.1 * mass(u)); },
                   [&](const SpectralField& u) { return -1.0 * (ev.gradient(u) + 0.2 * u); }};
  const auto r = density_ode_residual(spec, e.samples, 0.0, &wrong);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.estimate.real(), 1e-3);
}

TEST(LocalKms, RadialFunctionalOnTheFocusingModel) {
  auto spec = nls(2);
  spec.focusing = true;
  spec.mass_cutoff = 1.0;
  const auto e0 = free_ensemble(1, 2, 1.0, 124, 100000);
  const auto e = with_weights(e0, gibbs_weights(e0, spec));
  auto l = e.samples[0].lattice_ptr();
  using TF = TestFunctional<SpectralField>;
  KmsEstimator<SpectralField> est(e, ComplexModel(spec));
  const auto r = est.bracket(TF::radial({1.0}), TF::sin(SpectralField::basis(l, 1, 0.8)));
  EXPECT_LT(support::sigmas(r), 4.0);
}

TEST(WaveKms, FreeWaveEnsemble) {
  auto l = build_lattice(1, 2);
  const auto e = sample_wave_pair({1.0, l, 125, 0}, 50000);
  KmsEstimator<FieldPair> est(e, WaveModel::linear(1.0));
  const auto p1 = support::random_real_pair(l, 1, 0.5), p2 = support::random_real_pair(l, 2, 0.5);
  EXPECT_LT(support::sigmas(est.exponential(p1, p2)), 4.0);
  const auto bad = make_pair(SpectralField::basis(l, 1), SpectralField(l));
  EXPECT_THROW(est.exponential(bad, p2), std::invalid_argument);
  EXPECT_THROW(est.hierarchy(p1, p2, 0), std::invalid_argument);
}
