#include <gtest/gtest.h>

#include <cmath>

#include "kmslab/diagnostics.hpp"
#include "support.hpp"

using namespace kmslab;

namespace {
const ResidualReport& find(const std::vector<ResidualReport>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.identity == id) return r;
  throw std::runtime_error("missing report " + id);
}
}  // namespace

TEST(Diagnostics, ZeroModeCovarianceAndCharacteristic) {
  auto l = build_lattice(1, 0);
  const auto e = sample_free({1.0, l, 61, 0}, 100000);
  const auto rs = gaussian_diagnostics(e, {SpectralField::basis(l, 0)}, 1.0);
  const auto& cov = find(rs, "covariance[0,0]");
  EXPECT_TRUE(cov.pass);
  EXPECT_DOUBLE_EQ(cov.details.at("target"), 1.0);
  const auto& ch = find(rs, "characteristic[0]");
  EXPECT_TRUE(ch.pass);
  EXPECT_NEAR(ch.details.at("target"), std::exp(-0.5), 1e-15);
}

TEST(Diagnostics, ZeroProbeHasExactCharacteristicOne) {
  auto l = build_lattice(1, 1);
  const auto e = sample_free({1.0, l, 62, 0}, 1000);
  const auto rs = gaussian_diagnostics(e, {SpectralField(l)}, 1.0);
  const auto& ch = find(rs, "characteristic[0]");
  EXPECT_EQ(ch.estimate, cplx(0.0));
  EXPECT_TRUE(ch.pass);
}

TEST(Diagnostics, AllBasisProbesPassInTwoDimensions) {
  auto l = build_lattice(2, 2);
  const auto e = sample_free({1.5, l, 63, 0}, 50000);
  const auto rs = gaussian_diagnostics(e, basis_probes(l), 1.5);
  int fails = 0;
  for (const auto& r : rs) {
    fails += !r.pass;
    EXPECT_LT(support::sigmas(r), 5.0) << r.identity;
  }
  EXPECT_LE(fails, 3) << "of " << rs.size();
}

TEST(Diagnostics, WaveEnsemble) {
  auto l = build_lattice(1, 2);
  const auto e = sample_wave_pair({1.0, l, 64, 0}, 50000);
  const auto probes = wave_basis_probes(l);
  EXPECT_EQ(probes.size(), 2 * l->size());
  for (const auto& p : probes) EXPECT_TRUE(is_real_field(p, 0.0));
  for (const auto& r : gaussian_diagnostics(e, probes, 1.0)) EXPECT_LT(support::sigmas(r), 5.0) << r.identity;
}

TEST(Diagnostics, DetectsAWrongTemperature) {
  auto l = build_lattice(1, 1);
  const auto e = sample_free({1.0, l, 65, 0}, 50000);
  const auto rs = gaussian_diagnostics(e, basis_probes(l), 2.0);
  double worst = 0;
  for (const auto& r : rs) worst = std::max(worst, support::sigmas(r));
  EXPECT_GT(worst, 5.0);
}

TEST(Diagnostics, RejectsWeightedEnsemblesAndComplexWaveProbes) {
  auto l = build_lattice(1, 1);
  auto e = sample_free({1.0, l, 66, 0}, 100);
  e.weights = std::vector<double>(100, 1.0);
  EXPECT_THROW(gaussian_diagnostics(e, basis_probes(l), 1.0), std::invalid_argument);
  const auto w = sample_wave_pair({1.0, l, 67, 0}, 100);
  std::vector<FieldPair> bad{make_pair(SpectralField::basis(l, 1), SpectralField(l))};
  EXPECT_THROW(gaussian_diagnostics(w, bad, 1.0), std::invalid_argument);
}

TEST(Diagnostics, SerialAndParallelAgree) {
  auto l = build_lattice(1, 2);
  const auto e = sample_free({1.0, l, 68, 0}, 2000);
  const auto a = gaussian_diagnostics(e, basis_probes(l), 1.0, {}, Exec::Serial);
  const auto b = gaussian_diagnostics(e, basis_probes(l), 1.0, {}, Exec::Parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].estimate, b[i].estimate);
}
