#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "anyon/error.hpp"
#include "anyon/fields.hpp"
#include "anyon/observables.hpp"
#include "anyon/spectral.hpp"
#include "anyon/verify.hpp"
#include "support.hpp"

using namespace anyon;

TEST(Sampler, SeededAndReproducible) {
  const Grid2D g(32, 8.0);
  TestFunctionSampler a(g, 42), b(g, 42), c(g, 43);
  const WaveField ua = a.sample(), ub = b.sample(), uc = c.sample();
  EXPECT_EQ(ua.data, ub.data);
  EXPECT_NE(ua.data, uc.data);
}

TEST(Sampler, BandLimitedAndNormalized) {
  const Grid2D g(32, 8.0);
  for (SmoothnessClass cls : {SmoothnessClass::L2, SmoothnessClass::H1, SmoothnessClass::H2}) {
    TestFunctionSampler s(g, 1, cls);
    const WaveField u = s.sample();
    const double expected = cls == SmoothnessClass::L2 ? 0.0 : cls == SmoothnessClass::H1 ? 1.0 : 2.0;
    EXPECT_NEAR(sobolev_norm(u, expected), 1.0, 1e-12);
    const auto spec = fft2(u.data, g);
    const auto k = wavenumbers(g);
    const double kb = std::numbers::pi / g.h() / 3.0;
    for (int a = 0; a < g.n; ++a) {
      for (int b = 0; b < g.n; ++b) {
        if (std::abs(k[a]) > kb || std::abs(k[b]) > kb) {
          EXPECT_LT(std::abs(spec[a * g.n + b]), 1e-13);
        }
      }
    }
  }
}

TEST(Inequalities, TwoBodyFormsHold) {
  const auto reps = check_two_body_forms(Grid2D(16, 2.0), {0.3, 0.1}, 20, 5);
  ASSERT_EQ(reps.size(), 4u);
  for (const auto& r : reps) {
    EXPECT_TRUE(r.pass) << r.id << " margin " << r.worst_margin;
    EXPECT_EQ(r.samples, 20u);
  }
  EXPECT_TRUE(reps[1].fitted_constant.has_value());
  EXPECT_EQ(reps[1].fitted_by_radius.size(), 2u);
}

TEST(Inequalities, RadiiMustLieInLogRegime) {
  EXPECT_THROW(check_two_body_forms(Grid2D(16, 2.0), {0.5, 0.1}, 2, 1), Error);
  EXPECT_THROW(check_two_body_forms(Grid2D(16, 2.0), {0.1, 0.3}, 2, 1), Error);
}

TEST(Inequalities, ThreeBodyFormNonNegative) {
  const auto reps = check_three_body_positivity(Grid2D(8, 2.0), SmearingRadius(0.3), 20, 9);
  ASSERT_EQ(reps.size(), 2u);
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.id << " margin " << r.worst_margin;
}

TEST(Inequalities, GaugeQuarticAndDiamagnetic) {
  TestFunctionSampler s(Grid2D(64, 12.0), 3);
  const auto reps = check_gauge_bounds(s, SmearingRadius(0.3), 0.8, 10);
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.id << " margin " << r.worst_margin;
}

TEST(Inequalities, DiamagneticEqualityForRealFields) {
  // For real u the cross term vanishes: |(grad + i beta A) u|^2 = |grad u|^2 + beta^2 |A|^2 u^2.
  const Grid2D g(64, 14.0);
  GaussianSpec s;
  s.sigma = 1.2;
  s.center = {0.5, -0.3};
  WaveField u = gaussian(g, s);
  normalize(u);
  const double beta = 0.7;
  const KernelSpectrum ks(g, SmearingRadius(0.3));
  const EnergyReport e = energy_af(u, beta, ks);
  EXPECT_NEAR(e.cross, 0.0, 1e-14);
  EXPECT_NEAR(energy_af_direct(u, beta, ks), e.kinetic + e.quartic, 1e-10);
}

TEST(Inequalities, ZeroFieldGivesZeroForms) {
  const Grid2D g(16, 2.0);
  const ManyBodyState zero(2, g);
  EXPECT_EQ(pair_singular_form(zero, SmearingRadius(0.1)), 0.0);
  EXPECT_EQ(pair_mixed_form(zero, SmearingRadius(0.1)), 0.0);
}

TEST(Certification, KernelNormsAndGaugeOracle) {
  EXPECT_TRUE(check_kernel_norms({3, 4, 6}, {0.1, 0.5, 1.0}).pass);
  const InequalityReport g = check_gauge_oracle(Grid2D(256, 20.0), 1.0);
  EXPECT_TRUE(g.pass) << g.worst_margin;
  EXPECT_LT(g.parameters.at("boundary_mass"), 1e-12);
}

TEST(Certification, ProjectorAlgebra) {
  for (const auto& r : check_projector_algebra(Grid2D(8, 4.0), 2, 3, 1)) EXPECT_TRUE(r.pass) << r.id;
}

TEST(Hierarchy, FreeCaseIsExact) {
  const Grid2D g(16, 10.0);
  const WaveField u = testing_support::two_packets(g);
  EXPECT_LT(hierarchy_residual(u, 0.0, SmearingRadius(0.5), KernelSpectrum(g, SmearingRadius(0.5))), 1e-14);
}

TEST(Hierarchy, ProductAnsatzClosesAndPerturbationDoesNot) {
  const Grid2D g(16, 10.0);
  const SmearingRadius R(0.5);
  const KernelSpectrum ks(g, R);
  const WaveField u = testing_support::two_packets(g);
  EXPECT_LT(hierarchy_residual(u, 0.4, R, ks), 1e-8);
  ManyBodyState probe = tensor_power(u, 2);
  const ManyBodyState noise = symmetrize(testing_support::random_state(2, g, 4));
  for (std::size_t i = 0; i < probe.data.size(); ++i) probe.data[i] += 0.5 * noise.data[i];
  normalize(probe);
  EXPECT_GT(hierarchy_residual(u, 0.4, R, ks, probe), 1e-4);
}
