#include <gtest/gtest.h>

#include <cmath>

#include "anyon/observables.hpp"
#include "support.hpp"

using namespace anyon;

TEST(Observables, GaussianSobolevNorms) {
  const Grid2D g(128, 20.0);
  GaussianSpec s;
  s.sigma = 1.3;
  const WaveField u = gaussian(g, s);
  // |u_hat|^2 is a Gaussian with <|k|^2> = 1/sigma^2 and <|k|^4> = 2/sigma^4.
  const double k2 = 1.0 / (s.sigma * s.sigma);
  EXPECT_NEAR(sobolev_norm(u, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(sobolev_norm(u, 1.0), std::sqrt(1.0 + k2), 1e-12);
  EXPECT_NEAR(sobolev_norm(u, 2.0), std::sqrt(1.0 + 2 * k2 + 2 * k2 * k2), 1e-12);
}

TEST(Observables, EnergyDecompositionMatchesSquaredNorm) {
  const Grid2D g(64, 14.0);
  const WaveField u = testing_support::two_packets(g);
  const KernelSpectrum ks(g, SmearingRadius(0.3));
  for (double beta : {0.0, 0.2, 1.0, -0.7}) {
    const EnergyReport e = energy_af(u, beta, ks);
    EXPECT_NEAR(e.total, e.kinetic + e.cross + e.quartic, 1e-14);
    EXPECT_NEAR(e.total, energy_af_direct(u, beta, ks), 1e-10 * e.total);
  }
  EXPECT_GT(std::abs(energy_af(u, 0.5, ks).cross), 1e-3);
}

TEST(Observables, EnergyGapVanishesAtReferenceRadius) {
  const Grid2D g(32, 12.0);
  const WaveField u = testing_support::two_packets(g);
  EXPECT_EQ(energy_gap_R(u, 0.3, SmearingRadius(0.0)), 0.0);
  EXPECT_GT(energy_gap_R(u, 0.3, SmearingRadius(0.8)), 0.0);
}

TEST(Observables, ModulusDirichletOfPositiveField) {
  const Grid2D g(64, 16.0);
  GaussianSpec s;
  s.sigma = 1.1;
  const WaveField u = gaussian(g, s);
  EXPECT_NEAR(modulus_dirichlet(u), 1.0 / (s.sigma * s.sigma), 1e-8);
}

TEST(Observables, CsvRoundTripsDoubles) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  DiagnosticsRow row;
  row.t = 0.5;
  row.mass = 1.0;
  EXPECT_EQ(diagnostics_csv_header(), "t,mass,E_total,E_kinetic,E_cross,E_quartic,H1,H2");
  EXPECT_EQ(to_csv(row).substr(0, 6), "0.5,1,");
}
