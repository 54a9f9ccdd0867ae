#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "anyon/grid.hpp"
#include "anyon/kernels.hpp"
#include "anyon/manybody.hpp"

namespace anyon {

struct InequalityReport {
  std::string id;
  std::size_t samples = 0;
  double worst_margin = 0.0;  // max over samples of (lhs - bound)
  double tolerance = 0.0;
  std::optional<double> fitted_constant;
  std::vector<std::pair<double, double>> fitted_by_radius;  // (R, fitted constant)
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
  bool pass = false;

  void record(double margin);
  void finish() { pass = worst_margin <= tolerance; }
};

enum class SmoothnessClass { L2, H1, H2 };

// Random superpositions of 3 to 6 Gaussian wave packets, hard band-limited
// to `band_fraction` of the Nyquist wavenumber and normalized in the chosen
// norm.
class TestFunctionSampler {
 public:
  TestFunctionSampler(const Grid2D& grid, std::uint64_t seed, SmoothnessClass cls = SmoothnessClass::H1,
                      double band_fraction = 1.0 / 3.0);

  WaveField sample();
  // Band-limited superposition before normalization.
  WaveField raw();

  const Grid2D& grid() const { return grid_; }
  std::uint64_t seed() const { return seed_; }
  SmoothnessClass smoothness() const { return cls_; }

 private:
  Grid2D grid_;
  std::uint64_t seed_;
  SmoothnessClass cls_;
  double band_;
  std::mt19937_64 rng_;
};

// <f, |grad w_R(x - y)|^2 f> for a two-particle f (particles 0 and 1).
double pair_singular_form(const ManyBodyState& f, SmearingRadius R);
// ||v f||^2 with v = K(x - y).p_x + p_x.K(x - y), x = particle 0.
double pair_mixed_form(const ManyBodyState& f, SmearingRadius R);
// <f, grad_perp w_R(x - y) . grad_perp w_R(x - z) f>, x = particle 0.
double three_body_form(const ManyBodyState& f, SmearingRadius R);

// Reports: pair-singular-sup, pair-singular-log, pair-mixed-xx, pair-mixed-xy.
// The first radius is the reference at which the constants are fitted.
std::vector<InequalityReport> check_two_body_forms(const Grid2D& grid, const std::vector<double>& radii, int samples,
                                                   std::uint64_t seed);

// Reports: three-body-positivity, three-body-upper. Samples are symmetric
// under every permutation of the three particles.
std::vector<InequalityReport> check_three_body_positivity(const Grid2D& grid, SmearingRadius R, int samples,
                                                          std::uint64_t seed);

// Reports: gauge-quartic, diamagnetic.
std::vector<InequalityReport> check_gauge_bounds(TestFunctionSampler& sampler, SmearingRadius R, double beta,
                                               int samples);

// Closed-form L^p norms of grad w_R against adaptive radial quadrature
// (relative error, tolerance 0.5%).
InequalityReport check_kernel_norms(const std::vector<double>& exponents, const std::vector<double>& radii);

// Free-space gauge field of a unit-mass Gaussian density with variance sigma^2
// at R = 0 against x_perp / |x|^2 (1 - exp(-|x|^2 / (2 sigma^2))), relative L^2
// error on the inner half of the box (tolerance 1e-3).
InequalityReport check_gauge_oracle(const Grid2D& grid, double sigma);

// Resolution of identity, m_hat(1) = N^-1 sum_j q_j, m_hat(1/2)^2 = m_hat(1)
// and the shift identities on random symmetric states.
std::vector<InequalityReport> check_projector_algebra(const Grid2D& grid, int N, int samples, std::uint64_t seed);

// Relative Hilbert-Schmidt distance between the one-particle limit of the
// hierarchy (two-body traces taken from `two_body_state`, three-body traces
// contracted with |phi|^2) and the commutator of the mean-field generator with
// |phi><phi|.
double hierarchy_residual(const WaveField& phi, double beta, SmearingRadius R, const KernelSpectrum& kspec);
double hierarchy_residual(const WaveField& phi, double beta, SmearingRadius R, const KernelSpectrum& kspec,
                          const ManyBodyState& two_body_state);

}  // namespace anyon
