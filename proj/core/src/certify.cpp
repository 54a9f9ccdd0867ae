#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "anyon/error.hpp"
#include "anyon/fields.hpp"
#include "anyon/initial.hpp"
#include "anyon/verify.hpp"

namespace anyon {

InequalityReport check_kernel_norms(const std::vector<double>& exponents, const std::vector<double>& radii) {
  InequalityReport rep;
  rep.id = "kernel-lp-norm";
  rep.tolerance = 5e-3;
  for (double p : exponents) {
    for (double r : radii) {
      const SmearingRadius R(r);
      // |grad w_R| = |x| / R^2 inside the disc and 1 / |x| outside.
      auto inside = [&](double s) { return std::pow(s / (r * r), p) * 2.0 * std::numbers::pi * s; };
      auto outside = [&](double s) { return std::pow(s + r, -p) * 2.0 * std::numbers::pi * (s + r); };
      const double a = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inside, 0.0, r, 15, 1e-14);
      const double b = boost::math::quadrature::exp_sinh<double>().integrate(outside, 1e-14);
      const double quad = std::pow(a + b, 1.0 / p);
      const double closed = lp_norm_grad_wR(p, R);
      rep.record(std::abs(closed - quad) / quad);
    }
  }
  rep.parameters["exponents"] = static_cast<double>(exponents.size());
  rep.parameters["radii"] = static_cast<double>(radii.size());
  rep.finish();
  return rep;
}

InequalityReport check_gauge_oracle(const Grid2D& grid, double sigma) {
  InequalityReport rep;
  rep.id = "gauge-oracle";
  rep.tolerance = 1e-3;
  const int n = grid.n;
  ScalarField rho(grid);
  WaveField amp(grid);
  const double s2 = sigma * sigma;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double x = grid.coord(a), y = grid.coord(b);
      const double v = std::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
      rho.data[static_cast<std::size_t>(a) * n + b] = v;
      amp(a, b) = std::sqrt(v);
    }
  }
  const KernelSpectrum kspec(grid, SmearingRadius(0.0));
  const VectorField A = gauge_field(rho, kspec);
  double num = 0.0, den = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double x = grid.coord(a), y = grid.coord(b);
      if (std::abs(x) >= grid.L / 4 || std::abs(y) >= grid.L / 4) continue;
      const double r2 = x * x + y * y;
      double ex = 0.0, ey = 0.0;
      if (r2 > 0.0) {
        const double f = (1.0 - std::exp(-r2 / (2.0 * s2))) / r2;
        ex = -y * f;
        ey = x * f;
      }
      const std::size_t i = static_cast<std::size_t>(a) * n + b;
      num += (A.x[i] - ex) * (A.x[i] - ex) + (A.y[i] - ey) * (A.y[i] - ey);
      den += ex * ex + ey * ey;
    }
  }
  rep.record(std::sqrt(num / den));
  rep.parameters["sigma"] = sigma;
  rep.parameters["grid.n"] = n;
  rep.parameters["grid.L"] = grid.L;
  rep.parameters["boundary_mass"] = boundary_mass(amp);
  rep.finish();
  return rep;
}

std::vector<InequalityReport> check_projector_algebra(const Grid2D& grid, int N, int samples, std::uint64_t seed) {
  GaussianSpec spec;
  spec.sigma = grid.L / 8.0;
  WaveField phi = gaussian(grid, spec);
  normalize(phi);
  const ProjectorAlgebra alg(N, phi);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto names = {"projector-identity", "projector-m1", "projector-semigroup", "projector-shift",
                "projector-shift-bound", "projector-symmetric-weight"};
  std::vector<InequalityReport> reps;
  for (const char* id : names) {
    InequalityReport r;
    r.id = id;
    r.tolerance = 1e-10;
    r.seed = seed;
    r.parameters["N"] = N;
    r.parameters["grid.n"] = grid.n;
    reps.push_back(r);
  }
  auto diff_norm = [](const ManyBodyState& a, const ManyBodyState& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
    return std::sqrt(s * a.weight());
  };

  for (int s = 0; s < samples; ++s) {
    // A random symmetric state lives almost entirely in P_N; rebalance the
    // sectors with random weights so that every P_k is exercised.
    ManyBodyState raw(N, grid);
    for (auto& z : raw.data) z = {gauss(rng), gauss(rng)};
    raw = symmetrize(raw);
    ManyBodyState psi(N, grid);
    for (const auto& sector : alg.sectors(raw)) {
      const cplx w = cplx{gauss(rng), gauss(rng)} / norm(sector);
      for (std::size_t i = 0; i < psi.data.size(); ++i) psi.data[i] += w * sector.data[i];
    }
    normalize(psi);

    const auto parts = alg.sectors(psi);
    ManyBodyState sum(N, grid);
    for (const auto& p : parts) {
      for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += p.data[i];
    }
    reps[0].record(diff_norm(sum, psi));

    const ManyBodyState m1 = alg.m_hat(1.0, psi);
    ManyBodyState qsum(N, grid);
    for (int j = 0; j < N; ++j) {
      const ManyBodyState qj = alg.q(j, psi);
      for (std::size_t i = 0; i < qsum.data.size(); ++i) qsum.data[i] += qj.data[i] / static_cast<double>(N);
    }
    reps[1].record(diff_norm(m1, qsum));
    reps[2].record(diff_norm(alg.m_hat(0.5, alg.m_hat(0.5, psi)), m1));

    // (m_hat(1) - shifted m_hat(1)) q_j psi = q_j psi / N.
    for (int j = 0; j < N; ++j) {
      const ManyBodyState qj = alg.q(j, psi);
      ManyBodyState lhs = alg.m_hat(1.0, qj);
      const ManyBodyState sh = alg.m_hat_shifted(1.0, 1, qj);
      for (std::size_t i = 0; i < lhs.data.size(); ++i) lhs.data[i] -= sh.data[i] + qj.data[i] / static_cast<double>(N);
      reps[3].record(norm(lhs));
    }

    // <q1 psi, (m_hat(1/2) - shifted_n m_hat(1/2)) q1 psi> <= (n/N) <q1 psi, m_hat(-1/2) q1 psi>.
    const ManyBodyState q1 = alg.q(0, psi);
    for (int shift = 1; shift <= N; ++shift) {
      const double lhs = inner(q1, alg.m_hat(0.5, q1)).real() - inner(q1, alg.m_hat_shifted(0.5, shift, q1)).real();
      const double rhs = static_cast<double>(shift) / N * inner(q1, alg.m_hat(-0.5, q1)).real();
      reps[4].record(lhs - rhs);
    }

    // N (N - 1) <psi, f q1 q2 psi> <= N^2 <psi, f m_hat(2) psi> with f = m_hat(-1),
    // evaluated on the part of psi orthogonal to P_0.
    if (N >= 2) {
      ManyBodyState chi = psi;
      for (std::size_t i = 0; i < chi.data.size(); ++i) chi.data[i] -= parts[0].data[i];
      normalize(chi);
      const ManyBodyState fchi = alg.m_hat(-1.0, chi);
      const double lhs = static_cast<double>(N) * (N - 1) * inner(fchi, alg.q(0, alg.q(1, chi))).real();
      const double rhs = static_cast<double>(N) * N * inner(fchi, alg.m_hat(2.0, chi)).real();
      reps[5].record(lhs - rhs);
    }
  }
  for (auto& r : reps) r.finish();
  return reps;
}

}  // namespace anyon
