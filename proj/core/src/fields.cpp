#include "anyon/fields.hpp"

#include <cmath>

#include "anyon/spectral.hpp"

namespace anyon {

ScalarField density(const WaveField& u) {
  ScalarField rho(u.grid);
  for (std::size_t i = 0; i < u.data.size(); ++i) rho.data[i] = std::norm(u.data[i]);
  return rho;
}

VectorField current(const WaveField& u) {
  const Gradient du = gradient(u.data, u.grid);
  VectorField J(u.grid);
  for (std::size_t i = 0; i < u.data.size(); ++i) {
    const cplx ub = std::conj(u.data[i]);
    J.x[i] = 2.0 * (ub * du.x[i]).imag();
    J.y[i] = 2.0 * (ub * du.y[i]).imag();
  }
  return J;
}

VectorField gauge_field(const ScalarField& rho, const KernelSpectrum& kspec) { return kspec.convolve(rho); }

ScalarField scalar_term(const WaveField& u, const VectorField& A, const KernelSpectrum& kspec, double beta) {
  require_same_grid(u.grid, kspec.grid(), "scalar_term");
  require_same_grid(A.grid, kspec.grid(), "scalar_term");
  if (beta == 0.0) return ScalarField(u.grid);
  VectorField src = current(u);
  for (std::size_t i = 0; i < u.data.size(); ++i) {
    const double rho = std::norm(u.data[i]);
    src.x[i] += 2.0 * beta * A.x[i] * rho;
    src.y[i] += 2.0 * beta * A.y[i] * rho;
  }
  ScalarField s = kspec.contract(src);
  for (auto& v : s.data) v *= beta;
  return s;
}

double boundary_mass(const WaveField& u, double frame) {
  const int n = u.grid.n;
  const double inner = 0.5 * u.grid.L * (1.0 - 2.0 * frame);
  double m = 0.0;
  for (int a = 0; a < n; ++a) {
    const double x = u.grid.coord(a);
    for (int b = 0; b < n; ++b) {
      const double y = u.grid.coord(b);
      if (std::abs(x) >= inner || std::abs(y) >= inner) m += std::norm(u(a, b));
    }
  }
  return m * u.grid.weight();
}

void dealias(WaveField& u) {
  const int n = u.grid.n;
  auto s = fft2(u.data, u.grid);
  const int cut = n / 3;
  for (int a = 0; a < n; ++a) {
    const int ia = a < n / 2 ? a : n - a;
    for (int b = 0; b < n; ++b) {
      const int ib = b < n / 2 ? b : n - b;
      if (ia > cut || ib > cut) s[static_cast<std::size_t>(a) * n + b] = 0.0;
    }
  }
  u.data = ifft2(std::move(s), u.grid);
}

}  // namespace anyon
