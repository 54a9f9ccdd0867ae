#include "anyon/spectral.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace anyon {

std::vector<double> wavenumbers(const Grid2D& grid) {
  const int n = grid.n;
  const double dk = 2.0 * std::numbers::pi / grid.L;
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) k[i] = dk * (i < n / 2 ? i : i - n);
  return k;
}

std::vector<cplx> fft2(std::vector<cplx> values, const Grid2D& grid) {
  detail::dft2(values.data(), grid.n, -1);
  return values;
}

std::vector<cplx> ifft2(std::vector<cplx> spectrum, const Grid2D& grid) {
  detail::dft2(spectrum.data(), grid.n, +1);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : spectrum) z *= scale;
  return spectrum;
}

Gradient gradient_from_spectrum(const std::vector<cplx>& spectrum, const Grid2D& grid) {
  const int n = grid.n;
  const auto k = wavenumbers(grid);
  Gradient g{std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size())};
  const cplx I{0.0, 1.0};
  for (int a = 0; a < n; ++a) {
    const double kx = a == n / 2 ? 0.0 : k[a];
    for (int b = 0; b < n; ++b) {
      const double ky = b == n / 2 ? 0.0 : k[b];
      const std::size_t idx = static_cast<std::size_t>(a) * n + b;
      g.x[idx] = I * kx * spectrum[idx];
      g.y[idx] = I * ky * spectrum[idx];
    }
  }
  g.x = ifft2(std::move(g.x), grid);
  g.y = ifft2(std::move(g.y), grid);
  return g;
}

Gradient gradient(const std::vector<cplx>& values, const Grid2D& grid) {
  return gradient_from_spectrum(fft2(values, grid), grid);
}

std::vector<cplx> divergence(const std::vector<cplx>& fx, const std::vector<cplx>& fy, const Grid2D& grid) {
  const int n = grid.n;
  const auto k = wavenumbers(grid);
  auto sx = fft2(fx, grid);
  auto sy = fft2(fy, grid);
  const cplx I{0.0, 1.0};
  for (int a = 0; a < n; ++a) {
    const double kx = a == n / 2 ? 0.0 : k[a];
    for (int b = 0; b < n; ++b) {
      const double ky = b == n / 2 ? 0.0 : k[b];
      const std::size_t idx = static_cast<std::size_t>(a) * n + b;
      sx[idx] = I * (kx * sx[idx] + ky * sy[idx]);
    }
  }
  return ifft2(std::move(sx), grid);
}

std::vector<double> divergence(const VectorField& f) {
  std::vector<cplx> fx(f.x.begin(), f.x.end());
  std::vector<cplx> fy(f.y.begin(), f.y.end());
  const auto d = divergence(fx, fy, f.grid);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].real();
  return out;
}

std::vector<cplx> laplacian(const std::vector<cplx>& values, const Grid2D& grid) {
  const int n = grid.n;
  const auto k = wavenumbers(grid);
  auto s = fft2(values, grid);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) s[static_cast<std::size_t>(a) * n + b] *= -(k[a] * k[a] + k[b] * k[b]);
  }
  return ifft2(std::move(s), grid);
}

void free_propagate(std::vector<cplx>& values, const Grid2D& grid, double tau) {
  const int n = grid.n;
  const auto k = wavenumbers(grid);
  values = fft2(std::move(values), grid);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double phase = -(k[a] * k[a] + k[b] * k[b]) * tau;
      values[static_cast<std::size_t>(a) * n + b] *= std::polar(1.0, phase);
    }
  }
  values = ifft2(std::move(values), grid);
}

}  // namespace anyon
