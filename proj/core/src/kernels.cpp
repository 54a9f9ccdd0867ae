#include "anyon/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "anyon/error.hpp"
#include "fft.hpp"

namespace anyon {

SmearingRadius::SmearingRadius(double r) : r_(r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::Config, "smearing radius must be finite and >= 0");
  }
}

bool SmearingRadius::in_log_regime() const { return r_ > 0.0 && r_ < std::exp(-1.0); }

double eval_wR(Vec2 x, SmearingRadius R) {
  const double r2 = x.x * x.x + x.y * x.y;
  const double R2 = R.value() * R.value();
  if (R.is_point() && r2 == 0.0) throw Error(ErrorKind::Singular, "w_0 is singular at the origin");
  if (r2 >= R2) return 0.5 * std::log(r2);
  return std::log(R.value()) + (r2 - R2) / (2.0 * R2);
}

Vec2 grad_perp_wR_sample(double x, double y, double R) {
  const double d = std::max(R * R, x * x + y * y);
  if (d == 0.0) return {0.0, 0.0};
  return {-y / d, x / d};
}

Vec2 eval_grad_perp_wR(Vec2 x, SmearingRadius R) {
  if (R.is_point() && x.x == 0.0 && x.y == 0.0) {
    throw Error(ErrorKind::Singular, "grad w_0 is singular at the origin");
  }
  return grad_perp_wR_sample(x.x, x.y, R.value());
}

double lp_norm_grad_wR(double p, SmearingRadius R) {
  if (!(p > 2.0)) throw Error(ErrorKind::Domain, "lp_norm_grad_wR requires p > 2");
  if (R.is_point()) throw Error(ErrorKind::Domain, "lp_norm_grad_wR requires R > 0");
  const double c = 4.0 * std::numbers::pi * p / (p * p - 4.0);
  return std::pow(c, 1.0 / p) * std::pow(R.value(), 2.0 / p - 1.0);
}

double sup_grad_wR(SmearingRadius R) {
  if (R.is_point()) throw Error(ErrorKind::Domain, "sup_grad_wR requires R > 0");
  return 1.0 / R.value();
}

KernelSpectrum::KernelSpectrum(const Grid2D& grid, SmearingRadius R) : grid_(grid), radius_(R) {
  grid_.validate();
  const double h = grid_.h();
  if (!R.is_point() && R.value() < 2.0 * h) {
    std::ostringstream msg;
    msg << "kernel under-resolved: R = " << R.value() << " < 2h = " << 2.0 * h;
    warn(msg.str());
  }
  const int n = grid_.n;
  const int m = 2 * n;
  const std::size_t total = static_cast<std::size_t>(m) * m;
  kx_.assign(total, cplx{});
  ky_.assign(total, cplx{});
  // Index a maps to displacement a*h for a < n and (a - 2n)*h otherwise. The
  // a = n line (displacement -n*h) never enters a product of two n-point
  // grids, so it is left at zero to keep the sampled kernel exactly odd.
  for (int a = 0; a < m; ++a) {
    if (a == n) continue;
    const double dx = (a < n ? a : a - m) * h;
    for (int b = 0; b < m; ++b) {
      if (b == n) continue;
      const double dy = (b < n ? b : b - m) * h;
      const Vec2 k = grad_perp_wR_sample(dx, dy, R.value());
      const std::size_t idx = static_cast<std::size_t>(a) * m + b;
      kx_[idx] = k.x;
      ky_[idx] = k.y;
    }
  }
  detail::dft2(kx_.data(), m, -1);
  detail::dft2(ky_.data(), m, -1);
}

VectorField KernelSpectrum::convolve(const ScalarField& rho) const {
  require_same_grid(rho.grid, grid_, "gauge convolution");
  const int n = grid_.n;
  const int m = 2 * n;
  std::vector<cplx> buf(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) buf[static_cast<std::size_t>(a) * m + b] = rho.data[static_cast<std::size_t>(a) * n + b];
  }
  detail::dft2(buf.data(), m, -1);
  // The two real outputs are packed as real and imaginary parts.
  const cplx I{0.0, 1.0};
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= kx_[i] + I * ky_[i];
  detail::dft2(buf.data(), m, +1);
  const double scale = grid_.weight() / static_cast<double>(buf.size());
  VectorField out(grid_);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const cplx z = buf[static_cast<std::size_t>(a) * m + b] * scale;
      out.x[static_cast<std::size_t>(a) * n + b] = z.real();
      out.y[static_cast<std::size_t>(a) * n + b] = z.imag();
    }
  }
  return out;
}

ScalarField KernelSpectrum::contract(const VectorField& v) const {
  require_same_grid(v.grid, grid_, "kernel contraction");
  const int n = grid_.n;
  const int m = 2 * n;
  std::vector<cplx> w(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const std::size_t src = static_cast<std::size_t>(a) * n + b;
      w[static_cast<std::size_t>(a) * m + b] = cplx{v.x[src], v.y[src]};
    }
  }
  detail::dft2(w.data(), m, -1);
  // Split W = FFT(v1 + i v2) into the spectra of v1 and v2 through the
  // conjugate-symmetric and antisymmetric parts.
  std::vector<cplx> s(w.size());
  const cplx I{0.0, 1.0};
  for (int a = 0; a < m; ++a) {
    const int na = a == 0 ? 0 : m - a;
    for (int b = 0; b < m; ++b) {
      const int nb = b == 0 ? 0 : m - b;
      const std::size_t idx = static_cast<std::size_t>(a) * m + b;
      const cplx wk = w[idx];
      const cplx wm = std::conj(w[static_cast<std::size_t>(na) * m + nb]);
      const cplx v1 = 0.5 * (wk + wm);
      const cplx v2 = (wk - wm) / (2.0 * I);
      s[idx] = kx_[idx] * v1 + ky_[idx] * v2;
    }
  }
  detail::dft2(s.data(), m, +1);
  const double scale = grid_.weight() / static_cast<double>(s.size());
  ScalarField out(grid_);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) out.data[static_cast<std::size_t>(a) * n + b] = s[static_cast<std::size_t>(a) * m + b].real() * scale;
  }
  return out;
}

KernelSpectrum kernel_spectrum(const Grid2D& grid, SmearingRadius R) { return KernelSpectrum(grid, R); }

}  // namespace anyon
