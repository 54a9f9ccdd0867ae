#include "tensor.hpp"

#include "anyon/spectral.hpp"
#include "fft.hpp"

namespace anyon::detail {

PairKernel::PairKernel(const Grid2D& grid, double R, bool minimal_image) : n_(grid.n) {
  const int m = 2 * n_ - 1;
  kx_.assign(static_cast<std::size_t>(m) * m, 0.0);
  ky_.assign(static_cast<std::size_t>(m) * m, 0.0);
  const double h = grid.h();
  auto wrap = [&](int d, bool& seam) {
    int w = ((d % n_) + n_) % n_;
    if (w == n_ / 2) seam = true;
    return w < n_ / 2 ? w : w - n_;
  };
  for (int da = -(n_ - 1); da <= n_ - 1; ++da) {
    for (int db = -(n_ - 1); db <= n_ - 1; ++db) {
      int ea = da;
      int eb = db;
      bool seam = false;
      if (minimal_image) {
        ea = wrap(da, seam);
        eb = wrap(db, seam);
      }
      if (seam) continue;
      const Vec2 k = grad_perp_wR_sample(ea * h, eb * h, R);
      const std::size_t i = static_cast<std::size_t>(da + n_ - 1) * m + static_cast<std::size_t>(db + n_ - 1);
      kx_[i] = k.x;
      ky_[i] = k.y;
    }
  }
}

void particle_dft(std::vector<cplx>& data, const TensorShape& shape, int j, int sign) {
  dft_axes(data.data(), shape.n, 2 * shape.N, 2 * j, sign);
}

namespace {

// Multiplies the particle-j spectrum by symbol(ka, kb).
template <class Symbol>
void apply_symbol(std::vector<cplx>& spec, const TensorShape& shape, int j, Symbol symbol) {
  const std::size_t stride = shape.stride(j);
  const std::size_t block = stride * shape.one_body();
  const int n = shape.n;
  for (std::size_t base = 0; base < spec.size(); base += block) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const cplx f = symbol(a, b);
        cplx* p = spec.data() + base + (static_cast<std::size_t>(a) * n + b) * stride;
        for (std::size_t t = 0; t < stride; ++t) p[t] *= f;
      }
    }
  }
}

}  // namespace

std::vector<cplx> momentum(const std::vector<cplx>& psi, const TensorShape& shape, const Grid2D& grid, int j, int c) {
  std::vector<cplx> out(psi);
  particle_dft(out, shape, j, -1);
  const auto k = wavenumbers(grid);
  const int n = grid.n;
  const double scale = 1.0 / static_cast<double>(shape.one_body());
  apply_symbol(out, shape, j, [&](int a, int b) {
    const int idx = c == 0 ? a : b;
    return cplx{idx == n / 2 ? 0.0 : k[idx] * scale, 0.0};
  });
  particle_dft(out, shape, j, +1);
  return out;
}

std::vector<cplx> momentum_divergence(std::vector<cplx> tx, std::vector<cplx> ty, const TensorShape& shape,
                                      const Grid2D& grid, int j) {
  particle_dft(tx, shape, j, -1);
  particle_dft(ty, shape, j, -1);
  const auto k = wavenumbers(grid);
  const int n = grid.n;
  const double scale = 1.0 / static_cast<double>(shape.one_body());
  apply_symbol(tx, shape, j, [&](int a, int) { return cplx{a == n / 2 ? 0.0 : k[a] * scale, 0.0}; });
  apply_symbol(ty, shape, j, [&](int, int b) { return cplx{b == n / 2 ? 0.0 : k[b] * scale, 0.0}; });
  for (std::size_t i = 0; i < tx.size(); ++i) tx[i] += ty[i];
  particle_dft(tx, shape, j, +1);
  return tx;
}

std::vector<cplx> minus_laplacian(const std::vector<cplx>& psi, const TensorShape& shape, const Grid2D& grid, int j) {
  std::vector<cplx> out(psi);
  particle_dft(out, shape, j, -1);
  const auto k = wavenumbers(grid);
  const double scale = 1.0 / static_cast<double>(shape.one_body());
  apply_symbol(out, shape, j, [&](int a, int b) { return cplx{(k[a] * k[a] + k[b] * k[b]) * scale, 0.0}; });
  particle_dft(out, shape, j, +1);
  return out;
}

}  // namespace anyon::detail
