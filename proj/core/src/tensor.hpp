#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "anyon/grid.hpp"
#include "anyon/kernels.hpp"

namespace anyon::detail {

// N-particle tensors over an n x n grid, particle 0 slowest:
// index = sum_j (a_j * n + b_j) * (n^2)^(N-1-j).
struct TensorShape {
  int n = 0;
  int N = 0;

  std::size_t one_body() const { return static_cast<std::size_t>(n) * n; }
  std::size_t size() const {
    std::size_t s = 1;
    for (int j = 0; j < N; ++j) s *= one_body();
    return s;
  }
  // Stride of particle j's one-body index.
  std::size_t stride(int j) const {
    std::size_t s = 1;
    for (int k = j + 1; k < N; ++k) s *= one_body();
    return s;
  }
};

// Pairwise grad_perp w_R(x_j - x_k) tabulated on integer displacements
// (da, db) in (-n, n)^2.
class PairKernel {
 public:
  PairKernel(const Grid2D& grid, double R, bool minimal_image);
  Vec2 operator()(int da, int db) const {
    const std::size_t i = static_cast<std::size_t>(da + n_ - 1) * (2 * n_ - 1) + static_cast<std::size_t>(db + n_ - 1);
    return {kx_[i], ky_[i]};
  }

 private:
  int n_;
  std::vector<double> kx_;
  std::vector<double> ky_;
};

// Forward (sign -1) or backward (sign +1, unnormalized) transform over the
// two axes of particle j.
void particle_dft(std::vector<cplx>& data, const TensorShape& shape, int j, int sign);

// out = (-i d/dx_c) applied to particle j, spectral, Nyquist removed.
std::vector<cplx> momentum(const std::vector<cplx>& psi, const TensorShape& shape, const Grid2D& grid, int j, int c);

// sum_c p_c (T_c) for particle j, with T_x, T_y given; consumes the inputs.
std::vector<cplx> momentum_divergence(std::vector<cplx> tx, std::vector<cplx> ty, const TensorShape& shape,
                                      const Grid2D& grid, int j);

// -Laplacian acting on particle j.
std::vector<cplx> minus_laplacian(const std::vector<cplx>& psi, const TensorShape& shape, const Grid2D& grid, int j);

// Decodes the per-particle grid coordinates (a_j, b_j) of a flat index.
inline void decode(std::size_t idx, const TensorShape& shape, int* a, int* b) {
  for (int j = shape.N - 1; j >= 0; --j) {
    b[j] = static_cast<int>(idx % shape.n);
    idx /= shape.n;
    a[j] = static_cast<int>(idx % shape.n);
    idx /= shape.n;
  }
}

}  // namespace anyon::detail
