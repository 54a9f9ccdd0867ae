#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace anyon {

using cplx = std::complex<double>;

// Uniform square box [-L/2, L/2)^2 with n points per axis. Points are stored
// row-major: index = ix * n + iy.
struct Grid2D {
  int n = 0;
  double L = 0.0;

  Grid2D() = default;
  Grid2D(int points, double side);

  double h() const { return L / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
  double coord(int i) const { return -0.5 * L + i * h(); }
  // Cell area used as the quadrature weight.
  double weight() const { return h() * h(); }

  void validate() const;
  bool operator==(const Grid2D& other) const { return n == other.n && L == other.L; }
};

bool is_power_of_two(long long v);

// Throws ErrorKind::GridMismatch naming `what` when the grids differ.
void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

struct WaveField {
  Grid2D grid;
  std::vector<cplx> data;

  WaveField() = default;
  explicit WaveField(const Grid2D& g) : grid(g), data(g.size()) {}
  WaveField(const Grid2D& g, std::vector<cplx> values);

  cplx& operator()(int ix, int iy) { return data[static_cast<std::size_t>(ix) * grid.n + iy]; }
  cplx operator()(int ix, int iy) const { return data[static_cast<std::size_t>(ix) * grid.n + iy]; }
};

struct ScalarField {
  Grid2D grid;
  std::vector<double> data;

  ScalarField() = default;
  explicit ScalarField(const Grid2D& g) : grid(g), data(g.size()) {}
};

struct VectorField {
  Grid2D grid;
  std::vector<double> x;
  std::vector<double> y;

  VectorField() = default;
  explicit VectorField(const Grid2D& g) : grid(g), x(g.size()), y(g.size()) {}
};

// Discrete inner products and norms with the h^2 quadrature weight.
cplx inner(const WaveField& a, const WaveField& b);
double norm(const WaveField& u);
double l2_distance(const WaveField& a, const WaveField& b);
bool all_finite(const WaveField& u);
void normalize(WaveField& u);

}  // namespace anyon
