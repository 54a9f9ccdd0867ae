#include "anyon/grid.hpp"

#include <cmath>
#include <string>

#include "anyon/error.hpp"

namespace anyon {

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

Grid2D::Grid2D(int points, double side) : n(points), L(side) { validate(); }

void Grid2D::validate() const {
  if (!is_power_of_two(n) || n < 8) {
    throw Error(ErrorKind::Config, "grid.n must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw Error(ErrorKind::Config, "grid.L must be positive and finite");
  }
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorKind::GridMismatch, std::string(what) + ": operands live on different grids");
  }
}

WaveField::WaveField(const Grid2D& g, std::vector<cplx> values) : grid(g), data(std::move(values)) {
  if (data.size() != g.size()) {
    throw Error(ErrorKind::GridMismatch, "WaveField: value count does not match the grid");
  }
}

cplx inner(const WaveField& a, const WaveField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::conj(a.data[i]) * b.data[i];
  return s * a.grid.weight();
}

double norm(const WaveField& u) {
  double s = 0.0;
  for (const auto& z : u.data) s += std::norm(z);
  return std::sqrt(s * u.grid.weight());
}

double l2_distance(const WaveField& a, const WaveField& b) {
  require_same_grid(a.grid, b.grid, "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(s * a.grid.weight());
}

bool all_finite(const WaveField& u) {
  for (const auto& z : u.data) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void normalize(WaveField& u) {
  const double nrm = norm(u);
  if (nrm == 0.0) throw Error(ErrorKind::Domain, "cannot normalize a zero field");
  for (auto& z : u.data) z /= nrm;
}

}  // namespace anyon
