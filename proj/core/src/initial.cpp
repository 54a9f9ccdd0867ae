#include "anyon/initial.hpp"

#include <cmath>
#include <numbers>

#include "anyon/error.hpp"

namespace anyon {

cplx free_gaussian_value(const GaussianSpec& spec, double x, double y, double t) {
  if (!(spec.sigma > 0.0)) throw Error(ErrorKind::Config, "gaussian sigma must be positive");
  const double tau = t - spec.focus_time;
  const double s2 = spec.sigma * spec.sigma;
  const cplx width{s2, 2.0 * tau};
  const double kx = spec.momentum.x;
  const double ky = spec.momentum.y;
  const double dx = x - spec.center.x - 2.0 * kx * tau;
  const double dy = y - spec.center.y - 2.0 * ky * tau;
  const cplx envelope = (spec.sigma / std::sqrt(std::numbers::pi)) / width * std::exp(-(dx * dx + dy * dy) / (2.0 * width));
  const double phase = kx * (x - spec.center.x) + ky * (y - spec.center.y) - (kx * kx + ky * ky) * tau;
  return envelope * std::polar(1.0, phase);
}

WaveField free_gaussian(const Grid2D& grid, const GaussianSpec& spec, double t) {
  WaveField u(grid);
  for (int a = 0; a < grid.n; ++a) {
    for (int b = 0; b < grid.n; ++b) u(a, b) = free_gaussian_value(spec, grid.coord(a), grid.coord(b), t);
  }
  return u;
}

WaveField gaussian_sum(const Grid2D& grid, const std::vector<GaussianSpec>& packets, const std::vector<double>& weights,
                       double t) {
  if (packets.empty() || packets.size() != weights.size()) {
    throw Error(ErrorKind::Config, "gaussian_sum: need one weight per packet");
  }
  WaveField u(grid);
  for (std::size_t p = 0; p < packets.size(); ++p) {
    const WaveField v = free_gaussian(grid, packets[p], t);
    for (std::size_t i = 0; i < u.data.size(); ++i) u.data[i] += weights[p] * v.data[i];
  }
  return u;
}

}  // namespace anyon
