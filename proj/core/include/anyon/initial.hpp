#pragma once

#include <vector>

#include "anyon/grid.hpp"
#include "anyon/kernels.hpp"

namespace anyon {

// Normalized Gaussian packet (sigma sqrt(pi))^-1 exp(-|x - c|^2 / (2 sigma^2) + i k.x).
// With focus_time t_f > 0 the packet is the free evolution, backwards by t_f,
// of that profile, so under i du/dt = -Laplacian u it refocuses at t = t_f.
struct GaussianSpec {
  double sigma = 1.0;
  Vec2 center{};
  Vec2 momentum{};
  double focus_time = 0.0;
};

// Closed-form solution of i du/dt = -Laplacian u at time t for the packet above.
cplx free_gaussian_value(const GaussianSpec& spec, double x, double y, double t);
WaveField free_gaussian(const Grid2D& grid, const GaussianSpec& spec, double t);

// Weighted superposition of free packets at time t, unnormalized.
WaveField gaussian_sum(const Grid2D& grid, const std::vector<GaussianSpec>& packets, const std::vector<double>& weights,
                       double t);

inline WaveField gaussian(const Grid2D& grid, const GaussianSpec& spec) { return free_gaussian(grid, spec, 0.0); }

}  // namespace anyon
