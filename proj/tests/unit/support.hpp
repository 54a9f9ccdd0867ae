#pragma once

#include <cmath>
#include <random>

#include "anyon/grid.hpp"
#include "anyon/initial.hpp"
#include "anyon/manybody.hpp"

namespace testing_support {

using anyon::cplx;

// Two counter-propagating packets: a state with nonzero vorticity, so every
// gauge term of the energy is active.
inline anyon::WaveField two_packets(const anyon::Grid2D& grid, double sigma = 1.0) {
  anyon::GaussianSpec a, b;
  a.sigma = b.sigma = sigma;
  a.center = {-sigma, 0.0};
  b.center = {sigma, 0.0};
  a.momentum = {0.0, 1.0};
  b.momentum = {0.0, -1.0};
  anyon::WaveField u = anyon::gaussian_sum(grid, {a, b}, {1.0, 1.0}, 0.0);
  anyon::normalize(u);
  return u;
}

inline anyon::WaveField random_smooth(const anyon::Grid2D& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<anyon::GaussianSpec> packets(3);
  std::vector<double> weights(3);
  for (std::size_t k = 0; k < packets.size(); ++k) {
    packets[k].sigma = grid.L / 10.0 * (1.0 + 0.3 * U(rng));
    packets[k].center = {grid.L / 10.0 * U(rng), grid.L / 10.0 * U(rng)};
    packets[k].momentum = {U(rng), U(rng)};
    weights[k] = 1.0 + 0.5 * U(rng);
  }
  anyon::WaveField u = anyon::gaussian_sum(grid, packets, weights, 0.0);
  anyon::normalize(u);
  return u;
}

inline anyon::ManyBodyState random_state(int N, const anyon::Grid2D& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  anyon::ManyBodyState psi(N, grid);
  for (auto& z : psi.data) z = {g(rng), g(rng)};
  anyon::normalize(psi);
  return psi;
}

}  // namespace testing_support
