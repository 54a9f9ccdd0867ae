#pragma once

#include <vector>

#include "anyon/grid.hpp"

namespace anyon {

// Angular wavenumbers in FFT order: 2*pi/L * (0, 1, ..., n/2-1, -n/2, ..., -1).
std::vector<double> wavenumbers(const Grid2D& grid);

// Forward transform is unnormalized; the inverse divides by n^2.
std::vector<cplx> fft2(std::vector<cplx> values, const Grid2D& grid);
std::vector<cplx> ifft2(std::vector<cplx> spectrum, const Grid2D& grid);

struct Gradient {
  std::vector<cplx> x;
  std::vector<cplx> y;
};

// First derivatives drop the Nyquist mode so that they stay skew-adjoint and
// map real fields to real fields.
Gradient gradient(const std::vector<cplx>& values, const Grid2D& grid);
Gradient gradient_from_spectrum(const std::vector<cplx>& spectrum, const Grid2D& grid);
std::vector<cplx> divergence(const std::vector<cplx>& fx, const std::vector<cplx>& fy, const Grid2D& grid);
std::vector<double> divergence(const VectorField& f);
// Laplacian with symbol -|k|^2 on every mode, Nyquist included.
std::vector<cplx> laplacian(const std::vector<cplx>& values, const Grid2D& grid);

// Applies the exact free propagator exp(-i |k|^2 tau) of i du/dt = -Laplacian u.
void free_propagate(std::vector<cplx>& values, const Grid2D& grid, double tau);

}  // namespace anyon
