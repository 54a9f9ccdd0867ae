#pragma once

#include "anyon/grid.hpp"
#include "anyon/kernels.hpp"

namespace anyon {

ScalarField density(const WaveField& u);

// J[u] = i(u grad conj(u) - conj(u) grad u) = 2 Im(conj(u) grad u).
VectorField current(const WaveField& u);

// Free-space convolution grad_perp w_R * rho.
VectorField gauge_field(const ScalarField& rho, const KernelSpectrum& kspec);

// beta * [grad_perp w_R * (2 beta A rho + J[u])], the real scalar that
// multiplies u in the evolution equation.
ScalarField scalar_term(const WaveField& u, const VectorField& A, const KernelSpectrum& kspec, double beta);

// Mass in the outer `frame` fraction of the box on each side.
double boundary_mass(const WaveField& u, double frame = 0.1);
constexpr double kBoundaryMassLimit = 1e-10;

// Zeroes Fourier modes outside the 2/3-rule band. Optional; not applied by
// the solver unless requested.
void dealias(WaveField& u);

}  // namespace anyon
