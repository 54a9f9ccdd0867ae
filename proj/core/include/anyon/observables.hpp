#pragma once

#include <string>

#include "anyon/grid.hpp"
#include "anyon/kernels.hpp"

namespace anyon {

double sobolev_norm(const WaveField& u, double s);

struct EnergyReport {
  double kinetic = 0.0;  // <u, -Laplacian u>
  double cross = 0.0;    // 2 beta int A . Im(conj(u) grad u)
  double quartic = 0.0;  // beta^2 int |A|^2 |u|^2
  double total = 0.0;
};

EnergyReport energy_af(const WaveField& u, double beta, const KernelSpectrum& kspec);

// int |(-i grad + beta A) u|^2 evaluated as a single squared norm.
double energy_af_direct(const WaveField& u, double beta, const KernelSpectrum& kspec);

// |E_R[u] - E_0[u]| with both kernels built on u's grid.
double energy_gap_R(const WaveField& u, double beta, SmearingRadius R);
double energy_gap_R(const WaveField& u, double beta, const KernelSpectrum& kspec_R, const KernelSpectrum& kspec_0);

// int |grad |u||^2 with |u| regularized as sqrt(|u|^2 + eps).
double modulus_dirichlet(const WaveField& u, double eps = 1e-14);

struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;
  double E_total = 0.0;
  double E_kinetic = 0.0;
  double E_cross = 0.0;
  double E_quartic = 0.0;
  double H1 = 0.0;
  double H2 = 0.0;
};

DiagnosticsRow diagnostics(const WaveField& u, double t, double beta, const KernelSpectrum& kspec);
std::string diagnostics_csv_header();
std::string to_csv(const DiagnosticsRow& row);

// Shortest round-trip formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace anyon
