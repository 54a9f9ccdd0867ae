#pragma once

#include <functional>
#include <vector>

#include "anyon/grid.hpp"
#include "anyon/kernels.hpp"
#include "anyon/observables.hpp"

namespace anyon {

enum class Stepper { IntegratingFactorRK4, Strang };

struct CssParams {
  double beta = 0.0;
  SmearingRadius R{};
  double g = 0.0;
  double dt = 1e-3;
  double T = 0.0;
  int sample_every = 1;
  Stepper stepper = Stepper::IntegratingFactorRK4;

  // Monitors.
  double beta_warn_threshold = 0.5;
  double h2_growth_warn_factor = 1e3;
  double h1_bound_slack = 1.05;
  bool keep_snapshots = true;

  // Throws ErrorKind::Config on invalid values, warns on questionable ones.
  void validate(const Grid2D& grid) const;
};

// Largest dt accepted without a warning: 0.5 h^2 / pi.
double dt_heuristic(const Grid2D& grid);

// du/dt = -i [ -Laplacian u - i beta (A.grad u + div(A u)) + beta^2 |A|^2 u - S u - g |u|^2 u ]
// with A = K * |u|^2 and S the scalar term. The A.grad + div(A .) split is the
// discrete form of 2 A.grad (div A = 0); it keeps the generator exactly
// skew-adjoint on the grid.
WaveField css_rhs(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec);

// Everything except the Laplacian: returns -i * (nonlinear part of the operator) u.
WaveField css_nonlinear_rhs(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec);

// Applies the real operator h[u] (the bracket above) to u; i du/dt = h[u] u.
WaveField css_generator(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec);

// One step of the integrating-factor (Lawson) RK4 scheme with exact linear flow.
WaveField step(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec, double dt);
inline WaveField step(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec) {
  return step(u, params, kspec, params.dt);
}

// Strang splitting: half linear step, RK4 on the nonlinear part, half linear step.
WaveField step_strang(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<WaveField> snapshots;  // empty unless params.keep_snapshots
  std::vector<DiagnosticsRow> diagnostics;
  WaveField final_state;
  bool boundary_flagged = false;
  bool h1_bound_violated = false;
  bool h2_growth_flagged = false;
  double max_mass_drift = 0.0;
  double max_energy_drift = 0.0;  // relative to |E(0)|, absolute if E(0) == 0
};

using SampleObserver = std::function<void(double t, const WaveField& u)>;

Trajectory evolve(const WaveField& u0, const CssParams& params, const SampleObserver& observer = {});
Trajectory evolve(const WaveField& u0, const CssParams& params, const KernelSpectrum& kspec,
                  const SampleObserver& observer = {});

struct ConvergenceTable {
  std::vector<double> radii;
  double reference_radius = 0.0;
  std::vector<double> sup_errors;   // sup_t ||u^R(t) - u^ref(t)||_2
  std::vector<double> energy_gaps;  // |E_R - E_ref| at t = 0
  double error_slope = 0.0;         // least-squares log-log slope vs R
  double gap_slope = 0.0;
};

// Radii must be sorted decreasing. The reference run uses `reference_radius`.
ConvergenceTable sweep_R(const CssParams& base, const std::vector<double>& radii, const WaveField& u0,
                         double reference_radius = 0.0, int threads = 1);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace anyon
