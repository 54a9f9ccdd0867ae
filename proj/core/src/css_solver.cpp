#include "anyon/css_solver.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "anyon/error.hpp"
#include "anyon/fields.hpp"
#include "anyon/spectral.hpp"

namespace anyon {

namespace {

const cplx I{0.0, 1.0};

// Applies h[u] to u. The Laplacian part is included only when requested.
WaveField apply_generator(const WaveField& u, const CssParams& p, const KernelSpectrum& kspec, bool with_laplacian) {
  require_same_grid(u.grid, kspec.grid(), "css_rhs");
  if (!all_finite(u)) throw Error(ErrorKind::NonFinite, "css_rhs: non-finite input field");
  const Grid2D& grid = u.grid;
  const std::size_t size = grid.size();
  WaveField out(grid);

  const auto spec = fft2(u.data, grid);
  if (with_laplacian) {
    const int n = grid.n;
    const auto k = wavenumbers(grid);
    std::vector<cplx> lap(spec);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) lap[static_cast<std::size_t>(a) * n + b] *= k[a] * k[a] + k[b] * k[b];
    }
    out.data = ifft2(std::move(lap), grid);
  }

  if (p.g != 0.0) {
    for (std::size_t i = 0; i < size; ++i) out.data[i] -= p.g * std::norm(u.data[i]) * u.data[i];
  }
  if (p.beta == 0.0) return out;

  const double beta = p.beta;
  const ScalarField rho = density(u);
  const VectorField A = gauge_field(rho, kspec);
  const Gradient du = gradient_from_spectrum(spec, grid);

  VectorField src(grid);
  std::vector<cplx> ax(size), ay(size);
  for (std::size_t i = 0; i < size; ++i) {
    const cplx ub = std::conj(u.data[i]);
    src.x[i] = 2.0 * (ub * du.x[i]).imag() + 2.0 * beta * A.x[i] * rho.data[i];
    src.y[i] = 2.0 * (ub * du.y[i]).imag() + 2.0 * beta * A.y[i] * rho.data[i];
    ax[i] = A.x[i] * u.data[i];
    ay[i] = A.y[i] * u.data[i];
  }
  const ScalarField S = kspec.contract(src);
  const auto div_au = divergence(ax, ay, grid);

  for (std::size_t i = 0; i < size; ++i) {
    const double a2 = A.x[i] * A.x[i] + A.y[i] * A.y[i];
    const cplx transport = A.x[i] * du.x[i] + A.y[i] * du.y[i] + div_au[i];
    out.data[i] += -I * beta * transport + (beta * beta * a2 - beta * S.data[i]) * u.data[i];
  }
  return out;
}

WaveField times_minus_i(WaveField w) {
  for (auto& z : w.data) z *= -I;
  return w;
}

// out = a + c * b
WaveField axpy(const WaveField& a, double c, const WaveField& b) {
  WaveField out(a.grid);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] + c * b.data[i];
  return out;
}

WaveField propagated(WaveField u, double tau) {
  free_propagate(u.data, u.grid, tau);
  return u;
}

std::string time_string(double t) {
  std::ostringstream s;
  s << t;
  return s.str();
}

}  // namespace

double dt_heuristic(const Grid2D& grid) { return 0.5 * grid.h() * grid.h() / std::numbers::pi; }

void CssParams::validate(const Grid2D& grid) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Config, "params.dt must be > 0");
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorKind::Config, "params.T must be >= 0");
  if (sample_every < 1) throw Error(ErrorKind::Config, "params.sample_every must be >= 1");
  if (!std::isfinite(beta) || !std::isfinite(g)) throw Error(ErrorKind::Config, "params.beta and params.g must be finite");
  if (std::abs(beta) > beta_warn_threshold) {
    warn("|beta| = " + time_string(std::abs(beta)) + " exceeds the smallness threshold " +
         time_string(beta_warn_threshold));
  }
  if (dt > dt_heuristic(grid)) {
    warn("dt = " + time_string(dt) + " exceeds the heuristic 0.5 h^2 / pi = " + time_string(dt_heuristic(grid)));
  }
}

WaveField css_generator(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec) {
  return apply_generator(u, params, kspec, true);
}

WaveField css_rhs(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec) {
  return times_minus_i(apply_generator(u, params, kspec, true));
}

WaveField css_nonlinear_rhs(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec) {
  return times_minus_i(apply_generator(u, params, kspec, false));
}

WaveField step(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec, double dt) {
  const double half = 0.5 * dt;
  auto N = [&](const WaveField& v) { return css_nonlinear_rhs(v, params, kspec); };

  const WaveField k1 = N(u);
  const WaveField eu_half = propagated(u, half);
  const WaveField k2 = N(propagated(axpy(u, half, k1), half));
  const WaveField k3 = N(axpy(eu_half, half, k2));
  const WaveField k4 = N(axpy(propagated(u, dt), dt, propagated(k3, half)));

  // u+ = E(dt) u + dt/6 (E(dt) k1 + 2 E(dt/2)(k2 + k3) + k4)
  WaveField mid(u.grid);
  for (std::size_t i = 0; i < u.data.size(); ++i) mid.data[i] = 2.0 * (k2.data[i] + k3.data[i]);
  WaveField acc = axpy(u, dt / 6.0, k1);
  acc = propagated(std::move(acc), half);
  for (std::size_t i = 0; i < u.data.size(); ++i) acc.data[i] += dt / 6.0 * mid.data[i];
  acc = propagated(std::move(acc), half);
  for (std::size_t i = 0; i < u.data.size(); ++i) acc.data[i] += dt / 6.0 * k4.data[i];
  return acc;
}

WaveField step_strang(const WaveField& u, const CssParams& params, const KernelSpectrum& kspec, double dt) {
  auto N = [&](const WaveField& v) { return css_nonlinear_rhs(v, params, kspec); };
  const WaveField v = propagated(u, 0.5 * dt);
  const WaveField k1 = N(v);
  const WaveField k2 = N(axpy(v, 0.5 * dt, k1));
  const WaveField k3 = N(axpy(v, 0.5 * dt, k2));
  const WaveField k4 = N(axpy(v, dt, k3));
  WaveField w(u.grid);
  for (std::size_t i = 0; i < u.data.size(); ++i) {
    w.data[i] = v.data[i] + dt / 6.0 * (k1.data[i] + 2.0 * k2.data[i] + 2.0 * k3.data[i] + k4.data[i]);
  }
  return propagated(std::move(w), 0.5 * dt);
}

Trajectory evolve(const WaveField& u0, const CssParams& params, const SampleObserver& observer) {
  const KernelSpectrum kspec(u0.grid, params.R);
  return evolve(u0, params, kspec, observer);
}

Trajectory evolve(const WaveField& u0, const CssParams& params, const KernelSpectrum& kspec,
                  const SampleObserver& observer) {
  require_same_grid(u0.grid, kspec.grid(), "evolve");
  if (kspec.radius().value() != params.R.value()) {
    throw Error(ErrorKind::Config, "evolve: kernel spectrum radius differs from params.R");
  }
  params.validate(u0.grid);
  if (!all_finite(u0)) throw Error(ErrorKind::NonFinite, "evolve: initial field has non-finite values");
  if (std::abs(norm(u0) - 1.0) >= 1e-8) throw Error(ErrorKind::Config, "evolve: initial field is not normalized");
  if (const double bm = boundary_mass(u0); bm > kBoundaryMassLimit) {
    throw Error(ErrorKind::BoundaryViolation,
                "evolve: initial mass " + time_string(bm) + " in the outer frame exceeds " + time_string(kBoundaryMassLimit));
  }

  Trajectory traj;
  const double beta = params.beta;
  double mass0 = 0.0;
  double energy0 = 0.0;
  double h2_0 = 0.0;

  auto sample = [&](double t, const WaveField& u) {
    DiagnosticsRow row = diagnostics(u, t, beta, kspec);
    if (traj.diagnostics.empty()) {
      mass0 = row.mass;
      energy0 = row.E_total;
      h2_0 = row.H2;
    }
    traj.max_mass_drift = std::max(traj.max_mass_drift, std::abs(row.mass - mass0));
    const double escale = energy0 != 0.0 ? std::abs(energy0) : 1.0;
    traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(row.E_total - energy0) / escale);

    if (!traj.boundary_flagged && boundary_mass(u) > kBoundaryMassLimit) {
      traj.boundary_flagged = true;
      warn("boundary adequacy lost at t = " + time_string(t));
    }
    if (!traj.h2_growth_flagged && row.H2 > params.h2_growth_warn_factor * h2_0) {
      traj.h2_growth_flagged = true;
      warn("H2 norm grew beyond " + time_string(params.h2_growth_warn_factor) + "x its initial value at t = " +
           time_string(t));
    }
    // ||grad u|| <= E^(1/2) + |beta| ||A u||, with E the conserved energy.
    double au = 0.0;
    if (beta != 0.0) {
      const VectorField A = gauge_field(density(u), kspec);
      for (std::size_t i = 0; i < u.data.size(); ++i) au += (A.x[i] * A.x[i] + A.y[i] * A.y[i]) * std::norm(u.data[i]);
      au = std::sqrt(au * u.grid.weight());
    }
    const double grad_bound = std::sqrt(std::max(energy0, 0.0)) + std::abs(beta) * au;
    const double h1_bound = std::sqrt(row.mass + grad_bound * grad_bound);
    if (!traj.h1_bound_violated && row.H1 > params.h1_bound_slack * h1_bound) {
      traj.h1_bound_violated = true;
      warn("H1 norm exceeds the energy reconstruction bound at t = " + time_string(t));
    }

    traj.times.push_back(t);
    traj.diagnostics.push_back(row);
    if (params.keep_snapshots) traj.snapshots.push_back(u);
    if (observer) observer(t, u);
  };

  WaveField u = u0;
  sample(0.0, u);
  const double dt = params.dt;
  const long long nsteps = params.T > 0.0 ? static_cast<long long>(std::ceil(params.T / dt - 1e-9)) : 0;
  for (long long s = 1; s <= nsteps; ++s) {
    const double t_prev = static_cast<double>(s - 1) * dt;
    const double t = s == nsteps ? params.T : static_cast<double>(s) * dt;
    const double h = t - t_prev;
    try {
      u = params.stepper == Stepper::Strang ? step_strang(u, params, kspec, h) : step(u, params, kspec, h);
    } catch (const Error& e) {
      // A stage that went non-finite inside the step is a blow-up of the run.
      if (e.kind() != ErrorKind::NonFinite) throw;
      throw Error(ErrorKind::BlowUp, "non-finite values reached at t = " + time_string(t));
    }
    if (!all_finite(u)) throw Error(ErrorKind::BlowUp, "non-finite values reached at t = " + time_string(t));
    if (s % params.sample_every == 0 || s == nsteps) sample(t, u);
  }
  traj.final_state = std::move(u);
  return traj;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::Domain, "loglog_slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorKind::Domain, "loglog_slope needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceTable sweep_R(const CssParams& base, const std::vector<double>& radii, const WaveField& u0,
                         double reference_radius, int threads) {
  if (radii.empty()) throw Error(ErrorKind::Config, "sweep_R: empty radius list");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1])) throw Error(ErrorKind::Config, "sweep_R: radii must be sorted decreasing");
  }
  ConvergenceTable table;
  table.radii = radii;
  table.reference_radius = reference_radius;

  CssParams ref_params = base;
  ref_params.R = SmearingRadius(reference_radius);
  ref_params.keep_snapshots = true;
  const KernelSpectrum ref_kspec(u0.grid, ref_params.R);
  const Trajectory ref = evolve(u0, ref_params, ref_kspec);

  auto run_one = [&](double r) {
    CssParams p = base;
    p.R = SmearingRadius(r);
    p.keep_snapshots = false;
    const KernelSpectrum kspec(u0.grid, p.R);
    std::size_t idx = 0;
    double sup = 0.0;
    evolve(u0, p, kspec, [&](double, const WaveField& u) {
      sup = std::max(sup, l2_distance(u, ref.snapshots.at(idx)));
      ++idx;
    });
    const double gap = energy_gap_R(u0, base.beta, kspec, ref_kspec);
    return std::pair{sup, gap};
  };

  std::vector<std::pair<double, double>> results(radii.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < radii.size(); ++i) results[i] = run_one(radii[i]);
  } else {
    for (std::size_t start = 0; start < radii.size(); start += static_cast<std::size_t>(threads)) {
      std::vector<std::future<std::pair<double, double>>> jobs;
      const std::size_t stop = std::min(radii.size(), start + static_cast<std::size_t>(threads));
      for (std::size_t i = start; i < stop; ++i) jobs.push_back(std::async(std::launch::async, run_one, radii[i]));
      for (std::size_t i = start; i < stop; ++i) results[i] = jobs[i - start].get();
    }
  }
  for (const auto& [err, gap] : results) {
    table.sup_errors.push_back(err);
    table.energy_gaps.push_back(gap);
  }

  // Fit only over runs that differ from the reference.
  std::vector<double> rx, ex, gx, rg;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (table.sup_errors[i] > 0.0) {
      rx.push_back(radii[i]);
      ex.push_back(table.sup_errors[i]);
    }
    if (table.energy_gaps[i] > 0.0) {
      rg.push_back(radii[i]);
      gx.push_back(table.energy_gaps[i]);
    }
  }
  table.error_slope = rx.size() >= 2 ? loglog_slope(rx, ex) : 0.0;
  table.gap_slope = rg.size() >= 2 ? loglog_slope(rg, gx) : 0.0;
  return table;
}

}  // namespace anyon
