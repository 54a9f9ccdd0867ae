#include "anyon/observables.hpp"

#include <charconv>
#include <cmath>

#include "anyon/error.hpp"
#include "anyon/fields.hpp"
#include "anyon/spectral.hpp"

namespace anyon {

double sobolev_norm(const WaveField& u, double s) {
  if (s < 0.0) throw Error(ErrorKind::Domain, "sobolev_norm requires s >= 0");
  const int n = u.grid.n;
  const auto k = wavenumbers(u.grid);
  const auto spec = fft2(u.data, u.grid);
  double acc = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double w = s == 0.0 ? 1.0 : std::pow(1.0 + k[a] * k[a] + k[b] * k[b], s);
      acc += w * std::norm(spec[static_cast<std::size_t>(a) * n + b]);
    }
  }
  return std::sqrt(acc * u.grid.weight() / static_cast<double>(u.grid.size()));
}

EnergyReport energy_af(const WaveField& u, double beta, const KernelSpectrum& kspec) {
  require_same_grid(u.grid, kspec.grid(), "energy_af");
  const double w = u.grid.weight();
  EnergyReport e;
  const auto lap = laplacian(u.data, u.grid);
  double kin = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i) kin -= (std::conj(u.data[i]) * lap[i]).real();
  e.kinetic = kin * w;
  if (beta != 0.0) {
    const ScalarField rho = density(u);
    const VectorField A = gauge_field(rho, kspec);
    const VectorField J = current(u);
    double cross = 0.0;
    double quartic = 0.0;
    for (std::size_t i = 0; i < u.data.size(); ++i) {
      cross += A.x[i] * J.x[i] + A.y[i] * J.y[i];
      quartic += (A.x[i] * A.x[i] + A.y[i] * A.y[i]) * rho.data[i];
    }
    e.cross = beta * cross * w;
    e.quartic = beta * beta * quartic * w;
  }
  e.total = e.kinetic + e.cross + e.quartic;
  return e;
}

double energy_af_direct(const WaveField& u, double beta, const KernelSpectrum& kspec) {
  require_same_grid(u.grid, kspec.grid(), "energy_af_direct");
  const Gradient du = gradient(u.data, u.grid);
  const VectorField A = gauge_field(density(u), kspec);
  const cplx I{0.0, 1.0};
  double acc = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i) {
    acc += std::norm(-I * du.x[i] + beta * A.x[i] * u.data[i]);
    acc += std::norm(-I * du.y[i] + beta * A.y[i] * u.data[i]);
  }
  return acc * u.grid.weight();
}

double energy_gap_R(const WaveField& u, double beta, const KernelSpectrum& kspec_R, const KernelSpectrum& kspec_0) {
  if (beta == 0.0) return 0.0;
  return std::abs(energy_af(u, beta, kspec_R).total - energy_af(u, beta, kspec_0).total);
}

double energy_gap_R(const WaveField& u, double beta, SmearingRadius R) {
  if (R.is_point() || beta == 0.0) return 0.0;
  return energy_gap_R(u, beta, KernelSpectrum(u.grid, R), KernelSpectrum(u.grid, SmearingRadius(0.0)));
}

double modulus_dirichlet(const WaveField& u, double eps) {
  std::vector<cplx> m(u.data.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::sqrt(std::norm(u.data[i]) + eps);
  const Gradient g = gradient(m, u.grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += std::norm(g.x[i]) + std::norm(g.y[i]);
  return acc * u.grid.weight();
}

DiagnosticsRow diagnostics(const WaveField& u, double t, double beta, const KernelSpectrum& kspec) {
  const EnergyReport e = energy_af(u, beta, kspec);
  DiagnosticsRow row;
  row.t = t;
  const double nrm = norm(u);
  row.mass = nrm * nrm;
  row.E_total = e.total;
  row.E_kinetic = e.kinetic;
  row.E_cross = e.cross;
  row.E_quartic = e.quartic;
  row.H1 = sobolev_norm(u, 1.0);
  row.H2 = sobolev_norm(u, 2.0);
  return row;
}

std::string diagnostics_csv_header() { return "t,mass,E_total,E_kinetic,E_cross,E_quartic,H1,H2"; }

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const DiagnosticsRow& r) {
  std::string s;
  for (double v : {r.t, r.mass, r.E_total, r.E_kinetic, r.E_cross, r.E_quartic, r.H1, r.H2}) {
    if (!s.empty()) s += ',';
    s += format_double(v);
  }
  return s;
}

}  // namespace anyon
