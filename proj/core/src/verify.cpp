#include "anyon/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "anyon/error.hpp"
#include "anyon/fields.hpp"
#include "anyon/observables.hpp"
#include "anyon/spectral.hpp"
#include "tensor.hpp"

namespace anyon {

using detail::TensorShape;

void InequalityReport::record(double margin) {
  worst_margin = samples == 0 ? margin : std::max(worst_margin, margin);
  ++samples;
}

// ---------------------------------------------------------------------------

TestFunctionSampler::TestFunctionSampler(const Grid2D& grid, std::uint64_t seed, SmoothnessClass cls, double band_fraction)
    : grid_(grid), seed_(seed), cls_(cls), band_(band_fraction), rng_(seed) {
  grid_.validate();
  if (!(band_fraction > 0.0 && band_fraction <= 1.0)) {
    throw Error(ErrorKind::Config, "sampler band fraction must lie in (0, 1]");
  }
}

WaveField TestFunctionSampler::raw() {
  const double kb = band_ * std::numbers::pi / grid_.h();
  const double sigma_min = 2.5 / kb;
  const double sigma_max = std::max(sigma_min, grid_.L / 10.0);
  std::uniform_int_distribution<int> count_dist(3, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  WaveField u(grid_);
  const int count = count_dist(rng_);
  for (int c = 0; c < count; ++c) {
    const double sigma = sigma_min + (sigma_max - sigma_min) * unit(rng_);
    const double cx = grid_.L * (unit(rng_) - 0.5) * 0.5;
    const double cy = grid_.L * (unit(rng_) - 0.5) * 0.5;
    const double kmag = kb / 3.0 * unit(rng_);
    const double kang = 2.0 * std::numbers::pi * unit(rng_);
    const cplx amp{gauss(rng_), gauss(rng_)};
    const double kx = kmag * std::cos(kang);
    const double ky = kmag * std::sin(kang);
    for (int a = 0; a < grid_.n; ++a) {
      const double x = grid_.coord(a) - cx;
      for (int b = 0; b < grid_.n; ++b) {
        const double y = grid_.coord(b) - cy;
        u(a, b) += amp * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)) * std::polar(1.0, kx * x + ky * y);
      }
    }
  }
  // Hard band limit.
  auto spec = fft2(u.data, grid_);
  const auto k = wavenumbers(grid_);
  const int n = grid_.n;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (std::abs(k[a]) > kb || std::abs(k[b]) > kb) spec[static_cast<std::size_t>(a) * n + b] = 0.0;
    }
  }
  u.data = ifft2(std::move(spec), grid_);
  return u;
}

WaveField TestFunctionSampler::sample() {
  WaveField u = raw();
  const double s = cls_ == SmoothnessClass::L2 ? 0.0 : cls_ == SmoothnessClass::H1 ? 1.0 : 2.0;
  const double nrm = sobolev_norm(u, s);
  for (auto& z : u.data) z /= nrm;
  return u;
}

// ---------------------------------------------------------------------------

namespace {

TensorShape shape_of(const ManyBodyState& f) { return {f.grid.n, f.N}; }

double max_kernel_sq(const Grid2D& grid, double R) {
  double best = 0.0;
  const int n = grid.n;
  const double h = grid.h();
  for (int a = -(n - 1); a < n; ++a) {
    for (int b = -(n - 1); b < n; ++b) {
      const Vec2 k = grad_perp_wR_sample(a * h, b * h, R);
      best = std::max(best, k.x * k.x + k.y * k.y);
    }
  }
  return best;
}

std::vector<cplx> one_minus_laplacian(const ManyBodyState& f, int j) {
  auto out = detail::minus_laplacian(f.data, shape_of(f), f.grid, j);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += f.data[i];
  return out;
}

double re_dot(const std::vector<cplx>& a, const std::vector<cplx>& b, double w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
  return s * w;
}

void require_particles(const ManyBodyState& f, int N, const char* what) {
  if (f.N != N) throw Error(ErrorKind::Config, std::string(what) + ": wrong particle number");
}

ManyBodyState symmetric_sample(TestFunctionSampler& sampler, int N) {
  ManyBodyState acc(N, sampler.grid());
  for (int term = 0; term < 2; ++term) {
    std::vector<WaveField> factors;
    for (int j = 0; j < N; ++j) factors.push_back(sampler.raw());
    const ManyBodyState t = tensor_product(factors);
    for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += t.data[i];
  }
  ManyBodyState f = symmetrize(acc);
  normalize(f);
  return f;
}

}  // namespace

double pair_singular_form(const ManyBodyState& f, SmearingRadius R) {
  require_particles(f, 2, "pair_singular_form");
  const TensorShape shape = shape_of(f);
  const detail::PairKernel K(f.grid, R.value(), false);
  int a[2], b[2];
  double s = 0.0;
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    detail::decode(i, shape, a, b);
    const Vec2 k = K(a[0] - a[1], b[0] - b[1]);
    s += (k.x * k.x + k.y * k.y) * std::norm(f.data[i]);
  }
  return s * f.weight();
}

double pair_mixed_form(const ManyBodyState& f, SmearingRadius R) {
  require_particles(f, 2, "pair_mixed_form");
  const TensorShape shape = shape_of(f);
  const detail::PairKernel K(f.grid, R.value(), false);
  const std::size_t D = f.data.size();
  std::vector<double> kx(D), ky(D);
  int a[2], b[2];
  for (std::size_t i = 0; i < D; ++i) {
    detail::decode(i, shape, a, b);
    const Vec2 k = K(a[0] - a[1], b[0] - b[1]);
    kx[i] = k.x;
    ky[i] = k.y;
  }
  const auto px = detail::momentum(f.data, shape, f.grid, 0, 0);
  const auto py = detail::momentum(f.data, shape, f.grid, 0, 1);
  std::vector<cplx> tx(D), ty(D);
  for (std::size_t i = 0; i < D; ++i) {
    tx[i] = kx[i] * f.data[i];
    ty[i] = ky[i] * f.data[i];
  }
  auto vf = detail::momentum_divergence(std::move(tx), std::move(ty), shape, f.grid, 0);
  double s = 0.0;
  for (std::size_t i = 0; i < D; ++i) s += std::norm(vf[i] + kx[i] * px[i] + ky[i] * py[i]);
  return s * f.weight();
}

double three_body_form(const ManyBodyState& f, SmearingRadius R) {
  require_particles(f, 3, "three_body_form");
  const TensorShape shape = shape_of(f);
  const detail::PairKernel K(f.grid, R.value(), false);
  int a[3], b[3];
  double s = 0.0;
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    detail::decode(i, shape, a, b);
    const Vec2 k1 = K(a[0] - a[1], b[0] - b[1]);
    const Vec2 k2 = K(a[0] - a[2], b[0] - b[2]);
    s += (k1.x * k2.x + k1.y * k2.y) * std::norm(f.data[i]);
  }
  return s * f.weight();
}

std::vector<InequalityReport> check_two_body_forms(const Grid2D& grid, const std::vector<double>& radii, int samples,
                                                   std::uint64_t seed) {
  if (radii.empty()) throw Error(ErrorKind::Config, "check_two_body_forms: no radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!SmearingRadius(radii[i]).in_log_regime()) {
      throw Error(ErrorKind::Domain, "check_two_body_forms: radii must satisfy 0 < R < 1/e");
    }
    if (i > 0 && !(radii[i] < radii[i - 1])) throw Error(ErrorKind::Config, "check_two_body_forms: radii must decrease");
  }
  const std::size_t budget = std::size_t{1} << 24;
  if (grid.size() * grid.size() > budget) throw Error(ErrorKind::Budget, "check_two_body_forms: grid too large");

  TestFunctionSampler sampler(grid, seed, SmoothnessClass::L2);
  const std::size_t nr = radii.size();
  // Per radius and sample: lhs values; per sample: forms.
  std::vector<std::vector<double>> sing(nr), mixed(nr);
  std::vector<double> form_x, form_xx, form_xy, mass;
  for (int s = 0; s < samples; ++s) {
    const ManyBodyState f = symmetric_sample(sampler, 2);
    const auto gx = one_minus_laplacian(f, 0);
    const auto gy = one_minus_laplacian(f, 1);
    form_x.push_back(re_dot(f.data, gx, f.weight()));
    form_xx.push_back(re_dot(gx, gx, f.weight()));
    form_xy.push_back(re_dot(gx, gy, f.weight()));
    mass.push_back(re_dot(f.data, f.data, f.weight()));
    for (std::size_t r = 0; r < nr; ++r) {
      sing[r].push_back(pair_singular_form(f, SmearingRadius(radii[r])));
      mixed[r].push_back(pair_mixed_form(f, SmearingRadius(radii[r])));
    }
  }

  auto make = [&](const std::string& id, double tol) {
    InequalityReport rep;
    rep.id = id;
    rep.seed = seed;
    rep.tolerance = tol;
    rep.parameters["grid.n"] = grid.n;
    rep.parameters["grid.L"] = grid.L;
    rep.parameters["reference_R"] = radii.front();
    rep.parameters["slack"] = 1.05;
    return rep;
  };

  InequalityReport sup = make("pair-singular-sup", 1e-10);
  for (std::size_t r = 0; r < nr; ++r) {
    const double bound = max_kernel_sq(grid, radii[r]);
    for (int s = 0; s < samples; ++s) sup.record(sing[r][s] - bound * mass[s]);
  }
  sup.samples = static_cast<std::size_t>(samples);
  sup.finish();

  // |log R|^2-scaled bound with the constant fitted at the reference radius.
  auto scaled = [&](const std::string& id, const std::vector<std::vector<double>>& lhs, const std::vector<double>& form) {
    InequalityReport rep = make(id, 1e-10);
    std::vector<double> C(nr, 0.0);
    for (std::size_t r = 0; r < nr; ++r) {
      const double l2 = std::pow(std::log(radii[r]), 2);
      for (int s = 0; s < samples; ++s) C[r] = std::max(C[r], lhs[r][s] / (l2 * form[s]));
      rep.fitted_by_radius.emplace_back(radii[r], C[r]);
    }
    rep.fitted_constant = *std::max_element(C.begin(), C.end());
    for (std::size_t r = 1; r < nr; ++r) {
      const double l2 = std::pow(std::log(radii[r]), 2);
      for (int s = 0; s < samples; ++s) rep.record(lhs[r][s] - 1.05 * C[0] * l2 * form[s]);
    }
    if (nr == 1) rep.worst_margin = -std::numeric_limits<double>::infinity();
    rep.samples = static_cast<std::size_t>(samples);
    rep.finish();
    return rep;
  };

  return {sup, scaled("pair-singular-log", sing, form_x), scaled("pair-mixed-xx", mixed, form_xx),
          scaled("pair-mixed-xy", mixed, form_xy)};
}

std::vector<InequalityReport> check_three_body_positivity(const Grid2D& grid, SmearingRadius R, int samples,
                                                          std::uint64_t seed) {
  if (grid.n > 16) throw Error(ErrorKind::Budget, "check_three_body_positivity: use n <= 16 per axis");
  TestFunctionSampler sampler(grid, seed, SmoothnessClass::L2);
  InequalityReport pos;
  pos.id = "three-body-positivity";
  pos.tolerance = 1e-10;
  InequalityReport up;
  up.id = "three-body-upper";
  up.tolerance = 1e-10;
  for (auto* rep : {&pos, &up}) {
    rep->seed = seed;
    rep->parameters["grid.n"] = grid.n;
    rep->parameters["grid.L"] = grid.L;
    rep->parameters["R"] = R.value();
  }
  const double kmax = max_kernel_sq(grid, R.value());
  double fitted = 0.0;
  double min_form = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const ManyBodyState f = symmetric_sample(sampler, 3);
    const double form = three_body_form(f, R);
    const double mass = norm(f) * norm(f);
    pos.record(-form / mass);
    up.record(form - kmax * mass);
    const auto gx = one_minus_laplacian(f, 0);
    fitted = std::max(fitted, form / re_dot(f.data, gx, f.weight()));
    min_form = std::min(min_form, form / mass);
  }
  pos.parameters["min_normalized_form"] = min_form;
  up.fitted_constant = fitted;
  pos.finish();
  up.finish();
  return {pos, up};
}

std::vector<InequalityReport> check_gauge_bounds(TestFunctionSampler& sampler, SmearingRadius R, double beta, int samples) {
  const KernelSpectrum kspec(sampler.grid(), R);
  InequalityReport quart;
  quart.id = "gauge-quartic";
  quart.tolerance = 1e-8;
  InequalityReport dia;
  dia.id = "diamagnetic";
  dia.tolerance = 1e-8;
  for (auto* rep : {&quart, &dia}) {
    rep->seed = sampler.seed();
    rep->parameters["grid.n"] = sampler.grid().n;
    rep->parameters["grid.L"] = sampler.grid().L;
    rep->parameters["R"] = R.value();
    rep->parameters["beta"] = beta;
  }
  for (int s = 0; s < samples; ++s) {
    const WaveField u = sampler.sample();
    const ScalarField rho = density(u);
    const VectorField A = gauge_field(rho, kspec);
    double q = 0.0;
    for (std::size_t i = 0; i < rho.data.size(); ++i) q += (A.x[i] * A.x[i] + A.y[i] * A.y[i]) * rho.data[i];
    q *= u.grid.weight();
    const double m = norm(u) * norm(u);
    const double dm = modulus_dirichlet(u);
    quart.record(q - 1.5 * m * m * dm);
    dia.record(dm - energy_af_direct(u, beta, kspec));
  }
  quart.finish();
  dia.finish();
  return {quart, dia};
}

}  // namespace anyon
