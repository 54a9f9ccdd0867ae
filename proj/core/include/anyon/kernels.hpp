#pragma once

#include <vector>

#include "anyon/grid.hpp"

namespace anyon {

class SmearingRadius {
 public:
  SmearingRadius() = default;
  explicit SmearingRadius(double r);
  double value() const { return r_; }
  bool is_point() const { return r_ == 0.0; }
  // True when 0 < R < 1/e, the range in which the |log R| bounds apply.
  bool in_log_regime() const;

 private:
  double r_ = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Potential of a unit charge spread uniformly over the disc of radius R:
// log|x| outside, log R + (|x|^2 - R^2) / (2 R^2) inside.
double eval_wR(Vec2 x, SmearingRadius R);

// Perpendicular gradient x_perp / max(R^2, |x|^2) with (x, y)_perp = (-y, x).
Vec2 eval_grad_perp_wR(Vec2 x, SmearingRadius R);

// Same formula without the singularity check; returns (0, 0) at the origin.
// Used when filling kernel tables, where the origin sample is the principal value.
Vec2 grad_perp_wR_sample(double x, double y, double R);

// Closed-form L^p norm of grad w_R, valid for p > 2 and R > 0.
double lp_norm_grad_wR(double p, SmearingRadius R);

// sup |grad w_R| = 1/R, attained on the circle |x| = R.
double sup_grad_wR(SmearingRadius R);

// Fourier transform of both components of grad_perp w_R sampled on the
// zero-padded (2n)^2 grid; used for free-space convolution on `grid`.
class KernelSpectrum {
 public:
  KernelSpectrum(const Grid2D& grid, SmearingRadius R);

  const Grid2D& grid() const { return grid_; }
  SmearingRadius radius() const { return radius_; }
  int padded_n() const { return 2 * grid_.n; }
  const std::vector<cplx>& component_x() const { return kx_; }
  const std::vector<cplx>& component_y() const { return ky_; }

  // (K * rho)(x) = h^2 sum_y K(x - y) rho(y), both components.
  VectorField convolve(const ScalarField& rho) const;
  // (K * v)(x) = h^2 sum_y K(x - y) . v(y), contracted to a scalar.
  ScalarField contract(const VectorField& v) const;

 private:
  Grid2D grid_;
  SmearingRadius radius_;
  std::vector<cplx> kx_;
  std::vector<cplx> ky_;
};

KernelSpectrum kernel_spectrum(const Grid2D& grid, SmearingRadius R);

}  // namespace anyon
