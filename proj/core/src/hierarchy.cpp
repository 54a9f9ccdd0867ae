#include <cmath>

#include "anyon/css_solver.hpp"
#include "anyon/error.hpp"
#include "anyon/fields.hpp"
#include "anyon/spectral.hpp"
#include "anyon/verify.hpp"
#include "tensor.hpp"

namespace anyon {

namespace {

using Matrix = Eigen::MatrixXcd;
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// [h, |phi><phi|] for the one-body vector h phi, both in orthonormal coefficients.
Matrix commutator_with_projector(const Eigen::VectorXcd& h_phi, const Eigen::VectorXcd& phi) {
  return h_phi * phi.adjoint() - phi * h_phi.adjoint();
}

Eigen::VectorXcd coeffs(const std::vector<cplx>& values, double h) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) c(static_cast<Eigen::Index>(i)) = h * values[i];
  return c;
}

}  // namespace

double hierarchy_residual(const WaveField& phi, double beta, SmearingRadius R, const KernelSpectrum& kspec,
                          const ManyBodyState& two_body_state) {
  require_same_grid(phi.grid, kspec.grid(), "hierarchy_residual");
  require_same_grid(two_body_state.grid, phi.grid, "hierarchy_residual");
  if (two_body_state.N != 2) throw Error(ErrorKind::Config, "hierarchy_residual: two-body state must have N = 2");
  if (std::abs(norm(phi) - 1.0) > 1e-8) throw Error(ErrorKind::Domain, "hierarchy_residual: phi must be normalized");
  if (R.is_point()) throw Error(ErrorKind::Config, "hierarchy_residual: R must be positive");
  const Grid2D& grid = phi.grid;
  const double h = grid.h();
  const std::size_t m = grid.size();
  const Eigen::VectorXcd c = coeffs(phi.data, h);

  // Mean-field side.
  CssParams params;
  params.beta = beta;
  params.R = R;
  const WaveField h_phi = css_generator(phi, params, kspec);
  const Matrix mean_field = commutator_with_projector(coeffs(h_phi.data, h), c);

  // Hierarchy side, kinetic part.
  std::vector<cplx> lap = laplacian(phi.data, grid);
  for (auto& z : lap) z = -z;
  Matrix hier = commutator_with_projector(coeffs(lap, h), c);

  if (beta != 0.0) {
    // Two-body part: beta Tr_2 [M_12, gamma_2] with M_12 the mixed pair operator
    // acting on both particles, i.e. the N = 2 mixed term at alpha = 1.
    ManyBodyOptions opts;
    opts.terms = {false, true, false, false};
    opts.displacement = Displacement::FreeSpace;
    const ManyBodyOperator M(2, grid, 1.0, R, opts);
    const ManyBodyState Mpsi = M.apply(two_body_state);
    const double w2 = h * h;
    Eigen::Map<const RowMatrix> A(Mpsi.data.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::Map<const RowMatrix> B(two_body_state.data.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    const Matrix X = (w2 * w2) * (A * B.adjoint());
    hier += beta * (X - X.adjoint());

    // Three-body part with the product ansatz, contracted directly:
    // |A|^2 - 2 K * (A rho), with A = K * rho as explicit pair sums.
    const detail::PairKernel K(grid, R.value(), false);
    const int n = grid.n;
    const double wgt = grid.weight();
    std::vector<double> rho(m), ax(m, 0.0), ay(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) rho[i] = std::norm(phi.data[i]);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double sx = 0.0, sy = 0.0;
        for (int a2 = 0; a2 < n; ++a2) {
          for (int b2 = 0; b2 < n; ++b2) {
            const Vec2 k = K(a - a2, b - b2);
            const double r = rho[static_cast<std::size_t>(a2) * n + b2];
            sx += k.x * r;
            sy += k.y * r;
          }
        }
        ax[static_cast<std::size_t>(a) * n + b] = sx * wgt;
        ay[static_cast<std::size_t>(a) * n + b] = sy * wgt;
      }
    }
    std::vector<cplx> pot_phi(m);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int a2 = 0; a2 < n; ++a2) {
          for (int b2 = 0; b2 < n; ++b2) {
            const std::size_t j = static_cast<std::size_t>(a2) * n + b2;
            const Vec2 k = K(a - a2, b - b2);
            s += (k.x * ax[j] + k.y * ay[j]) * rho[j];
          }
        }
        const std::size_t i = static_cast<std::size_t>(a) * n + b;
        const double pot = ax[i] * ax[i] + ay[i] * ay[i] - 2.0 * s * wgt;
        pot_phi[i] = pot * phi.data[i];
      }
    }
    hier += beta * beta * commutator_with_projector(coeffs(pot_phi, h), c);
  }

  const double scale = mean_field.norm();
  if (scale == 0.0) return (hier - mean_field).norm();
  return (hier - mean_field).norm() / scale;
}

double hierarchy_residual(const WaveField& phi, double beta, SmearingRadius R, const KernelSpectrum& kspec) {
  return hierarchy_residual(phi, beta, R, kspec, tensor_power(phi, 2));
}

}  // namespace anyon
