#include "anyon/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "anyon/error.hpp"
#include "anyon/observables.hpp"
#include "tensor.hpp"

namespace anyon {

using detail::TensorShape;

namespace {

TensorShape shape_of(const ManyBodyState& psi) { return {psi.grid.n, psi.N}; }

void check_particles(int N) {
  if (N < 1 || N > 3) throw Error(ErrorKind::Config, "manybody: N must be 1, 2 or 3, got " + std::to_string(N));
}

}  // namespace

ManyBodyState::ManyBodyState(int particles, const Grid2D& g) : N(particles), grid(g) {
  check_particles(particles);
  data.assign(TensorShape{g.n, particles}.size(), cplx{});
}

double ManyBodyState::weight() const { return std::pow(grid.weight(), N); }

ManyBodyState tensor_product(const std::vector<WaveField>& factors) {
  if (factors.empty()) throw Error(ErrorKind::Config, "tensor_product: no factors");
  const Grid2D& g = factors.front().grid;
  for (const auto& f : factors) require_same_grid(f.grid, g, "tensor_product");
  ManyBodyState psi(static_cast<int>(factors.size()), g);
  const std::size_t m = g.size();
  std::vector<cplx> acc(factors.front().data);
  for (std::size_t j = 1; j < factors.size(); ++j) {
    std::vector<cplx> next(acc.size() * m);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      for (std::size_t k = 0; k < m; ++k) next[i * m + k] = acc[i] * factors[j].data[k];
    }
    acc.swap(next);
  }
  psi.data = std::move(acc);
  return psi;
}

ManyBodyState tensor_power(const WaveField& phi, int N) {
  check_particles(N);
  ManyBodyState psi = tensor_product(std::vector<WaveField>(static_cast<std::size_t>(N), phi));
  normalize(psi);
  return psi;
}

cplx inner(const ManyBodyState& a, const ManyBodyState& b) {
  if (a.N != b.N) throw Error(ErrorKind::GridMismatch, "inner: particle numbers differ");
  require_same_grid(a.grid, b.grid, "inner");
  cplx s{};
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::conj(a.data[i]) * b.data[i];
  return s * a.weight();
}

double norm(const ManyBodyState& psi) {
  double s = 0.0;
  for (const auto& z : psi.data) s += std::norm(z);
  return std::sqrt(s * psi.weight());
}

void normalize(ManyBodyState& psi) {
  const double nrm = norm(psi);
  if (nrm == 0.0) throw Error(ErrorKind::Domain, "cannot normalize a zero state");
  for (auto& z : psi.data) z /= nrm;
}

ManyBodyState swap_particles(const ManyBodyState& psi, int i, int j) {
  const TensorShape shape = shape_of(psi);
  ManyBodyState out(psi.N, psi.grid);
  std::vector<int> a(psi.N), b(psi.N);
  const std::size_t si = shape.stride(i);
  const std::size_t sj = shape.stride(j);
  const std::size_t m = shape.one_body();
  for (std::size_t idx = 0; idx < psi.data.size(); ++idx) {
    const std::size_t gi = (idx / si) % m;
    const std::size_t gj = (idx / sj) % m;
    const std::size_t target = idx - gi * si - gj * sj + gj * si + gi * sj;
    out.data[target] = psi.data[idx];
  }
  return out;
}

ManyBodyState symmetrize(const ManyBodyState& psi) {
  std::vector<int> perm(psi.N);
  std::iota(perm.begin(), perm.end(), 0);
  ManyBodyState acc(psi.N, psi.grid);
  const TensorShape shape = shape_of(psi);
  const std::size_t m = shape.one_body();
  int count = 0;
  do {
    // out(x_0, ..., x_{N-1}) += psi(x_perm[0], ..., x_perm[N-1])
    for (std::size_t idx = 0; idx < psi.data.size(); ++idx) {
      std::size_t src = 0;
      for (int k = 0; k < psi.N; ++k) src += ((idx / shape.stride(perm[k])) % m) * shape.stride(k);
      acc.data[idx] += psi.data[src];
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& z : acc.data) z /= static_cast<double>(count);
  return acc;
}

double symmetry_defect(const ManyBodyState& psi) {
  const double nrm = norm(psi);
  if (nrm == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < psi.N; ++i) {
    for (int j = i + 1; j < psi.N; ++j) {
      const ManyBodyState s = swap_particles(psi, i, j);
      double d = 0.0;
      for (std::size_t k = 0; k < s.data.size(); ++k) d += std::norm(s.data[k] - psi.data[k]);
      worst = std::max(worst, std::sqrt(d * psi.weight()) / nrm);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

struct ManyBodyOperator::Impl {
  detail::PairKernel kernel;
};

ManyBodyOperator::ManyBodyOperator(int N, const Grid2D& grid, double beta, SmearingRadius R, ManyBodyOptions options)
    : N_(N), grid_(grid), beta_(beta), alpha_(N > 1 ? beta / (N - 1) : 0.0), R_(R), options_(options) {
  check_particles(N);
  grid_.validate();
  const TensorShape shape{grid.n, N};
  const double dim = std::pow(static_cast<double>(grid.size()), N);
  if (dim > static_cast<double>(options_.dimension_budget)) {
    throw Error(ErrorKind::Budget, "manybody: dimension " + std::to_string(static_cast<long long>(dim)) +
                                       " exceeds the budget " + std::to_string(options_.dimension_budget));
  }
  (void)shape;
  if (R.is_point()) {
    throw Error(ErrorKind::Config, "manybody: R = 0 is singular on coincident grid points; use R > 0");
  }
  impl_ = std::make_unique<Impl>(Impl{detail::PairKernel(grid, R.value(), options_.displacement == Displacement::MinimalImage)});
}

ManyBodyOperator::~ManyBodyOperator() = default;
ManyBodyOperator::ManyBodyOperator(ManyBodyOperator&&) noexcept = default;
ManyBodyOperator& ManyBodyOperator::operator=(ManyBodyOperator&&) noexcept = default;

ManyBodyState ManyBodyOperator::apply(const ManyBodyState& psi) const {
  if (psi.N != N_) throw Error(ErrorKind::GridMismatch, "manybody: state has the wrong particle number");
  require_same_grid(psi.grid, grid_, "manybody apply");
  const TensorShape shape{grid_.n, N_};
  const std::size_t D = psi.data.size();
  const auto& K = impl_->kernel;
  const auto& terms = options_.terms;
  const bool interacting = N_ > 1 && alpha_ != 0.0;
  ManyBodyState out(N_, grid_);

  int a[3], b[3];
  // B_j at flat index idx, together with sum_k |K(x_j - x_k)|^2.
  auto field = [&](std::size_t idx, int j, double& bx, double& by, double& single) {
    detail::decode(idx, shape, a, b);
    bx = by = single = 0.0;
    for (int k = 0; k < N_; ++k) {
      if (k == j) continue;
      const Vec2 v = K(a[j] - a[k], b[j] - b[k]);
      bx += v.x;
      by += v.y;
      single += v.x * v.x + v.y * v.y;
    }
  };

  for (int j = 0; j < N_; ++j) {
    if (terms.kinetic) {
      const auto lap = detail::minus_laplacian(psi.data, shape, grid_, j);
      for (std::size_t i = 0; i < D; ++i) out.data[i] += lap[i];
    }
    if (!interacting) continue;
    double bx, by, single;
    if (terms.mixed) {
      for (int c = 0; c < 2; ++c) {
        const auto pc = detail::momentum(psi.data, shape, grid_, j, c);
        for (std::size_t i = 0; i < D; ++i) {
          field(i, j, bx, by, single);
          out.data[i] += alpha_ * (c == 0 ? bx : by) * pc[i];
        }
      }
      std::vector<cplx> tx(D), ty(D);
      for (std::size_t i = 0; i < D; ++i) {
        field(i, j, bx, by, single);
        tx[i] = bx * psi.data[i];
        ty[i] = by * psi.data[i];
      }
      const auto div = detail::momentum_divergence(std::move(tx), std::move(ty), shape, grid_, j);
      for (std::size_t i = 0; i < D; ++i) out.data[i] += alpha_ * div[i];
    }
    if (terms.three_body || terms.singular) {
      const double a2 = alpha_ * alpha_;
      for (std::size_t i = 0; i < D; ++i) {
        field(i, j, bx, by, single);
        double pot = 0.0;
        if (terms.three_body) pot += bx * bx + by * by - single;
        if (terms.singular) pot += single;
        out.data[i] += a2 * pot * psi.data[i];
      }
    }
  }
  return out;
}

double ManyBodyOperator::expectation(const ManyBodyState& psi) const { return inner(psi, apply(psi)).real(); }

ManyBodyOperator build_hamiltonian(int N, const Grid2D& grid, double beta, SmearingRadius R, ManyBodyOptions options) {
  return ManyBodyOperator(N, grid, beta, R, options);
}

// ---------------------------------------------------------------------------

Eigen::VectorXcd coefficients(const WaveField& phi) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(phi.data.size()));
  const double h = phi.grid.h();
  for (std::size_t i = 0; i < phi.data.size(); ++i) c(static_cast<Eigen::Index>(i)) = h * phi.data[i];
  return c;
}

ReducedDensityMatrix rdm1(const ManyBodyState& psi) {
  const auto m = static_cast<Eigen::Index>(psi.grid.size());
  const auto rest = static_cast<Eigen::Index>(psi.data.size()) / m;
  // Row-major (m x rest) view: row = particle 0's grid index.
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(psi.data.data(), m, rest);
  ReducedDensityMatrix g;
  g.grid = psi.grid;
  g.matrix = psi.weight() * (M * M.adjoint());
  const double tr = g.trace();
  if (tr <= 0.0) throw Error(ErrorKind::Domain, "rdm1: zero state");
  g.matrix /= tr;
  return g;
}

Eigen::VectorXd ReducedDensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double ReducedDensityMatrix::hermiticity_defect() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

DepletionReport depletion_and_distance(const ReducedDensityMatrix& gamma, const WaveField& phi) {
  require_same_grid(gamma.grid, phi.grid, "depletion_and_distance");
  const Eigen::VectorXcd c = coefficients(phi);
  DepletionReport r;
  r.depletion = 1.0 - (c.adjoint() * gamma.matrix * c)(0, 0).real();
  const Eigen::MatrixXcd diff = gamma.matrix - c * c.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  r.trace_distance = es.eigenvalues().cwiseAbs().sum();
  return r;
}

CondensateObservables mn_observables(const ManyBodyState& psi, const WaveField& phi) {
  const ProjectorAlgebra alg(psi.N, phi);
  CondensateObservables o;
  const ManyBodyState q1 = alg.q(0, psi);
  o.depletion = inner(psi, q1).real();
  o.m_half = inner(psi, alg.m_hat(0.5, psi)).real();
  const TensorShape shape = shape_of(psi);
  double g2 = 0.0;
  for (int c = 0; c < 2; ++c) {
    // grad = i p, so ||grad f|| = ||p f||.
    const auto pc = detail::momentum(q1.data, shape, psi.grid, 0, c);
    for (const auto& z : pc) g2 += std::norm(z);
  }
  o.grad_q1_norm = std::sqrt(g2 * psi.weight());
  return o;
}

double energy_gap_manybody(const ManyBodyState& psi, const ManyBodyOperator& H, const WaveField& phi) {
  const KernelSpectrum kspec(phi.grid, H.radius());
  const double en = H.expectation(psi) / psi.N;
  return std::abs(en - energy_af(phi, H.beta(), kspec).total);
}

}  // namespace anyon
