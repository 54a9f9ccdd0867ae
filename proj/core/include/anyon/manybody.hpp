#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "anyon/grid.hpp"
#include "anyon/kernels.hpp"

namespace anyon {

// Wave function of N bosons on N copies of a grid, stored as point values
// with particle 0 slowest; inner products carry the weight h^(2N).
struct ManyBodyState {
  int N = 0;
  Grid2D grid;
  std::vector<cplx> data;

  ManyBodyState() = default;
  ManyBodyState(int particles, const Grid2D& g);

  std::size_t dim() const { return data.size(); }
  double weight() const;  // h^(2N)
};

// phi (x) phi (x) ... (x) phi, normalized.
ManyBodyState tensor_power(const WaveField& phi, int N);
// Tensor product of distinct one-body factors, unnormalized.
ManyBodyState tensor_product(const std::vector<WaveField>& factors);

cplx inner(const ManyBodyState& a, const ManyBodyState& b);
double norm(const ManyBodyState& psi);
void normalize(ManyBodyState& psi);
ManyBodyState swap_particles(const ManyBodyState& psi, int i, int j);
// Average over all particle permutations.
ManyBodyState symmetrize(const ManyBodyState& psi);
// max over pairs of ||swap(psi) - psi|| / ||psi||.
double symmetry_defect(const ManyBodyState& psi);

enum class Displacement { MinimalImage, FreeSpace };

struct HamiltonianTerms {
  bool kinetic = true;
  bool mixed = true;
  bool three_body = true;
  bool singular = true;
};

struct ManyBodyOptions {
  HamiltonianTerms terms{};
  Displacement displacement = Displacement::MinimalImage;
  std::size_t dimension_budget = std::size_t{1} << 24;
};

// sum_j (-i grad_j + alpha B_j)^2 with B_j = sum_{k != j} grad_perp w_R(x_j - x_k)
// and alpha = beta / (N - 1). The mixed term is applied as alpha (B_j.p_j + p_j.B_j).
class ManyBodyOperator {
 public:
  ManyBodyOperator(int N, const Grid2D& grid, double beta, SmearingRadius R, ManyBodyOptions options = {});
  ~ManyBodyOperator();
  ManyBodyOperator(ManyBodyOperator&&) noexcept;
  ManyBodyOperator& operator=(ManyBodyOperator&&) noexcept;

  ManyBodyState apply(const ManyBodyState& psi) const;
  // Re <psi, H psi>.
  double expectation(const ManyBodyState& psi) const;

  int particles() const { return N_; }
  const Grid2D& grid() const { return grid_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  SmearingRadius radius() const { return R_; }
  const ManyBodyOptions& options() const { return options_; }

 private:
  struct Impl;
  int N_;
  Grid2D grid_;
  double beta_;
  double alpha_;
  SmearingRadius R_;
  ManyBodyOptions options_;
  std::unique_ptr<Impl> impl_;
};

ManyBodyOperator build_hamiltonian(int N, const Grid2D& grid, double beta, SmearingRadius R,
                                   ManyBodyOptions options = {});

struct PropagationOptions {
  int krylov_dim = 30;
  double tolerance = 1e-12;
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

struct PropagationStats {
  long long substeps = 0;
  long long operator_applications = 0;
  double max_error_estimate = 0.0;
  double max_norm_drift = 0.0;
};

using StateObserver = std::function<void(double t, const ManyBodyState& psi)>;

// exp(-i t H) psi0 by Lanczos with full reorthogonalization, advancing in
// steps of dt (substeps are halved until the error estimate meets the
// tolerance). The observer sees t = 0, dt, 2 dt, ..., T. The state is never
// renormalized; the norm drift is reported.
PropagationStats propagate(const ManyBodyState& psi0, const ManyBodyOperator& H, double T, double dt,
                           const StateObserver& observer, PropagationOptions options = {});

std::vector<ManyBodyState> propagate_samples(const ManyBodyState& psi0, const ManyBodyOperator& H, double T,
                                             double dt, PropagationOptions options = {});

// One-body reduced density matrix in the orthonormal basis e_i = delta_i / h.
struct ReducedDensityMatrix {
  Grid2D grid;
  Eigen::MatrixXcd matrix;

  double trace() const { return matrix.trace().real(); }
  Eigen::VectorXd eigenvalues() const;
  double hermiticity_defect() const;
};

ReducedDensityMatrix rdm1(const ManyBodyState& psi);

struct DepletionReport {
  double depletion = 0.0;       // 1 - <phi, gamma phi>
  double trace_distance = 0.0;  // Tr |gamma - |phi><phi||
};

DepletionReport depletion_and_distance(const ReducedDensityMatrix& gamma, const WaveField& phi);

// Orthonormal coefficient vector h * phi of a one-body field.
Eigen::VectorXcd coefficients(const WaveField& phi);

// p_j, q_j and the counting projectors P_k built from a condensate mode phi.
class ProjectorAlgebra {
 public:
  ProjectorAlgebra(int N, const WaveField& phi);

  int particles() const { return N_; }
  ManyBodyState p(int j, const ManyBodyState& psi) const;
  ManyBodyState q(int j, const ManyBodyState& psi) const;
  // P_0 psi, ..., P_N psi.
  std::vector<ManyBodyState> sectors(const ManyBodyState& psi) const;
  ManyBodyState P(int k, const ManyBodyState& psi) const;
  // sum_k weight(k) P_k psi
  ManyBodyState weighted(const ManyBodyState& psi, const std::function<double(int)>& weight) const;
  // m_hat(xi) = sum_{k >= 1} (k/N)^xi P_k. Negative xi requires ||P_0 psi|| <= 1e-8.
  ManyBodyState m_hat(double xi, const ManyBodyState& psi) const;
  // Weights shifted by n: m(k - n), set to zero for k - n <= 0.
  ManyBodyState m_hat_shifted(double xi, int shift, const ManyBodyState& psi) const;

 private:
  int N_;
  Grid2D grid_;
  std::vector<cplx> coeff_;
};

ProjectorAlgebra projector_algebra(int N, const WaveField& phi);

struct CondensateObservables {
  double depletion = 0.0;     // <psi, q_1 psi>
  double m_half = 0.0;        // <psi, m_hat(1/2) psi>
  double grad_q1_norm = 0.0;  // ||grad_1 q_1 psi||
};

CondensateObservables mn_observables(const ManyBodyState& psi, const WaveField& phi);

// |<psi, H psi> / N - E_R[phi]|.
double energy_gap_manybody(const ManyBodyState& psi, const ManyBodyOperator& H, const WaveField& phi);

}  // namespace anyon
