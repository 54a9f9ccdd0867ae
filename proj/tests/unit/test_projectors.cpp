#include <gtest/gtest.h>

#include <cmath>

#include "anyon/error.hpp"
#include "anyon/manybody.hpp"
#include "support.hpp"

using namespace anyon;

namespace {

const Grid2D kGrid(8, 4.0);

WaveField mode() {
  GaussianSpec s;
  s.sigma = 0.6;
  s.momentum = {0.5, 0.0};
  WaveField u = gaussian(kGrid, s);
  normalize(u);
  return u;
}

double distance(const ManyBodyState& a, const ManyBodyState& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(s * a.weight());
}

// Symmetric state with weight in every sector.
ManyBodyState mixed_state(const ProjectorAlgebra& alg, int N, std::uint64_t seed) {
  const ManyBodyState raw = symmetrize(testing_support::random_state(N, kGrid, seed));
  ManyBodyState psi(N, kGrid);
  double w = 1.0;
  for (const auto& s : alg.sectors(raw)) {
    const double n = norm(s);
    for (std::size_t i = 0; i < psi.data.size(); ++i) psi.data[i] += (w / n) * s.data[i];
    w += 0.5;
  }
  normalize(psi);
  return psi;
}

}  // namespace

TEST(Projectors, OneBodyProjectorsAreIdempotentAndCommute) {
  const ProjectorAlgebra alg(3, mode());
  const ManyBodyState psi = testing_support::random_state(3, kGrid, 2);
  EXPECT_LT(distance(alg.p(1, alg.p(1, psi)), alg.p(1, psi)), 1e-13);
  EXPECT_LT(distance(alg.p(0, alg.p(2, psi)), alg.p(2, alg.p(0, psi))), 1e-13);
  EXPECT_LT(norm(alg.p(1, alg.q(1, psi))), 1e-13);
}

TEST(Projectors, SectorsAreOrthogonalAndResolveIdentity) {
  for (int N : {2, 3}) {
    const ProjectorAlgebra alg(N, mode());
    const ManyBodyState psi = mixed_state(alg, N, 7);
    const auto parts = alg.sectors(psi);
    ManyBodyState sum(N, kGrid);
    for (int k = 0; k <= N; ++k) {
      EXPECT_GT(norm(parts[k]), 0.1);
      for (int l = k + 1; l <= N; ++l) EXPECT_LT(std::abs(inner(parts[k], parts[l])), 1e-13);
      for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += parts[k].data[i];
      EXPECT_LT(distance(alg.P(k, parts[k]), parts[k]), 1e-13);
    }
    EXPECT_LT(distance(sum, psi), 1e-13);
  }
}

TEST(Projectors, CondensateIsSectorZero) {
  const WaveField phi = mode();
  const ProjectorAlgebra alg(3, phi);
  const ManyBodyState psi = tensor_power(phi, 3);
  EXPECT_LT(distance(alg.P(0, psi), psi), 1e-13);
}

TEST(Projectors, WeightsAreCountingFunctions) {
  for (int N : {2, 3}) {
    const ProjectorAlgebra alg(N, mode());
    const ManyBodyState psi = mixed_state(alg, N, 3);
    // m_hat(1) = N^-1 sum_j q_j and m_hat(1/2)^2 = m_hat(1).
    ManyBodyState qs(N, kGrid);
    for (int j = 0; j < N; ++j) {
      const ManyBodyState q = alg.q(j, psi);
      for (std::size_t i = 0; i < qs.data.size(); ++i) qs.data[i] += q.data[i] / double(N);
    }
    EXPECT_LT(distance(alg.m_hat(1.0, psi), qs), 1e-13);
    EXPECT_LT(distance(alg.m_hat(0.5, alg.m_hat(0.5, psi)), alg.m_hat(1.0, psi)), 1e-13);
  }
}

TEST(Projectors, NegativePowersNeedZeroCondensateSector) {
  const WaveField phi = mode();
  const ProjectorAlgebra alg(2, phi);
  try {
    alg.m_hat(-0.5, tensor_power(phi, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  const ManyBodyState q = alg.q(0, testing_support::random_state(2, kGrid, 1));
  EXPECT_NO_THROW(alg.m_hat(-0.5, q));
}

TEST(Projectors, ShiftIdentity) {
  const int N = 3;
  const ProjectorAlgebra alg(N, mode());
  const ManyBodyState psi = mixed_state(alg, N, 5);
  for (int j = 0; j < N; ++j) {
    const ManyBodyState q = alg.q(j, psi);
    ManyBodyState d = alg.m_hat(1.0, q);
    const ManyBodyState s = alg.m_hat_shifted(1.0, 1, q);
    for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] -= s.data[i] + q.data[i] / double(N);
    EXPECT_LT(norm(d), 1e-13);
  }
}

TEST(Projectors, ShiftedSquareRootBound) {
  const int N = 3;
  const ProjectorAlgebra alg(N, mode());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ManyBodyState q1 = alg.q(0, mixed_state(alg, N, seed));
    for (int n = 1; n <= N; ++n) {
      const double lhs = inner(q1, alg.m_hat(0.5, q1)).real() - inner(q1, alg.m_hat_shifted(0.5, n, q1)).real();
      const double rhs = double(n) / N * inner(q1, alg.m_hat(-0.5, q1)).real();
      EXPECT_LE(lhs, rhs + 1e-10);
    }
  }
}

TEST(Projectors, CondensateObservables) {
  const WaveField phi = mode();
  const ManyBodyState psi = tensor_power(phi, 2);
  const CondensateObservables obs = mn_observables(psi, phi);
  EXPECT_LT(std::abs(obs.depletion), 1e-13);
  EXPECT_LT(std::abs(obs.m_half), 1e-13);
  EXPECT_LT(obs.grad_q1_norm, 1e-12);
}
