#include <algorithm>
#include <cmath>
#include <sstream>

#include "anyon/error.hpp"
#include "anyon/manybody.hpp"
#include "tensor.hpp"

namespace anyon {

ProjectorAlgebra::ProjectorAlgebra(int N, const WaveField& phi) : N_(N), grid_(phi.grid) {
  if (N < 1 || N > 3) throw Error(ErrorKind::Config, "projector_algebra: N must be 1, 2 or 3");
  if (std::abs(norm(phi) - 1.0) > 1e-8) throw Error(ErrorKind::Domain, "projector_algebra: phi must be normalized");
  const double h = phi.grid.h();
  coeff_.resize(phi.data.size());
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] = h * phi.data[i];
}

ManyBodyState ProjectorAlgebra::p(int j, const ManyBodyState& psi) const {
  if (psi.N != N_) throw Error(ErrorKind::GridMismatch, "projector: wrong particle number");
  require_same_grid(psi.grid, grid_, "projector");
  const detail::TensorShape shape{grid_.n, N_};
  const std::size_t stride = shape.stride(j);
  const std::size_t m = shape.one_body();
  const std::size_t block = stride * m;
  ManyBodyState out(psi.N, psi.grid);
  std::vector<cplx> s(stride);
  for (std::size_t base = 0; base < psi.data.size(); base += block) {
    std::fill(s.begin(), s.end(), cplx{});
    for (std::size_t i = 0; i < m; ++i) {
      const cplx c = std::conj(coeff_[i]);
      const cplx* src = psi.data.data() + base + i * stride;
      for (std::size_t t = 0; t < stride; ++t) s[t] += c * src[t];
    }
    for (std::size_t i = 0; i < m; ++i) {
      cplx* dst = out.data.data() + base + i * stride;
      for (std::size_t t = 0; t < stride; ++t) dst[t] = coeff_[i] * s[t];
    }
  }
  return out;
}

ManyBodyState ProjectorAlgebra::q(int j, const ManyBodyState& psi) const {
  ManyBodyState out = p(j, psi);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = psi.data[i] - out.data[i];
  return out;
}

std::vector<ManyBodyState> ProjectorAlgebra::sectors(const ManyBodyState& psi) const {
  // Expand prod_j (p_j + q_j) and bin every branch by its number of q factors.
  std::vector<ManyBodyState> out(static_cast<std::size_t>(N_) + 1, ManyBodyState(psi.N, psi.grid));
  struct Branch {
    ManyBodyState state;
    int qs;
  };
  std::vector<Branch> level{{psi, 0}};
  for (int j = 0; j < N_; ++j) {
    std::vector<Branch> next;
    next.reserve(level.size() * 2);
    for (auto& br : level) {
      ManyBodyState pp = p(j, br.state);
      for (std::size_t i = 0; i < pp.data.size(); ++i) br.state.data[i] -= pp.data[i];
      next.push_back({std::move(pp), br.qs});
      next.push_back({std::move(br.state), br.qs + 1});
    }
    level.swap(next);
  }
  for (auto& br : level) {
    auto& dst = out[static_cast<std::size_t>(br.qs)].data;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += br.state.data[i];
  }
  return out;
}

ManyBodyState ProjectorAlgebra::P(int k, const ManyBodyState& psi) const {
  if (k < 0 || k > N_) throw Error(ErrorKind::Domain, "P_k: k out of range");
  return sectors(psi)[static_cast<std::size_t>(k)];
}

ManyBodyState ProjectorAlgebra::weighted(const ManyBodyState& psi, const std::function<double(int)>& weight) const {
  const auto parts = sectors(psi);
  ManyBodyState out(psi.N, psi.grid);
  for (int k = 0; k <= N_; ++k) {
    const double w = weight(k);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += w * parts[static_cast<std::size_t>(k)].data[i];
  }
  return out;
}

namespace {

double m_weight(double xi, int k, int N) {
  if (k <= 0) return 0.0;
  return std::pow(static_cast<double>(k) / N, xi);
}

}  // namespace

ManyBodyState ProjectorAlgebra::m_hat(double xi, const ManyBodyState& psi) const {
  if (xi < 0.0) {
    const double p0 = norm(P(0, psi));
    if (p0 > 1e-8) {
      std::ostringstream msg;
      msg << "m_hat(" << xi << ") is only defined on the range of 1 - P_0; ||P_0 psi|| = " << p0;
      throw Error(ErrorKind::Domain, msg.str());
    }
  }
  return weighted(psi, [&](int k) { return m_weight(xi, k, N_); });
}

ManyBodyState ProjectorAlgebra::m_hat_shifted(double xi, int shift, const ManyBodyState& psi) const {
  return weighted(psi, [&](int k) { return m_weight(xi, k - shift, N_); });
}

ProjectorAlgebra projector_algebra(int N, const WaveField& phi) { return ProjectorAlgebra(N, phi); }

}  // namespace anyon
