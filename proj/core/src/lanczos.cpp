#include <cmath>
#include <sstream>

#include "anyon/error.hpp"
#include "anyon/manybody.hpp"

namespace anyon {

namespace {

using Vec = std::vector<cplx>;

cplx dot(const Vec& a, const Vec& b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a).real()); }

struct KrylovBasis {
  std::vector<Vec> V;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples V[j] and V[j+1]; the last entry is the residual norm
  bool invariant = false;
};

KrylovBasis build_basis(const ManyBodyOperator& H, const ManyBodyState& psi, int m, long long& applications) {
  KrylovBasis kb;
  const double nrm = norm2(psi.data);
  Vec v = psi.data;
  for (auto& z : v) z /= nrm;
  ManyBodyState work(psi.N, psi.grid);
  for (int j = 0; j < m; ++j) {
    work.data = v;
    kb.V.push_back(std::move(v));
    Vec w = H.apply(work).data;
    ++applications;
    const double a = dot(kb.V[j], w).real();
    kb.alpha.push_back(a);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : kb.V) {
        const cplx c = dot(u, w);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * u[i];
      }
    }
    const double b = norm2(w);
    kb.beta.push_back(b);
    const double scale = std::abs(a) + (j > 0 ? kb.beta[j - 1] : 0.0) + 1.0;
    if (b <= 1e-13 * scale) {
      kb.invariant = true;
      break;
    }
    if (j + 1 < m) {
      for (auto& z : w) z /= b;
      v = std::move(w);
    }
  }
  return kb;
}

}  // namespace

PropagationStats propagate(const ManyBodyState& psi0, const ManyBodyOperator& H, double T, double dt,
                           const StateObserver& observer, PropagationOptions options) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw Error(ErrorKind::Config, "propagate: need dt > 0 and T >= 0");
  const double bytes = static_cast<double>(options.krylov_dim + 4) * static_cast<double>(psi0.dim()) * sizeof(cplx);
  if (bytes > static_cast<double>(options.memory_budget_bytes)) {
    throw Error(ErrorKind::Budget, "propagate: Krylov basis would exceed the memory budget");
  }
  PropagationStats stats;
  ManyBodyState psi = psi0;
  const double norm0 = norm(psi0);
  if (observer) observer(0.0, psi);

  const long long nsteps = T > 0.0 ? static_cast<long long>(std::ceil(T / dt - 1e-9)) : 0;
  const int m = options.krylov_dim;
  for (long long s = 1; s <= nsteps; ++s) {
    const double t_target = s == nsteps ? T : static_cast<double>(s) * dt;
    double remaining = t_target - static_cast<double>(s - 1) * dt;
    while (remaining > 0.0) {
      const KrylovBasis kb = build_basis(H, psi, m, stats.operator_applications);
      const int k = static_cast<int>(kb.alpha.size());
      Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(k, k);
      for (int i = 0; i < k; ++i) {
        Tm(i, i) = kb.alpha[i];
        if (i + 1 < k) Tm(i, i + 1) = Tm(i + 1, i) = kb.beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
      const Eigen::MatrixXd& Q = es.eigenvectors();
      const Eigen::VectorXd& lam = es.eigenvalues();
      auto coeffs = [&](double tau) {
        Eigen::VectorXcd y(k);
        for (int i = 0; i < k; ++i) y(i) = std::polar(1.0, -tau * lam(i)) * Q(0, i);
        return Eigen::VectorXcd(Q.cast<cplx>() * y);
      };
      double tau = remaining;
      Eigen::VectorXcd c;
      double err = 0.0;
      while (true) {
        c = coeffs(tau);
        err = kb.invariant ? 0.0 : kb.beta.back() * std::abs(c(k - 1));
        if (err <= options.tolerance) break;
        tau *= 0.5;
        if (tau < 1e-10 * dt) {
          std::ostringstream msg;
          msg << "Lanczos propagation stagnated near t = " << t_target - remaining << " (error estimate " << err << ")";
          throw Error(ErrorKind::KrylovBreakdown, msg.str());
        }
      }
      const double nrm = norm2(psi.data);
      std::fill(psi.data.begin(), psi.data.end(), cplx{});
      for (int i = 0; i < k; ++i) {
        const cplx f = nrm * c(i);
        const Vec& vi = kb.V[static_cast<std::size_t>(i)];
        for (std::size_t x = 0; x < psi.data.size(); ++x) psi.data[x] += f * vi[x];
      }
      for (const auto& z : psi.data) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          throw Error(ErrorKind::NonFinite, "propagate: non-finite values in the propagated state");
        }
      }
      stats.max_error_estimate = std::max(stats.max_error_estimate, err);
      ++stats.substeps;
      remaining -= tau;
      if (remaining < 1e-14 * dt) remaining = 0.0;
    }
    stats.max_norm_drift = std::max(stats.max_norm_drift, std::abs(norm(psi) - norm0));
    if (observer) observer(t_target, psi);
  }
  return stats;
}

std::vector<ManyBodyState> propagate_samples(const ManyBodyState& psi0, const ManyBodyOperator& H, double T,
                                             double dt, PropagationOptions options) {
  std::vector<ManyBodyState> out;
  propagate(psi0, H, T, dt, [&](double, const ManyBodyState& psi) { out.push_back(psi); }, options);
  return out;
}

}  // namespace anyon
