#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "anyon/error.hpp"
#include "anyon/kernels.hpp"
#include "support.hpp"

using namespace anyon;

namespace {

// L^p norm of the radial profile min(r / R^2, 1 / r) by tanh-sinh quadrature,
// with the tail mapped onto (0, 1] through r = R / s.
double lp_norm_oracle(double p, double R) {
  boost::math::quadrature::tanh_sinh<double> q;
  const double inner = q.integrate([&](double r) { return std::pow(r / (R * R), p) * r; }, 0.0, R);
  const double outer = q.integrate(
      [&](double s) {
        if (s <= 0.0) return 0.0;
        return std::pow(R, 2.0 - p) * std::pow(s, p - 3.0);
      },
      0.0, 1.0);
  return std::pow(2.0 * std::numbers::pi * (inner + outer), 1.0 / p);
}

}  // namespace

TEST(SmearingRadius, RejectsNegative) {
  EXPECT_THROW(SmearingRadius(-0.1), Error);
  EXPECT_TRUE(SmearingRadius(0.0).is_point());
  EXPECT_TRUE(SmearingRadius(0.2).in_log_regime());
  EXPECT_FALSE(SmearingRadius(0.5).in_log_regime());
}

TEST(Kernel, PotentialIsContinuousAtTheDiscEdge) {
  const SmearingRadius R(0.3);
  const double in = eval_wR({0.3 * (1 - 1e-12), 0.0}, R);
  const double out = eval_wR({0.0, 0.3 * (1 + 1e-12)}, R);
  EXPECT_NEAR(in, std::log(0.3), 1e-10);
  EXPECT_NEAR(out, std::log(0.3), 1e-10);
}

TEST(Kernel, PerpGradientMatchesFiniteDifferences) {
  const SmearingRadius R(0.5);
  const double eps = 1e-6;
  for (Vec2 x : {Vec2{0.1, 0.2}, Vec2{0.7, -0.4}, Vec2{-2.0, 1.5}}) {
    const double dx = (eval_wR({x.x + eps, x.y}, R) - eval_wR({x.x - eps, x.y}, R)) / (2 * eps);
    const double dy = (eval_wR({x.x, x.y + eps}, R) - eval_wR({x.x, x.y - eps}, R)) / (2 * eps);
    const Vec2 g = eval_grad_perp_wR(x, R);
    EXPECT_NEAR(g.x, -dy, 1e-7);
    EXPECT_NEAR(g.y, dx, 1e-7);
  }
}

TEST(Kernel, PointVortexIsSingularAtOrigin) {
  try {
    eval_grad_perp_wR({0.0, 0.0}, SmearingRadius(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Singular);
  }
  const Vec2 g = eval_grad_perp_wR({0.0, 0.0}, SmearingRadius(0.1));
  EXPECT_EQ(g.x, 0.0);
  EXPECT_EQ(g.y, 0.0);
}

TEST(Kernel, SupNormIsInverseRadius) {
  for (double r : {0.05, 0.3, 2.0}) {
    const SmearingRadius R(r);
    EXPECT_DOUBLE_EQ(sup_grad_wR(R), 1.0 / r);
    const Vec2 g = eval_grad_perp_wR({r, 0.0}, R);
    EXPECT_NEAR(std::hypot(g.x, g.y), 1.0 / r, 1e-12);
  }
}

TEST(Kernel, LpNormMatchesQuadrature) {
  for (double p : {2.5, 3.0, 4.0, 6.0, 10.0}) {
    for (double r : {0.01, 0.1, 0.5, 1.0, 3.0}) {
      const double oracle = lp_norm_oracle(p, r);
      EXPECT_NEAR(lp_norm_grad_wR(p, SmearingRadius(r)) / oracle, 1.0, 1e-10) << "p=" << p << " R=" << r;
    }
  }
}

TEST(Kernel, LpNormDomain) {
  EXPECT_THROW(lp_norm_grad_wR(2.0, SmearingRadius(0.1)), Error);
  EXPECT_THROW(lp_norm_grad_wR(4.0, SmearingRadius(0.0)), Error);
}

TEST(Kernel, LpNormScalesLikeRadiusPower) {
  for (double p : {3.0, 5.0}) {
    const double a = lp_norm_grad_wR(p, SmearingRadius(0.1));
    const double b = lp_norm_grad_wR(p, SmearingRadius(0.2));
    EXPECT_NEAR(std::log(b / a) / std::log(2.0), 2.0 / p - 1.0, 1e-12);
  }
}

TEST(KernelSpectrum, ConvolutionEqualsDirectSum) {
  const Grid2D g(16, 6.0);
  const SmearingRadius R(0.5);
  const KernelSpectrum ks(g, R);
  const WaveField u = testing_support::random_smooth(g, 3);
  ScalarField rho(g);
  for (std::size_t i = 0; i < rho.data.size(); ++i) rho.data[i] = std::norm(u.data[i]) + 0.01 * std::sin(1.0 * i);
  const VectorField A = ks.convolve(rho);
  for (int a = 0; a < g.n; ++a) {
    for (int b = 0; b < g.n; ++b) {
      double sx = 0, sy = 0;
      for (int a2 = 0; a2 < g.n; ++a2) {
        for (int b2 = 0; b2 < g.n; ++b2) {
          const Vec2 k = grad_perp_wR_sample((a - a2) * g.h(), (b - b2) * g.h(), R.value());
          sx += k.x * rho.data[a2 * g.n + b2];
          sy += k.y * rho.data[a2 * g.n + b2];
        }
      }
      EXPECT_NEAR(A.x[a * g.n + b], sx * g.weight(), 1e-12);
      EXPECT_NEAR(A.y[a * g.n + b], sy * g.weight(), 1e-12);
    }
  }
}

TEST(KernelSpectrum, ContractionIsMinusTransposeOfConvolution) {
  // K is odd, so <K * rho, v> = -<rho, K . v>.
  const Grid2D g(16, 6.0);
  const KernelSpectrum ks(g, SmearingRadius(0.4));
  ScalarField rho(g);
  VectorField v(g);
  for (std::size_t i = 0; i < rho.data.size(); ++i) {
    rho.data[i] = std::cos(0.37 * i);
    v.x[i] = std::sin(0.11 * i);
    v.y[i] = std::cos(0.05 * i * i);
  }
  const VectorField A = ks.convolve(rho);
  const ScalarField s = ks.contract(v);
  double lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < rho.data.size(); ++i) {
    lhs += A.x[i] * v.x[i] + A.y[i] * v.y[i];
    rhs += rho.data[i] * s.data[i];
  }
  EXPECT_NEAR(lhs, -rhs, 1e-10 * std::abs(lhs));
}

TEST(KernelSpectrum, WarnsWhenUnderResolved) {
  WarningCapture cap;
  const KernelSpectrum ks(Grid2D(16, 16.0), SmearingRadius(0.5));
  EXPECT_TRUE(cap.contains("under-resolved"));
}
