#include "nlh/resolvent.hpp"
#include "nlh/sphere.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace nlh;

namespace {

// Gauss-Legendre integral of fn over [a, b]
Complex integrate(const std::function<Complex(double)>& fn, double a, double b, int nodes = 200) {
  if (b <= a) return 0.0;
  const auto [x, w] = gauss_legendre(nodes);
  Complex s = 0.0;
  for (int i = 0; i < nodes; ++i) s += w[i] * fn(0.5 * (b - a) * x[i] + 0.5 * (a + b));
  return 0.5 * (b - a) * s;
}

// Outgoing convolution e^{ik|z|}/(4 pi |z|) * f for radial f, reduced to one
// radial integral by averaging the kernel over spheres.
Complex radial_outgoing_3d(const std::function<double(double)>& f, double k, double r, double rmax) {
  auto kern = [&](double rho) {
    if (r < 1e-9) return rho * f(rho) * std::exp(Complex(0.0, k * rho));
    const double a = std::abs(r - rho), b = r + rho;
    const Complex re = std::sin(k * b) - std::sin(k * a);
    const Complex im = std::cos(k * a) - std::cos(k * b);
    return rho * f(rho) * (re + Complex(0, 1) * im) / (2.0 * k * r);
  };
  return integrate(kern, 0.0, r) + integrate(kern, r, rmax);
}

// (i/4) H_0(k|z|) * f for radial f through Graf's addition theorem
Complex radial_outgoing_2d(const std::function<double(double)>& f, double k, double r, double rmax) {
  auto kern = [&](double rho) {
    const double lo = std::min(r, rho), hi = std::max(r, rho);
    const Complex H0(std::cyl_bessel_j(0.0, k * hi), hi > 0.0 ? std::cyl_neumann(0.0, k * hi) : 0.0);
    return rho * f(rho) * std::cyl_bessel_j(0.0, k * lo) * H0;
  };
  return Complex(0.0, 0.25) * 2.0 * kPi * (integrate(kern, 0.0, r) + integrate(kern, r, rmax));
}

double rel_l2_interior(const ScalarField& a, const std::function<Complex(const Point&)>& ref, double radius) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < a.grid().size(); ++i) {
    const Point x = a.grid().point(i);
    if (x.norm() > radius) continue;
    const Complex want = ref(x);
    num += std::norm(a[i] - want);
    den += std::norm(want);
  }
  return std::sqrt(num / den);
}

ScalarField gaussian(const Grid& g, double sigma) {
  return ScalarField::sample(g, [&](const Point& x) { return std::exp(-x.squaredNorm() / (2 * sigma * sigma)); });
}

}  // namespace

TEST(Resolvent, RadialOracle3D) {
  const Grid g(3, 8.0, 32);
  const double sigma = 1.0, lambda = 1.0;
  ResolventConfig rc;
  rc.lambda = lambda;
  const HelmholtzResolvent R(g, rc);
  const ScalarField f = gaussian(g, sigma);
  auto prof = [&](double rho) { return std::exp(-rho * rho / (2 * sigma * sigma)); };
  auto ref = [&](const Point& x) { return radial_outgoing_3d(prof, 1.0, x.norm(), 9.0); };
  const ScalarField re = R.real(f), cx = R.complex(f), lim = R.regularized_limit(f);
  EXPECT_TRUE(re.is_real());
  EXPECT_LT(rel_l2_interior(re, [&](const Point& x) { return Complex(ref(x).real(), 0.0); }, 4.0), 1e-6);
  EXPECT_LT(rel_l2_interior(cx, ref, 4.0), 1e-6);
  EXPECT_LT(rel_l2_interior(lim, ref, 4.0), 1e-6);
}

TEST(Resolvent, RadialOracle2D) {
  const Grid g(2, 12.0, 96);
  const double lambda = 2.0, k = std::sqrt(lambda);
  ResolventConfig rc;
  rc.lambda = lambda;
  const HelmholtzResolvent R(g, rc);
  const ScalarField f = gaussian(g, 1.0);
  auto prof = [](double rho) { return std::exp(-rho * rho / 2); };
  auto ref = [&](const Point& x) { return radial_outgoing_2d(prof, k, x.norm(), 10.0); };
  EXPECT_LT(rel_l2_interior(R.complex(f), ref, 6.0), 1e-6);
  EXPECT_LT(rel_l2_interior(R.real(f), [&](const Point& x) { return Complex(ref(x).real(), 0.0); }, 6.0), 1e-6);
}

TEST(Resolvent, SchemesAgree) {
  const Grid g(2, 12.0, 96);
  ResolventConfig rc;
  rc.lambda = 1.0;
  const HelmholtzResolvent R(g, rc);
  const ScalarField f = ScalarField::sample(
      g, [](const Point& x) { return std::exp(-0.5 * (x - Point(1, 0.5, 0)).squaredNorm()) * (1.0 + x[1]); });
  const ScalarField a = R.complex(f), b = R.regularized_limit(f);
  EXPECT_LT((a - b).max_abs(), 1e-8 * a.max_abs());
  // the surface term is the imaginary part of the outgoing resolvent
  const ScalarField s = R.surface_term(f);
  EXPECT_LT((a - R.real(f) - s).max_abs(), 1e-12 * a.max_abs());
}

TEST(Resolvent, InverseOnRange) {
  for (int n : {2, 3}) {
    const Grid g(n, n == 3 ? 8.0 : 12.0, n == 3 ? 32 : 96);
    ResolventConfig rc;
    rc.lambda = 1.0;
    const HelmholtzResolvent R(g, rc);
    const ScalarField G = ScalarField::sample(
        g, [](const Point& x) { return std::exp(-x.squaredNorm() / 2.25) * (1 + 0.3 * x[0]); });
    const ScalarField back = R.real(apply_helmholtz(G, 1.0));
    EXPECT_LT((back - G).max_abs(), 1e-8 * G.max_abs()) << "n=" << n;
    const ScalarField img = R.operator_image(G);
    EXPECT_LT((img - G).max_abs(), 1e-6 * G.max_abs()) << "n=" << n;
  }
}

TEST(Resolvent, RejectsBoundaryMass) {
  const Grid g(2, 4.0, 32);
  ResolventConfig rc;
  const HelmholtzResolvent R(g, rc);
  EXPECT_THROW(R.real(ScalarField(g, RealArray(RealArray::Ones(g.size())))), std::runtime_error);
  EXPECT_THROW(R.real(ScalarField(Grid(2, 4.0, 16), RealArray(RealArray::Zero(256)))), std::invalid_argument);
}

TEST(Resolvent, RegularizedApproachesTheLimit) {
  const Grid g(2, 12.0, 96);
  ResolventConfig rc;
  rc.lambda = 1.0;
  const HelmholtzResolvent R(g, rc);
  const ScalarField f = gaussian(g, 1.0);
  const ScalarField lim = R.complex(f);
  double prev = 1e300;
  for (double eps : {0.08, 0.04, 0.02}) {
    const double d = (R.regularized(f, eps) - lim).max_abs();
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(FourthOrder, RootsMatchClosedForm) {
  // case (i): alpha < 0
  {
    const double a = -3.0, b = 2.0;
    const FourthOrderSpec s = FourthOrderSpec::make(a, b);
    EXPECT_EQ(s.tag, FourthOrderCase::i);
    EXPECT_NEAR(s.lambda1, (-b + std::sqrt(b * b - 4 * a)) / 2, 1e-15);
    EXPECT_NEAR(s.lambda2, (-b - std::sqrt(b * b - 4 * a)) / 2, 1e-15);
  }
  // case (ii): alpha > 0, beta < -2 sqrt(alpha)
  {
    const double a = 2.0, b = -5.0;
    const FourthOrderSpec s = FourthOrderSpec::make(a, b);
    EXPECT_EQ(s.tag, FourthOrderCase::ii);
    EXPECT_NEAR(s.lambda1, (-b + std::sqrt(b * b - 4 * a)) / 2, 1e-15);
    EXPECT_NEAR(s.lambda2, (-b - std::sqrt(b * b - 4 * a)) / 2, 1e-15);
  }
  EXPECT_THROW(FourthOrderSpec::make(1.0, 0.0), std::invalid_argument);
}

TEST(FourthOrder, InverseOnRangeBothCases) {
  const Grid g(2, 12.0, 96);
  const ScalarField G = gaussian(g, 1.5);
  for (auto [a, b] : {std::pair{-2.0, 1.0}, std::pair{1.0, -2.5}}) {
    const FourthOrderSpec s = FourthOrderSpec::make(a, b);
    ResolventConfig rc;
    const FourthOrderResolvent R(g, s, rc);
    const ScalarField back = R.apply(apply_fourth_order(G, s));
    EXPECT_LT((back - G).max_abs(), 1e-8 * G.max_abs()) << "alpha " << a;
  }
}

TEST(CurlCurl, DecompositionIsExact) {
  const Grid g(3, 6.0, 24);
  auto bump = [](const Point& x, double c) { return std::exp(-0.5 * (x - Point(c, 0, 0)).squaredNorm()); };
  const VectorField3 G(ScalarField::sample(g, [&](const Point& x) { return x[1] * bump(x, 0.5); }),
                       ScalarField::sample(g, [&](const Point& x) { return bump(x, -0.3); }),
                       ScalarField::sample(g, [&](const Point& x) { return x[0] * x[2] * bump(x, 0.0); }));
  const HelmholtzSplit s = helmholtz_decompose(G);
  const VectorField3 sum = s.curl_free + s.div_free;
  double scale = 0.0;
  for (int c = 0; c < 3; ++c) {
    scale = std::max(scale, G[c].max_abs());
    EXPECT_LT((sum[c] - G[c]).max_abs(), 1e-12 * G[c].max_abs());
  }
  const VectorField3 curl = spectral_curl(s.curl_free);
  for (int c = 0; c < 3; ++c) EXPECT_LT(curl[c].max_abs(), 1e-10 * scale);
  EXPECT_LT(spectral_divergence(s.div_free).max_abs(), 1e-10 * scale);
}

TEST(CurlCurl, GradientInputReturnsMinusGOverLambda) {
  const Grid g(3, 6.0, 24);
  const ScalarField phi = gaussian(g, 1.0);
  const auto grad = spectral_gradient(phi);
  const VectorField3 G(grad[0], grad[1], grad[2]);
  ResolventConfig rc;
  rc.lambda = 2.0;
  const CurlCurlResolvent R(g, rc);
  const VectorField3 E = R.apply(G);
  for (int c = 0; c < 3; ++c) EXPECT_LT((E[c] - (-0.5) * G[c]).max_abs(), 1e-14 * G[c].max_abs());
}

TEST(CurlCurl, InverseOnRange) {
  const Grid g(3, 8.0, 32);
  ResolventConfig rc;
  rc.lambda = 1.0;
  const CurlCurlResolvent R(g, rc);
  const VectorField3 G(ScalarField::sample(g, [](const Point& x) { return -x[1] * std::exp(-0.5 * x.squaredNorm()); }),
                       ScalarField::sample(g, [](const Point& x) { return x[0] * std::exp(-0.5 * x.squaredNorm()); }),
                       ScalarField::sample(g, [](const Point& x) { return std::exp(-0.5 * x.squaredNorm()); }));
  const VectorField3 back = R.apply(apply_curlcurl(G, 1.0));
  for (int c = 0; c < 3; ++c) EXPECT_LT((back[c] - G[c]).max_abs(), 1e-7 * G[c].max_abs()) << c;
}

TEST(RuizVega, ShellNormsStayBounded) {
  const Grid g(2, 12.0, 96);
  ResolventConfig rc;
  rc.lambda = 1.0;
  const auto rows = ruiz_vega_diagnostic(gaussian(g, 1.0), rc, {0.2, 0.1, 0.05}, {3.0, 6.0});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].sup_norm, 1.1 * rows[i - 1].sup_norm);
}
