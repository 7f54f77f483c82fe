#include "nlh/herglotz.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlh;

namespace {

SphereDensity unit_density(int n, double lambda) {
  if (n == 2) return SphereDensity::circle(lambda, ComplexArray::Constant(1, 1.0));
  return SphereDensity::harmonics(lambda, 0, ComplexArray::Constant(1, std::sqrt(4 * kPi)));
}

double sinc(double r) { return r < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r; }

}  // namespace

TEST(Herglotz, ConstantDensityIn3DIsSinc) {
  const Grid g(3, 8.0, 32);
  const HerglotzWave w = synthesize_scalar(unit_density(3, 1.0), build_quadrature(3, 1.0, 48), g);
  ASSERT_TRUE(w.scalar);
  EXPECT_TRUE(w.scalar->is_real());
  double err = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    err = std::max(err, std::abs((*w.scalar)[i] - std::sqrt(2 / kPi) * sinc(g.point(i).norm())));
  EXPECT_LT(err / std::sqrt(2 / kPi), 1e-5);
}

TEST(Herglotz, ConstantDensityIn2DIsJ0) {
  // (2 pi)^{-1} times the circle length 2 pi sqrt(lambda)
  const Grid g(2, 10.0, 64);
  const double lambda = 2.0, k = std::sqrt(lambda);
  const HerglotzWave w = synthesize_scalar(unit_density(2, lambda), build_quadrature(2, lambda, 64), g);
  double err = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    err = std::max(err, std::abs((*w.scalar)[i] - k * std::cyl_bessel_j(0.0, k * g.point(i).norm())));
  EXPECT_LT(err, 1e-5);
}

TEST(Herglotz, SolvesTheHomogeneousEquation) {
  const Grid g(3, 6.0, 24);
  ComplexArray c = ComplexArray::Zero(9);
  c[0] = 1.0;
  c[2] = Complex(0.0, 0.5);
  c[6] = 0.3;
  const SphereDensity h = hermitian_filter(SphereDensity::harmonics(1.0, 2, c));
  const HerglotzWave w = synthesize_scalar(h, build_quadrature(3, 1.0, 24), g);
  EXPECT_LT(pde_residual(w), 1e-12);
  EXPECT_TRUE(w.scalar->is_real());
}

TEST(Herglotz, FiniteDifferenceOracleOnExactSinc) {
  // sampled sin r / r: the FD6 residual shrinks with h
  double prev = 1.0;
  for (int N : {32, 64}) {
    const Grid g(3, 8.0, N);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return sinc(x.norm()); });
    const double r = fd_helmholtz_residual(u, 1.0, 6);
    EXPECT_LT(r, prev / 10.0);
    prev = r;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(Herglotz, VectorWaveIsDivergenceFree) {
  const SphereDensity h = density_from_function(3, 1.0, 3, DensityKind::tangential, [](const Eigen::Vector3d& w) {
    return Eigen::Vector3cd(-w[1], w[0], Complex(0.0, 0.2) * w[0] * w[2]);
  });
  const Grid g(3, 6.0, 24);
  const HerglotzWave w = synthesize_vector(hermitian_filter(h), build_quadrature(3, 1.0, 16), g);
  ASSERT_TRUE(w.vector);
  EXPECT_LT(pde_residual(w), 1e-12);
}

TEST(Herglotz, AgmonLimitOfConstantDensity) {
  // (1/pi) int |h|^2 = 4 lambda for h = 1 on the sphere of radius sqrt(lambda)
  const SphereDensity h = unit_density(3, 1.0);
  EXPECT_NEAR(agmon_shell_limit(h, build_quadrature(3, 1.0, 8)), 4.0, 1e-12);
  // (1/R) int_{B_R} (2/pi) sinc^2 = (8/R) int_0^R sin^2 -> 4
  const Grid g(3, 16.0, 64);
  const HerglotzWave w = synthesize_scalar(h, build_quadrature(3, 1.0, 48), g);
  const double R = 15.0;
  const double exact = 8.0 / R * (R / 2 - std::sin(2 * R) / 4);
  EXPECT_NEAR(shell_average(*w.scalar, R), exact, 0.03 * exact);
}

TEST(Herglotz, FarFieldErrorDecreases) {
  const Grid g(2, 40.0, 256);
  const HerglotzWave w = synthesize_scalar(unit_density(2, 1.0), build_quadrature(2, 1.0, 128), g);
  const auto e = verify_far_field(w, {10.0, 20.0, 30.0});
  EXPECT_GT(e[0], e[1]);
  EXPECT_GT(e[1], e[2]);
  EXPECT_LT(e[2], e[0] / 2.0);
}

TEST(Herglotz, AsymptoteMatchesStationaryPhase) {
  // for h = 1 in n = 3, m(x) = 2 sin r and the leading term is the wave itself
  const Grid g(3, 12.0, 48);
  const SphereDensity h = unit_density(3, 1.0);
  const ScalarField a = herglotz_asymptote(h, g, default_mask_radius(1.0));
  double err = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double r = g.point(i).norm();
    if (r < default_mask_radius(1.0)) continue;
    err = std::max(err, std::abs(a[i] - std::sqrt(2 / kPi) * std::sin(r) / r));
  }
  EXPECT_LT(err, 1e-12);
}

TEST(Herglotz, DecayConstantIsFinite) {
  const Grid g(2, 20.0, 128);
  const HerglotzWave w = synthesize_scalar(unit_density(2, 1.0), build_quadrature(2, 1.0, 64), g);
  const double C = fit_decay_constant(w);
  EXPECT_GT(C, 0.0);
  EXPECT_LT(C, 10.0);
}
