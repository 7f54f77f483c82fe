#include "nlh/sphere.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace nlh;

namespace {

ComplexArray random_coeffs(Eigen::Index count, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  ComplexArray c(count);
  for (auto& v : c) v = Complex(d(rng), d(rng));
  return c;
}

}  // namespace

TEST(GaussLegendre, ThreePointRule) {
  const auto [x, w] = gauss_legendre(3);
  EXPECT_NEAR(x[0], -std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-15);
  EXPECT_NEAR(w[0], 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(w[1], 8.0 / 9.0, 1e-15);
}

TEST(GaussLegendre, ExactForDegree2nMinus1) {
  for (int n : {1, 4, 9, 24}) {
    const auto [x, w] = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double want = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR((w * x.pow(k)).sum(), want, 1e-13) << "n=" << n << " k=" << k;
    }
    for (int i = 1; i < n; ++i) EXPECT_LT(x[i - 1], x[i]);
  }
}

TEST(Quadrature, SurfaceAreaAndRadius) {
  for (double lambda : {0.5, 1.0, 4.0}) {
    const auto q2 = build_quadrature(2, lambda, 16);
    EXPECT_NEAR(q2.weights.sum(), 2 * kPi * std::sqrt(lambda), 1e-12);
    const auto q3 = build_quadrature(3, lambda, 12);
    EXPECT_NEAR(q3.weights.sum(), 4 * kPi * lambda, 1e-12);
    for (Eigen::Index i = 0; i < q3.size(); ++i) EXPECT_NEAR(q3.nodes.row(i).norm(), std::sqrt(lambda), 1e-13);
  }
}

TEST(Quadrature, AntipodeIsWeightPreservingBijection) {
  for (int n : {2, 3})
    for (int res : {4, 10, 22}) {
      const auto q = build_quadrature(n, 2.0, res);
      std::vector<int> hit(q.size(), 0);
      for (Eigen::Index i = 0; i < q.size(); ++i) {
        const Eigen::Index j = q.antipode[i];
        ++hit[j];
        EXPECT_LT((q.nodes.row(i) + q.nodes.row(j)).norm(), 1e-13);
        EXPECT_DOUBLE_EQ(q.weights[i], q.weights[j]);
      }
      for (int h : hit) EXPECT_EQ(h, 1);
    }
}

TEST(Quadrature, RejectsOddResolution) {
  EXPECT_THROW(build_quadrature(3, 1.0, 7), std::invalid_argument);
  EXPECT_THROW(build_quadrature(4, 1.0, 8), std::invalid_argument);
}

TEST(Harmonics, LowDegreeClosedForms) {
  const Eigen::Vector3d w = Eigen::Vector3d(0.3, -0.4, 0.5).normalized();
  auto single = [&](int l, int m) {
    ComplexArray c = ComplexArray::Zero(harmonic_count(2));
    c[l * l + l + m] = 1.0;
    auto [re, im] = harmonic_sum<double>(c, 2, w[0], w[1], w[2]);
    return Complex(re, im);
  };
  const Complex xy(w[0], w[1]);
  EXPECT_NEAR(std::abs(single(0, 0) - 1.0 / std::sqrt(4 * kPi)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(single(1, 0) - std::sqrt(3 / (4 * kPi)) * w[2]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(single(1, 1) + std::sqrt(3 / (8 * kPi)) * xy), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(single(1, -1) - std::sqrt(3 / (8 * kPi)) * std::conj(xy)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(single(2, 0) - std::sqrt(5 / (16 * kPi)) * (3 * w[2] * w[2] - 1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(single(2, 2) - std::sqrt(15 / (32 * kPi)) * xy * xy), 0.0, 1e-14);
}

TEST(Harmonics, OrthonormalUnderQuadrature) {
  const int L = 4;
  const auto q = build_quadrature(3, 1.0, 2 * L + 6);
  const Eigen::Index K = harmonic_count(L);
  Eigen::MatrixXcd Y(q.size(), K);
  for (Eigen::Index k = 0; k < K; ++k) {
    ComplexArray c = ComplexArray::Zero(K);
    c[k] = 1.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const Eigen::Vector3d w = q.direction(i);
      auto [re, im] = harmonic_sum<double>(c, L, w[0], w[1], w[2]);
      Y(i, k) = Complex(re, im);
    }
  }
  const Eigen::MatrixXcd G = Y.adjoint() * q.weights.matrix().asDiagonal() * Y;
  EXPECT_LT((G - Eigen::MatrixXcd::Identity(K, K)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Density, ProjectionReproducesBandLimitedFunctions) {
  std::mt19937_64 rng(4);
  const SphereDensity h = SphereDensity::harmonics(1.0, 3, random_coeffs(16, rng));
  const SphereDensity back =
      density_from_function(3, 1.0, 3, DensityKind::scalar, [&](const Eigen::Vector3d& w) { return h.at(w); });
  EXPECT_LT((back.coefficients()[0] - h.coefficients()[0]).abs().maxCoeff(), 1e-13);
  const SphereDensity c = SphereDensity::circle(1.0, random_coeffs(7, rng));
  const SphereDensity cb =
      density_from_function(2, 1.0, 3, DensityKind::scalar, [&](const Eigen::Vector3d& w) { return c.at(w); });
  EXPECT_LT((cb.coefficients()[0] - c.coefficients()[0]).abs().maxCoeff(), 1e-13);
}

TEST(Density, HermitianFilterIsIdempotentProjection) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const SphereDensity h = trial % 2 ? SphereDensity::harmonics(1.5, 4, random_coeffs(25, rng))
                                      : SphereDensity::circle(1.5, random_coeffs(9, rng));
    const SphereDensity f = hermitian_filter(h);
    const auto q = build_quadrature(h.dim(), 1.5, 16);
    EXPECT_LT(hermitian_defect(f, q), 1e-13);
    const SphereDensity ff = hermitian_filter(f);
    EXPECT_LT((ff.coefficients()[0] - f.coefficients()[0]).abs().maxCoeff(), 1e-15);
  }
}

TEST(Density, TangentialDensitiesAreTangent) {
  std::mt19937_64 rng(2);
  const SphereDensity h =
      SphereDensity::tangential(1.0, 3, {random_coeffs(16, rng), random_coeffs(16, rng), random_coeffs(16, rng)});
  EXPECT_LT(tangential_defect(h, build_quadrature(3, 1.0, 14)), 1e-13);
}

TEST(Density, CylindricalProjection) {
  // g = (-w2, w1, 0) z(w3) is cylindrical already
  const SphereDensity h = density_from_function(3, 1.0, 4, DensityKind::tangential, [](const Eigen::Vector3d& w) {
    return Eigen::Vector3cd(-w[1] * (1 + w[2] * w[2]), w[0] * (1 + w[2] * w[2]), 0.0);
  });
  EXPECT_LT(cylindrical_defect(h, build_quadrature(3, 1.0, 16)), 1e-12);
  // a radial-axis field is not
  const SphereDensity b = density_from_function(3, 1.0, 4, DensityKind::tangential, [](const Eigen::Vector3d&) {
    return Eigen::Vector3cd(0.0, 0.0, 1.0);
  });
  EXPECT_GT(cylindrical_defect(b, build_quadrature(3, 1.0, 16)), 0.1);
  const auto [p, tag] = project_cylindrical(b.plus(h));
  EXPECT_TRUE(tag.flag);
  EXPECT_LT(tag.residual, kCylTolerance);
}

TEST(Density, CmNormOfConstant) {
  ComplexArray c = ComplexArray::Zero(4);
  c[0] = 2.0;
  const SphereDensity h = SphereDensity::harmonics(1.0, 1, c);
  for (int m : {0, 1, 2}) EXPECT_NEAR(cm_norm_estimate(h, m), 2.0 / std::sqrt(4 * kPi), 1e-10);
  c[2] = 1.0;
  const SphereDensity g = SphereDensity::harmonics(1.0, 1, c);
  EXPECT_LE(cm_norm_estimate(g, 0), cm_norm_estimate(g, 1) + 1e-14);
}

TEST(Spectrum, GaussianRestrictedToSphere) {
  // unitary transform of exp(-|x|^2/2) on |xi| = sqrt(lambda) is exp(-lambda/2)
  const Grid g(3, 8.0, 32);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return std::exp(-0.5 * x.squaredNorm()); });
  const auto q = build_quadrature(3, 2.0, 8);
  const ComplexArray v = restrict_spectrum_to_sphere(f, q);
  EXPECT_LT((v - std::exp(-1.0)).abs().maxCoeff(), 1e-12);
  const ComplexArray s = restrict_spectrum_to_sphere(forward_transform(f), q);
  EXPECT_LT((s - std::exp(-1.0)).abs().maxCoeff(), 1e-12);
}

TEST(Spectrum, BeyondNyquistThrows) {
  const Grid g(2, 2.0, 8);
  const ScalarField f(g, RealArray(RealArray::Ones(g.size())));
  EXPECT_THROW(restrict_spectrum_to_sphere(f, build_quadrature(2, 100.0, 8)), std::invalid_argument);
}
