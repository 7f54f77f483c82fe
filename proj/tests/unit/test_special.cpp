#include "nlh/special.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlh;
using C = std::complex<double>;

TEST(Hankel, RealAxisMatchesStandardLibrary) {
  for (double x : {0.01, 0.5, 1.0, 3.7, 10.0, 19.5, 20.5, 55.0}) {
    const auto [h0, h1] = hankel1_01(C(x, 0.0));
    EXPECT_NEAR(h0.real(), std::cyl_bessel_j(0.0, x), 1e-13);
    EXPECT_NEAR(h0.imag(), std::cyl_neumann(0.0, x), 1e-12 * std::max(1.0, std::abs(std::cyl_neumann(0.0, x))));
    EXPECT_NEAR(h1.real(), std::cyl_bessel_j(1.0, x), 1e-13);
    EXPECT_NEAR(h1.imag(), std::cyl_neumann(1.0, x), 1e-12 * std::max(1.0, std::abs(std::cyl_neumann(1.0, x))));
  }
}

TEST(Hankel, ImaginaryAxisMatchesModifiedBessel) {
  // H_0(i y) = (2/(i pi)) K_0(y), H_1(i y) = -(2/pi) K_1(y)
  for (double y : {0.1, 1.0, 4.0, 15.0}) {
    const auto [h0, h1] = hankel1_01(C(0.0, y));
    const C want0 = 2.0 / (C(0, 1) * M_PI) * std::cyl_bessel_k(0.0, y);
    const C want1 = -2.0 / M_PI * std::cyl_bessel_k(1.0, y);
    EXPECT_LT(std::abs(h0 - want0), 1e-12 * std::abs(want0));
    EXPECT_LT(std::abs(h1 - want1), 1e-12 * std::abs(want1));
  }
}

TEST(Hankel, DerivativeIdentityOffAxis) {
  // d/dz H_0 = -H_1, checked by a five-point complex difference
  for (C z : {C(1.0, 0.3), C(5.0, 0.01), C(7.9, 0.2), C(12.0, 2.0), C(25.0, 0.5), C(19.9, 0.1), C(15.0, 0.001)}) {
    const double d = 1e-3;
    auto H0 = [](C w) { return hankel1_01(w).first; };
    const C num = (8.0 * (H0(z + d) - H0(z - d)) - (H0(z + 2 * d) - H0(z - 2 * d))) / (12.0 * d);
    const C h1 = hankel1_01(z).second;
    EXPECT_LT(std::abs(num + h1), 1e-7 * std::max(1.0, std::abs(h1))) << z;
  }
}

TEST(Hankel, ContinuousAcrossTheExpansionSwitches) {
  for (double r : {8.0, 20.0}) {
    const C a = std::polar(r * (1 - 1e-14), 0.01), b = std::polar(r * (1 + 1e-14), 0.01);
    EXPECT_LT(std::abs(hankel1_01(a).first - hankel1_01(b).first), 1e-12) << r;
    EXPECT_LT(std::abs(hankel1_01(a).second - hankel1_01(b).second), 1e-12) << r;
  }
}

TEST(Hankel, NearRealAxisAgreesWithStandardLibrary) {
  // H_0(x + i eta) = H_0(x) - i eta H_1(x) + O(eta^2)
  const double eta = 1e-8;
  for (double x : {3.0, 9.5, 14.2, 19.7, 23.0}) {
    const auto [h0, h1] = hankel1_01(C(x, eta));
    const C want0(std::cyl_bessel_j(0.0, x), std::cyl_neumann(0.0, x));
    const C want1(std::cyl_bessel_j(1.0, x), std::cyl_neumann(1.0, x));
    EXPECT_LT(std::abs(h0 - want0 + C(0, eta) * want1), 1e-13) << x;
  }
}

TEST(BesselSeries, RealAxisAndSymmetry) {
  for (double x : {0.0, 0.7, 2.4048, 8.0}) {
    const auto [j0, j1] = bessel_j01_series(C(x, 0.0));
    EXPECT_NEAR(j0.real(), std::cyl_bessel_j(0.0, x), 1e-13);
    EXPECT_NEAR(j1.real(), std::cyl_bessel_j(1.0, x), 1e-13);
    EXPECT_NEAR(j0.imag(), 0.0, 1e-15);
  }
  // J_0(iy) = I_0(y)
  EXPECT_NEAR(bessel_j01_series(C(0.0, 2.0)).first.real(), std::cyl_bessel_i(0.0, 2.0), 1e-12);
}
