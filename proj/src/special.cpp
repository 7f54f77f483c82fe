#include "nlh/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nlh {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kEuler = 0.57721566490153286061;

std::pair<C, C> hankel_asymptotic(C z) {
  C out[2];
  for (int nu = 0; nu <= 1; ++nu) {
    const double mu = 4.0 * nu * nu;
    C sum = 1.0, term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
      term *= C(0.0, 1.0) * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k) / z;
      const double mag = std::abs(term);
      if (mag > last) break;  // asymptotic series: stop at the smallest term
      sum += term;
      last = mag;
      if (mag < 1e-17 * std::abs(sum)) break;
    }
    out[nu] = std::sqrt(2.0 / (kPi * z)) * std::exp(C(0.0, 1.0) * (z - nu * kPi / 2.0 - kPi / 4.0)) * sum;
  }
  return {out[0], out[1]};
}

std::pair<C, C> hankel_series(C z) {
  auto [j0, j1] = bessel_j01_series(z);
  const C q = -z * z / 4.0;  // (-z^2/4)^k
  const C lg = std::log(z / 2.0);
  // Y0 = (2/pi)(ln(z/2) + gamma) J0 - (2/pi) sum_k H_k q^k/(k!)^2
  // Y1 = (2/pi) ln(z/2) J1 - 2/(pi z) - (1/pi)(z/2) sum_k (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
  C s0 = 0.0, s1 = 0.0, t = 1.0;
  double harm = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      t *= q / (double(k) * k);
      harm += 1.0 / k;
    }
    const C a0 = harm * t;
    const double psi_sum = (-kEuler + harm) + (-kEuler + harm + 1.0 / (k + 1.0));
    const C a1 = psi_sum * t / double(k + 1);
    s0 += a0;
    s1 += a1;
    if (k > 4 && std::abs(a0) + std::abs(a1) < 1e-18 * (std::abs(s0) + std::abs(s1))) break;
  }
  const C y0 = (2.0 / kPi) * (lg + kEuler) * j0 - (2.0 / kPi) * s0;
  const C y1 = (2.0 / kPi) * lg * j1 - 2.0 / (kPi * z) - (1.0 / kPi) * (z / 2.0) * s1;
  const C i(0.0, 1.0);
  return {j0 + i * y0, j1 + i * y1};
}

// Mid range: J_n by Miller's backward recurrence normalized with
// J_0 + 2 sum J_2k = 1, then the Neumann series
//   Y0 = (2/pi)(ln(z/2)+gamma) J0 - (4/pi) sum (-1)^k J_2k / k
//   Y1 = -Y0' = (2/pi)(ln(z/2)+gamma) J1 - 2 J0/(pi z) + (2/pi) sum (-1)^k (J_2k-1 - J_2k+1)/k
std::pair<C, C> hankel_miller(C z) {
  const int top = 2 * static_cast<int>((std::abs(z) + 60.0) / 2.0);
  std::vector<C> J(top + 2, C(0.0));
  J[top] = 1e-30;
  for (int k = top; k >= 1; --k) {
    J[k - 1] = (2.0 * k) / z * J[k] - J[k + 1];
    if (std::abs(J[k - 1]) > 1e250)
      for (int m = k - 1; m <= top + 1; ++m) J[m] *= 1e-250;
  }
  C norm = J[0];
  for (int k = 2; k <= top; k += 2) norm += 2.0 * J[k];
  for (auto& v : J) v /= norm;
  C s0 = 0.0, s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= top + 1; ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    s0 += sign * J[2 * k] / double(k);
    s1 += sign * (J[2 * k - 1] - J[2 * k + 1]) / double(k);
  }
  const C lg = std::log(z / 2.0) + kEuler;
  const C y0 = (2.0 / kPi) * lg * J[0] - (4.0 / kPi) * s0;
  const C y1 = (2.0 / kPi) * lg * J[1] - 2.0 * J[0] / (kPi * z) + (2.0 / kPi) * s1;
  const C i(0.0, 1.0);
  return {J[0] + i * y0, J[1] + i * y1};
}

}  // namespace

std::pair<C, C> bessel_j01_series(C z) {
  const C q = -z * z / 4.0;
  C j0 = 0.0, j1 = 0.0, t = 1.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) t *= q / (double(k) * k);
    j0 += t;
    const C u = t / double(k + 1);
    j1 += u;
    if (k > 4 && std::abs(t) < 1e-18 * std::abs(j0) + 1e-300) break;
  }
  return {j0, j1 * z / 2.0};
}

std::pair<C, C> hankel1_01(C z) {
  if (z == C(0.0)) throw std::domain_error("Hankel function is singular at 0");
  if (z.real() < 0.0 || z.imag() < 0.0) throw std::domain_error("hankel1_01 expects the first quadrant");
  if (z.imag() == 0.0) {
    const double x = z.real();
    return {C(std::cyl_bessel_j(0.0, x), std::cyl_neumann(0.0, x)),
            C(std::cyl_bessel_j(1.0, x), std::cyl_neumann(1.0, x))};
  }
  if (z.real() == 0.0) {
    // H_nu(ix) = (2/pi) i^{-nu-1} K_nu(x)
    const double x = z.imag();
    return {C(0.0, -2.0 / kPi * std::cyl_bessel_k(0.0, x)), C(-2.0 / kPi * std::cyl_bessel_k(1.0, x), 0.0)};
  }
  if (std::abs(z) >= 20.0) return hankel_asymptotic(z);
  if (std::abs(z) >= 8.0) return hankel_miller(z);
  return hankel_series(z);
}

}  // namespace nlh
