#pragma once

#include <complex>
#include <utility>

namespace nlh {

// H_0^(1)(z), H_1^(1)(z) for z in the closed first quadrant, z != 0.
// Real and imaginary axes go through the standard library; elsewhere the
// large-argument expansion (|z| >= 20) or the ascending series is used.
std::pair<std::complex<double>, std::complex<double>> hankel1_01(std::complex<double> z);

// J_0 and J_1 for complex argument by the ascending series (|z| moderate).
std::pair<std::complex<double>, std::complex<double>> bessel_j01_series(std::complex<double> z);

}  // namespace nlh
