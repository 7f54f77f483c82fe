#pragma once

#include "nlh/fields.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace nlh {

using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Product rule on the sphere of radius sqrt(lambda). For n = 3 the nodes are
// ordered polar-major: index = polar * n_azimuth + azimuth.
struct SphereQuadrature {
  int dim = 3;
  double radius = 1.0;
  int n_polar = 1;
  int n_azimuth = 0;
  NodeMatrix nodes;
  RealArray weights;
  std::vector<Eigen::Index> antipode;

  Eigen::Index size() const { return nodes.rows(); }
  Eigen::Vector3d direction(Eigen::Index i) const { return nodes.row(i).transpose() / radius; }
  double lambda() const { return radius * radius; }
};

SphereQuadrature build_quadrature(int n, double lambda, int resolution);

// Gauss-Legendre rule on [-1, 1], nodes ascending.
std::pair<RealArray, RealArray> gauss_legendre(int count);

enum class DensityKind { scalar, tangential };

// Smooth density on the sphere of radius sqrt(lambda), held as a truncated
// harmonic expansion. n = 2: c_k for k = -K..K at slot k + K.
// n = 3: c_lm at slot l*l + l + m. Tangential densities store the Cartesian
// components of an ambient field g; the density is (I - w w^T) g(w).
class SphereDensity {
 public:
  static SphereDensity circle(double lambda, ComplexArray coeffs);
  static SphereDensity harmonics(double lambda, int l_max, ComplexArray coeffs);
  static SphereDensity tangential(double lambda, int l_max, std::array<ComplexArray, 3> ambient);

  int dim() const { return dim_; }
  DensityKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  int degree() const { return degree_; }
  int components() const { return kind_ == DensityKind::tangential ? 3 : 1; }
  const std::vector<ComplexArray>& coefficients() const { return coeffs_; }

  int declared_m = -1;
  double declared_delta = 0.0;

  SphereDensity scaled(Complex a) const;
  SphereDensity plus(const SphereDensity& o, Complex a = 1.0) const;

  // Value at a unit direction; scalar densities fill slot 0 only.
  Eigen::Vector3cd at(const Eigen::Vector3d& w) const;

 private:
  SphereDensity(int dim, DensityKind kind, double lambda, int degree, std::vector<ComplexArray> c);
  int dim_;
  DensityKind kind_;
  double lambda_;
  int degree_;
  std::vector<ComplexArray> coeffs_;
};

// Harmonic expansion of a closed-form density by quadrature projection. The
// function receives a unit direction; scalar kinds return slot 0.
using DensityFunction = std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>;
SphereDensity density_from_function(int n, double lambda, int degree, DensityKind kind,
                                    const DensityFunction& fn);

// Node values, one column per component.
Eigen::ArrayXXcd evaluate_density(const SphereDensity& h, const SphereQuadrature& quad);

// Project coefficients onto h(-xi) = conj h(xi).
SphereDensity hermitian_filter(const SphereDensity& h);
double hermitian_defect(const SphereDensity& h, const SphereQuadrature& quad);
double tangential_defect(const SphereDensity& h, const SphereQuadrature& quad);

// m = floor((n-1)/2) + 1
inline int required_smoothness(int n) { return (n - 1) / 2 + 1; }

double cm_norm_estimate(const SphereDensity& h, int m);

struct CylSymmetryTag {
  bool flag = false;
  double residual = 0.0;
};

// Distance of a tangential density from the form Z(w3) (-w2, w1, 0), relative
// to its sup norm, measured at the nodes of `quad`.
double cylindrical_defect(const SphereDensity& h, const SphereQuadrature& quad);
inline constexpr double kCylTolerance = 1e-10;

std::pair<SphereDensity, CylSymmetryTag> project_cylindrical(const SphereDensity& h);

// Continuum unitary transform of grid samples at the quadrature nodes.
ComplexArray restrict_spectrum_to_sphere(const ScalarField& f, const SphereQuadrature& quad);
ComplexArray restrict_spectrum_to_sphere(const SpectralField& F, const SphereQuadrature& quad);

// sum_j a_j exp(sign * i x.xi_j) at every grid point x
ComplexArray plane_wave_synthesis(const Grid& grid, const NodeMatrix& freqs, const ComplexArray& amps,
                                  int sign);
// sum_x v(x) exp(-i x.xi_j) for every row xi_j
ComplexArray plane_wave_analysis(const Grid& grid, const ComplexArray& values, const NodeMatrix& freqs);

// Orthonormal complex spherical harmonics Y_lm, Condon-Shortley phase. T may be
// an AutoDiff scalar. Returns (re, im) of sum_lm c_lm Y_lm(x, y, z), with
// (x, y, z) on the unit sphere.
template <class T>
std::pair<T, T> harmonic_sum(const ComplexArray& c, int l_max, const T& x, const T& y, const T& z) {
  using std::sqrt;
  T re = T(0.0) * x, im = T(0.0) * x;
  // powers (x + iy)^m
  std::vector<T> wr(l_max + 1, x), wi(l_max + 1, x);
  wr[0] = T(1.0) + T(0.0) * x;
  wi[0] = T(0.0) * x;
  for (int m = 1; m <= l_max; ++m) {
    wr[m] = T(wr[m - 1] * x - wi[m - 1] * y);
    wi[m] = T(wr[m - 1] * y + wi[m - 1] * x);
  }
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= l_max; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    T p_prev = T(0.0) * x;
    T p = T(pmm) + T(0.0) * x;
    for (int l = m; l <= l_max; ++l) {
      if (l == m + 1) {
        T next = T(z * std::sqrt(2.0 * m + 3.0) * pmm);
        p_prev = p;
        p = next;
      } else if (l > m + 1) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * (l - 1) * (l - 1) - 1.0));
        T next = T(a * (z * p - b * p_prev));
        p_prev = p;
        p = next;
      }
      const Complex cp = c[l * l + l + m];
      if (m == 0) {
        re += T(cp.real() * p);
        im += T(cp.imag() * p);
      } else {
        // c_lm W + (-1)^m c_l,-m conj(W)
        const Complex cm = (m & 1 ? -1.0 : 1.0) * c[l * l + l - m];
        const double ar = cp.real() + cm.real(), ai = cp.imag() + cm.imag();
        const double br = cp.real() - cm.real(), bi = cp.imag() - cm.imag();
        // (cp) W + (cm) conj W = (cp+cm) Re W + i (cp-cm) Im W
        re += T(p * (ar * wr[m] - bi * wi[m]));
        im += T(p * (ai * wr[m] + br * wi[m]));
      }
    }
  }
  return {re, im};
}

inline Eigen::Index harmonic_count(int l_max) { return Eigen::Index(l_max + 1) * (l_max + 1); }

}  // namespace nlh
