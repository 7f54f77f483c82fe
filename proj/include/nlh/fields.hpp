#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nlh {

using Complex = std::complex<double>;
using ComplexArray = Eigen::ArrayXcd;
using RealArray = Eigen::ArrayXd;
using Point = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

// Uniform sampling of the cube [-L, L]^n. Point j sits at -L + j*h, h = 2L/N.
// Linear index runs with the first coordinate fastest.
class Grid {
 public:
  Grid(int dim, double half_extent, int points_per_dim);

  int dim() const { return dim_; }
  double half_extent() const { return half_extent_; }
  int points_per_dim() const { return n_; }
  double spacing() const { return 2.0 * half_extent_ / n_; }
  double freq_spacing() const { return kPi / half_extent_; }
  double cell_volume() const;
  Eigen::Index size() const { return size_; }

  double coordinate(int i) const { return -half_extent_ + i * spacing(); }
  // signed lattice index in DFT order: 0..N/2-1, then -N/2..-1
  int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
  double frequency(int i) const { return wavenumber(i) * freq_spacing(); }

  std::array<int, 3> unravel(Eigen::Index idx) const;
  Eigen::Index ravel(int i0, int i1, int i2 = 0) const {
    return i0 + Eigen::Index(n_) * (i1 + Eigen::Index(n_) * i2);
  }
  Point point(Eigen::Index idx) const;
  Point frequency_vector(Eigen::Index idx) const;

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && half_extent_ == o.half_extent_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int dim_;
  double half_extent_;
  int n_;
  Eigen::Index size_;
};

inline constexpr double kRealityTolerance = 1e-12;

// Sampled scalar field. Values are immutable after construction; the reality
// flag is decided once from the data.
class ScalarField {
 public:
  ScalarField(const Grid& grid, ComplexArray values);
  ScalarField(const Grid& grid, const RealArray& values);

  static ScalarField zeros(const Grid& grid);
  template <class F>
  static ScalarField sample(const Grid& grid, F&& fn) {
    ComplexArray v(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = Complex(fn(grid.point(i)));
    return ScalarField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  const ComplexArray& values() const { return values_; }
  bool is_real() const { return real_; }
  Complex operator[](Eigen::Index i) const { return values_[i]; }

  ScalarField real_part() const;
  double max_abs() const;

 private:
  Grid grid_;
  ComplexArray values_;
  bool real_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(Complex c, const ScalarField& a);
ScalarField operator*(double c, const ScalarField& a);

class VectorField3 {
 public:
  VectorField3(ScalarField x, ScalarField y, ScalarField z);
  static VectorField3 zeros(const Grid& grid);

  const Grid& grid() const { return c_[0].grid(); }
  const ScalarField& operator[](int i) const { return c_[i]; }
  bool is_real() const { return c_[0].is_real() && c_[1].is_real() && c_[2].is_real(); }
  VectorField3 real_part() const;
  // pointwise Euclidean magnitude
  RealArray magnitude() const;

 private:
  std::array<ScalarField, 3> c_;
};

VectorField3 operator+(const VectorField3& a, const VectorField3& b);
VectorField3 operator-(const VectorField3& a, const VectorField3& b);
VectorField3 operator*(double c, const VectorField3& a);

// Coefficients on the lattice k*pi/L in DFT order, unitary normalization.
class SpectralField {
 public:
  SpectralField(const Grid& grid, ComplexArray coeffs);
  const Grid& grid() const { return grid_; }
  const ComplexArray& coeffs() const { return coeffs_; }

 private:
  Grid grid_;
  ComplexArray coeffs_;
};

SpectralField forward_transform(const ScalarField& f);
ScalarField inverse_transform(const SpectralField& F);

// l2 norm of the coefficients with the lattice cell weight (pi/L)^n
double spectral_l2_norm(const SpectralField& F);

double lq_norm(const ScalarField& f, double q);
double lq_norm(const VectorField3& f, double q);
double lq_norm(const RealArray& magnitudes, const Grid& grid, double q);

// (1/R) * integral over the ball B_R of |f|^2; points with |x| < mask are skipped.
double shell_average(const ScalarField& f, double R, double mask_radius = 0.0);
double shell_average(const VectorField3& f, double R, double mask_radius = 0.0);

struct RadialBin {
  double radius = 0.0;
  double mean_abs = 0.0;
  double max_abs = 0.0;
  Eigen::Index count = 0;
  bool empty = true;
};

std::vector<RadialBin> radial_profile(const ScalarField& f, int n_bins);
// bins restricted to [r_lo, r_hi]
std::vector<RadialBin> radial_profile(const ScalarField& f, int n_bins, double r_lo, double r_hi);
std::vector<RadialBin> radial_profile(const RealArray& magnitudes, const Grid& grid, int n_bins,
                                      double r_lo, double r_hi);

// Fraction of the L2 mass sitting within L/8 (sup-distance) of the box faces.
double boundary_mass_fraction(const ScalarField& f);
double boundary_mass_fraction(const VectorField3& f);
inline constexpr double kBoundaryWarn = 0.01;
inline constexpr double kBoundaryFail = 0.10;

// Periodic spectral calculus on the box lattice.
std::array<ScalarField, 3> spectral_gradient(const ScalarField& f);
ScalarField spectral_divergence(const VectorField3& G);
VectorField3 spectral_curl(const VectorField3& G);
ScalarField spectral_laplacian(const ScalarField& f);

// Discrete inner product h^n * sum conj(a) b.
Complex inner_product(const ScalarField& a, const ScalarField& b);
Complex inner_product(const VectorField3& a, const VectorField3& b);

}  // namespace nlh
