#pragma once

#include "nlh/solver.hpp"
#include "nlh/sphere.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace nlh {

// A(w) = lambda^{(n-3)/4} sqrt(pi/2) e^{i(n-3)pi/4} (F(-sqrt(lambda) w) + i (2 sqrt(lambda)/pi) h(sqrt(lambda) w))
// with F the unitary transform of the nonlinear source. The pattern is
// u_inf(x) = Re(e^{-i sqrt(lambda)|x|} A(x/|x|)), and u ~ |x|^{(1-n)/2} u_inf.
struct FarFieldPattern {
  int dim = 3;
  double lambda = 1.0;
  // F(-sqrt(lambda) w) as a harmonic expansion in w
  SphereDensity source = SphereDensity::circle(1.0, ComplexArray::Zero(1));
  std::optional<SphereDensity> density;
  // samples at the quadrature directions
  NodeMatrix directions;
  ComplexArray amplitude;
  ComplexArray source_part;
  ComplexArray density_part;

  Complex amplitude_at(const Eigen::Vector3d& w) const;
  double value(const Point& x) const;
};

// Pattern of a solution of the Helmholtz problem; the source is f(., u).
FarFieldPattern predicted_far_field(const ScalarField& u, const FixedPointProblem& prob);
// Pattern from an explicit source and density.
FarFieldPattern far_field_from_source(const ScalarField& source, const std::optional<SphereDensity>& h,
                                      double lambda);

// |x|^{(1-n)/2} u_inf(x) on the grid, zero inside mask_radius
ScalarField far_field_asymptote(const FarFieldPattern& pat, const Grid& grid, double mask_radius);

// shell_average(u - asymptote, R, mask) for every R
std::vector<double> verify_solution_far_field(const ScalarField& u, const FarFieldPattern& pat,
                                              const std::vector<double>& radii, double mask_radius = 0.0);

struct DecayFit {
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;
  int points = 0;
};

// Least squares of log(max |u|) against log(1 + r) over the upper envelope of
// the windowed radial profile.
DecayFit decay_fit(const ScalarField& u, double r_lo, double r_hi, int n_bins = 16);
DecayFit decay_fit(const RealArray& magnitudes, const Grid& grid, double r_lo, double r_hi, int n_bins = 16);

struct SymmetryDefect {
  double defect = 0.0;
  // the same measurement on a radial reference of wavenumber k_ref
  double floor = 0.0;
  bool lattice_exact = false;
};

// ||u - u o gamma||_2 / ||u||_2 over the ball |x| <= L - 2h. Signed
// permutations map lattice points exactly; other rotations use tricubic
// (bicubic in 2D) interpolation.
SymmetryDefect symmetry_defect(const ScalarField& u, const Eigen::Matrix3d& gamma, double k_ref = 1.0);

Eigen::Matrix3d rotation_about_z(double angle);
bool is_signed_permutation(const Eigen::Matrix3d& gamma, int dim);

// Relative size of the radial and axial components together with the defect of
// E(Rx) = R E(x) for the quarter turn R about the x3 axis.
double cylindrical_field_defect(const VectorField3& E);

// ||f(., u)/u||_{(n+1)/2} over the points with u != 0
double potential_norm(const NonlinearitySpec& f, const ScalarField& u);

}  // namespace nlh
