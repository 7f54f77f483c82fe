#pragma once

#include "nlh/fields.hpp"
#include "nlh/sphere.hpp"

#include <optional>
#include <vector>

namespace nlh {

// F(h dsigma)(x) = (2pi)^{-n/2} sum_j w_j h(xi_j) e^{-i x.xi_j} on a grid.
struct HerglotzWave {
  double lambda = 1.0;
  SphereDensity density;
  SphereQuadrature quad;
  Eigen::ArrayXXcd node_values;
  std::optional<ScalarField> scalar;
  std::optional<VectorField3> vector;
  // max |Im| / max |value| before the real part was taken (0 if kept complex)
  double imag_ratio = 0.0;

  const Grid& grid() const { return scalar ? scalar->grid() : vector->grid(); }
};

HerglotzWave synthesize_scalar(const SphereDensity& h, const SphereQuadrature& quad, const Grid& grid);
HerglotzWave synthesize_vector(const SphereDensity& h, const SphereQuadrature& quad, const Grid& grid);

// Sup-norm bound of (-Delta - lambda) phi (or curl curl phi - lambda phi),
// differentiated under the quadrature sum, divided by max |phi|.
double pde_residual(const HerglotzWave& w);

// Central finite-difference residual of -Delta u - lambda u on interior points,
// normalized by max |u|. order is 4 or 6.
double fd_helmholtz_residual(const ScalarField& u, double lambda, int order = 4);

// m_h(x) for scalar densities; slot-wise for tangential ones
Complex far_field_envelope(const SphereDensity& h, const Point& x);
Eigen::Vector3cd far_field_envelope_vector(const SphereDensity& h, const Point& x);

// Leading term (2pi)^{-1/2} (sqrt(lambda)/|x|)^{(n-1)/2} m_h(x) on the grid,
// zero inside mask_radius.
ScalarField herglotz_asymptote(const SphereDensity& h, const Grid& grid, double mask_radius);
VectorField3 herglotz_asymptote_vector(const SphereDensity& h, const Grid& grid, double mask_radius);

// Half a wavelength; used to mask the origin in shell comparisons.
inline double default_mask_radius(double lambda) { return kPi / std::sqrt(lambda); }

std::vector<double> verify_far_field(const HerglotzWave& w, const std::vector<double>& radii);

// Limit of (1/R) int_{B_R} |F(h dsigma)|^2 as R grows, in the unitary
// convention: (1/pi) int_{S_lambda} |h|^2 dsigma_lambda.
double agmon_shell_limit(const SphereDensity& h, const SphereQuadrature& quad);

// Smallest C with max-envelope(r) <= C * norm * (1 + r)^{(1-n)/2} over the
// radial profile of the wave.
double fit_decay_constant(const HerglotzWave& w, int n_bins = 32);

}  // namespace nlh
