#pragma once

#include "nlh/fields.hpp"
#include "nlh/sphere.hpp"

#include <vector>

namespace nlh {

enum class DeltaScheme { regularized, pv_surface };

struct ResolventConfig {
  double lambda = 1.0;
  // regularization for the single-shot regularized scheme; 0 selects
  // 2 * freq_spacing * sqrt(lambda)
  double epsilon = 0.0;
  DeltaScheme scheme = DeltaScheme::pv_surface;
  // sphere resolution for the surface term; 0 selects one from the box size
  int surface_resolution = 0;
  // radius of a ball holding the sources; 0 selects the whole box
  double source_radius = 0.0;
  // first regularization of the extrapolated limit, as a multiple of lambda
  double richardson_epsilon = 1e-4;
  int richardson_levels = 3;

  double epsilon_for(const Grid& grid) const;
  int surface_resolution_for(const Grid& grid) const;
};

// Zero-padded periodic lattice around a box grid, wide enough that the
// kernel truncated at radius R reproduces the free-space convolution on the box
// for sources inside the ball of radius `source_radius`.
class PaddedLattice {
 public:
  PaddedLattice(const Grid& box, double source_radius);

  const Grid& box() const { return box_; }
  int side() const { return side_; }
  double period() const { return side_ * box_.spacing(); }
  double truncation_radius() const { return radius_; }
  double source_radius() const { return source_radius_; }
  Eigen::Index size() const { return size_; }

  // embed box samples and take the unscaled DFT
  ComplexArray forward(const ComplexArray& box_values) const;
  // scaled inverse DFT, restricted to the box
  ComplexArray inverse(ComplexArray spectrum) const;
  Point frequency(Eigen::Index k) const;
  RealArray frequency_norms() const;

 private:
  Grid box_;
  double source_radius_;
  double radius_;
  int side_;
  Eigen::Index size_;
};

// Fourier transform (non-unitary) of the outgoing kernel e^{i kappa|z|}/(4 pi|z|)
// (n = 3) or (i/4) H_0(kappa|z|) (n = 2), truncated to |z| < R.
Complex truncated_multiplier(int n, Complex kappa, double R, double s);
ComplexArray truncated_multiplier(const PaddedLattice& lat, Complex kappa);

class HelmholtzResolvent {
 public:
  HelmholtzResolvent(const Grid& grid, const ResolventConfig& cfg);

  const ResolventConfig& config() const { return cfg_; }
  const PaddedLattice& lattice() const { return lattice_; }

  // Re R(lambda + i0) f
  ScalarField real(const ScalarField& f) const;
  // R(lambda + i0) f by the configured scheme
  ScalarField complex(const ScalarField& f) const;
  // R(lambda + i eps) f
  ScalarField regularized(const ScalarField& f, double eps) const;
  // Richardson limit eps -> 0 of the regularized scheme
  ScalarField regularized_limit(const ScalarField& f) const;
  // i pi/(2 sqrt(lambda)) (2pi)^{-n/2} int_S fhat(xi) e^{i x.xi} dsigma
  ScalarField surface_term(const ScalarField& f) const;
  // (-Delta - lambda) applied to the padded representation of real(f)
  ScalarField operator_image(const ScalarField& f) const;
  // gradient of R(lambda + i eps) f
  std::vector<ScalarField> regularized_gradient(const ScalarField& f, double eps) const;

 private:
  void check_input(const ScalarField& f) const;
  Grid grid_;
  ResolventConfig cfg_;
  PaddedLattice lattice_;
  RealArray real_multiplier_;
};

ScalarField helmholtz_resolvent_complex(const ScalarField& f, const ResolventConfig& cfg);
ScalarField helmholtz_resolvent_real(const ScalarField& f, const ResolventConfig& cfg);

// Spectral (-Delta - lambda) g on the box lattice.
ScalarField apply_helmholtz(const ScalarField& g, double lambda);

enum class FourthOrderCase { i, ii };

// Delta^2 - beta Delta + alpha = (-Delta - lambda1)(-Delta - lambda2)
struct FourthOrderSpec {
  double alpha = 0.0;
  double beta = 0.0;
  FourthOrderCase tag = FourthOrderCase::i;
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  static FourthOrderSpec make(double alpha, double beta);
};

class FourthOrderResolvent {
 public:
  FourthOrderResolvent(const Grid& grid, const FourthOrderSpec& spec, const ResolventConfig& cfg);
  const FourthOrderSpec& spec() const { return spec_; }
  ScalarField apply(const ScalarField& f) const;
  // (Delta^2 - beta Delta + alpha) applied to the padded representation of apply(f)
  ScalarField operator_image(const ScalarField& f) const;

 private:
  Grid grid_;
  FourthOrderSpec spec_;
  PaddedLattice lattice_;
  RealArray multiplier_;
};

ScalarField fourth_order_resolvent(const ScalarField& f, const FourthOrderSpec& spec, const ResolventConfig& cfg);
// Spectral (Delta^2 - beta Delta + alpha) g on the box lattice.
ScalarField apply_fourth_order(const ScalarField& g, const FourthOrderSpec& spec);

struct HelmholtzSplit {
  VectorField3 curl_free;
  VectorField3 div_free;
};

HelmholtzSplit helmholtz_decompose(const VectorField3& G);

class CurlCurlResolvent {
 public:
  CurlCurlResolvent(const Grid& grid, const ResolventConfig& cfg);
  VectorField3 apply(const VectorField3& G) const;
  // (curl curl - lambda) applied to the padded representation of apply(G)
  VectorField3 operator_image(const VectorField3& G) const;

 private:
  std::array<ComplexArray, 3> localized_spectrum(const VectorField3& G) const;
  Grid grid_;
  ResolventConfig cfg_;
  PaddedLattice lattice_;
  RealArray real_multiplier_;
};

VectorField3 curlcurl_resolvent(const VectorField3& G, const ResolventConfig& cfg);
// Spectral curl curl E - lambda E on the box lattice.
VectorField3 apply_curlcurl(const VectorField3& E, double lambda);

struct RuizVegaRow {
  double epsilon = 0.0;
  std::vector<double> shell_norms;
  double sup_norm = 0.0;
  std::vector<double> gradient_shell_norms;
  double gradient_sup = 0.0;
};

std::vector<RuizVegaRow> ruiz_vega_diagnostic(const ScalarField& f, const ResolventConfig& cfg,
                                              const std::vector<double>& eps_list,
                                              const std::vector<double>& R_list);

}  // namespace nlh
