#pragma once

#include "nlh/exponents.hpp"
#include "nlh/herglotz.hpp"
#include "nlh/nonlinearity.hpp"
#include "nlh/resolvent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlh {

struct FixedPointProblem {
  ProblemTag tag = ProblemTag::nlh;
  Grid grid{3, 12.0, 48};
  double lambda = 1.0;
  std::optional<FourthOrderSpec> fourth;
  // density on the sphere of radius sqrt(lambda) (sqrt(lambda1) for fourth order)
  std::optional<SphereDensity> h;
  // second density, fourth-order case (ii) only
  std::optional<SphereDensity> h2;
  NonlinearitySpec f;
  Truncation chi;
  ResolventConfig resolvent;
  // quadrature resolution for the Herglotz synthesis; 0 follows the resolvent default
  int quad_resolution = 0;
  // L^q exponent; 0 picks the default of the exponent calculus
  double q = 0.0;
  // monitored ball radius in L^q, 0 disables the check
  double rho = 0.0;
  int max_iter = 200;
  double tol = 1e-10;

  bool is_vector() const { return tag == ProblemTag::curlcurl_cyl || tag == ProblemTag::curlcurl_general; }
  bool truncated() const { return tag != ProblemTag::curlcurl_general; }
  ExponentProblem exponent_problem() const;
};

// Caches the Herglotz part and the resolvent so that T can be applied repeatedly.
class FixedPointMap {
 public:
  explicit FixedPointMap(const FixedPointProblem& prob);

  const FixedPointProblem& problem() const { return prob_; }
  const std::optional<ScalarField>& herglotz() const { return wave_; }
  const std::optional<VectorField3>& herglotz_vector() const { return wave_vec_; }

  // f(., chi(u)) or f(., E) as used inside T
  ScalarField source(const ScalarField& u) const;
  VectorField3 source(const VectorField3& E) const;
  // resolvent applied to a source
  ScalarField resolve(const ScalarField& g) const;
  VectorField3 resolve(const VectorField3& G) const;
  // linear operator applied to the padded representation of resolve(g)
  ScalarField operator_image(const ScalarField& g) const;
  VectorField3 operator_image(const VectorField3& G) const;

  ScalarField apply(const ScalarField& u) const;
  VectorField3 apply(const VectorField3& E) const;

 private:
  FixedPointProblem prob_;
  std::optional<ScalarField> wave_;
  std::optional<VectorField3> wave_vec_;
  std::optional<HelmholtzResolvent> helmholtz_;
  std::optional<FourthOrderResolvent> fourth_;
  std::optional<CurlCurlResolvent> curlcurl_;
};

ScalarField apply_T_nlh(const ScalarField& u, const FixedPointProblem& prob);
ScalarField apply_T_fourth(const ScalarField& u, const FixedPointProblem& prob);
VectorField3 apply_T_curlcurl(const VectorField3& E, const FixedPointProblem& prob);

enum class SolveStatus { converged, max_iter, diverged, infeasible };
std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::max_iter;
  std::optional<ScalarField> u;
  std::optional<VectorField3> E;
  double q = 0.0;
  int iterations = 0;
  // ||u_{k+1} - u_k||_q, k = 0, 1, ...
  std::vector<double> updates;
  std::vector<double> ratios;
  // largest recorded ratio, an empirical lower bound on the Lipschitz constant of T
  double contraction_ratio = 0.0;
  double fixed_point_residual = 0.0;
  double pde_residual = 0.0;
  double sup_norm = 0.0;
  double lq = 0.0;
  bool truncation_active = false;
  double boundary_mass = 0.0;
  std::vector<std::string> warnings;
  std::string message;

  bool converged() const { return status == SolveStatus::converged; }
};

SolveResult picard_solve(const FixedPointProblem& prob);
SolveResult picard_solve(const FixedPointMap& map);

struct ContinuityProbe {
  double ratio = 0.0;
  double solution_distance = 0.0;
  double density_distance = 0.0;
  bool degenerate = false;
};

// ||u_{h1} - u_{h2}||_q / ||h1 - h2||_{C^m}
ContinuityProbe continuity_in_h(const FixedPointProblem& prob, const SphereDensity& h1, const SphereDensity& h2);
ContinuityProbe continuity_in_h(const SolveResult& a, const SolveResult& b, const SphereDensity& h1,
                                const SphereDensity& h2);

// L^q distance between two solutions of the same kind
double solution_distance(const SolveResult& a, const SolveResult& b, double q);

}  // namespace nlh
