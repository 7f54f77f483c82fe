#include "nlh/farfield.hpp"
#include "nlh/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlh;

namespace {

NonlinearitySpec cubic(double amplitude, AssumptionClass cls = AssumptionClass::A) {
  NonlinearitySpec f;
  f.cls = cls;
  f.p = 3.0;
  f.s = 1.0;
  f.Q = Weight::gaussian(amplitude, 1.5);
  return f;
}

FixedPointProblem planar(double c0, double amplitude) {
  FixedPointProblem prob;
  prob.grid = Grid(2, 16.0, 64);
  prob.lambda = 1.0;
  prob.h = SphereDensity::circle(1.0, ComplexArray::Constant(1, c0));
  prob.f = cubic(amplitude);
  prob.resolvent.lambda = 1.0;
  prob.tol = 1e-11;
  return prob;
}

}  // namespace

TEST(Solver, ZeroNonlinearityReturnsTheWave) {
  FixedPointProblem prob = planar(0.3, 0.0);
  prob.f.Q = Weight::constant(0.0);
  const FixedPointMap map(prob);
  const SolveResult r = picard_solve(map);
  ASSERT_TRUE(r.converged());
  ASSERT_TRUE(r.u);
  EXPECT_LE(r.iterations, 1);
  EXPECT_EQ((*r.u - *map.herglotz()).max_abs(), 0.0);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Solver, PlanarCubicConverges) {
  const FixedPointProblem prob = planar(0.2, 1.0);
  const FixedPointMap map(prob);
  const SolveResult r = picard_solve(map);
  ASSERT_TRUE(r.converged()) << r.message;
  EXPECT_DOUBLE_EQ(r.q, 8.0);
  EXPECT_TRUE(r.u->is_real());
  EXPECT_LT(r.contraction_ratio, 1.0);
  EXPECT_LT(r.fixed_point_residual, 1e-9);
  // |u|u has a kink in its second derivative along the nodal set; its spectral
  // tail limits the residual at this resolution
  EXPECT_LT(r.pde_residual, 1e-5);
  EXPECT_FALSE(r.truncation_active);
  // u = wave + resolve(f(u)) rebuilt from the pieces
  const ScalarField rebuilt = *map.herglotz() + map.resolve(apply(prob.f, *r.u));
  EXPECT_LT((rebuilt - *r.u).max_abs(), 1e-9);
  // updates shrink geometrically
  for (std::size_t k = 2; k < r.updates.size(); ++k) EXPECT_LT(r.updates[k], r.updates[k - 1]);
}

TEST(Solver, InfeasibleExponentsStopBeforeIterating) {
  FixedPointProblem prob;
  prob.grid = Grid(3, 4.0, 16);
  prob.f = cubic(1.0);
  prob.f.s = kInf;
  prob.f.Q = Weight::constant(1.0);
  const SolveResult r = picard_solve(prob);
  EXPECT_EQ(r.status, SolveStatus::infeasible);
  EXPECT_TRUE(r.updates.empty());
  EXPECT_NE(r.message.find("threshold"), std::string::npos);
}

TEST(Solver, QOutsideTheSetIsInfeasible) {
  FixedPointProblem prob = planar(0.2, 1.0);
  prob.q = 3.0;
  EXPECT_EQ(picard_solve(prob).status, SolveStatus::infeasible);
}

TEST(Solver, StrongNonlinearityIsNotReportedConverged) {
  FixedPointProblem prob = planar(2.0, 400.0);
  prob.max_iter = 40;
  const SolveResult r = picard_solve(prob);
  EXPECT_FALSE(r.converged());
  EXPECT_TRUE(r.status == SolveStatus::diverged || r.status == SolveStatus::max_iter);
  if (r.status == SolveStatus::diverged) {
    EXPECT_FALSE(r.message.empty());
  }
}

TEST(Solver, IterationCapGivesMaxIter) {
  FixedPointProblem prob = planar(0.2, 1.0);
  prob.max_iter = 2;
  prob.tol = 1e-30;
  const SolveResult r = picard_solve(prob);
  EXPECT_EQ(r.status, SolveStatus::max_iter);
  EXPECT_EQ(r.iterations, 2);
}

TEST(Solver, KinkedSourceResidualFallsUnderRefinement) {
  FixedPointProblem prob = planar(0.2, 1.0);
  const double coarse = picard_solve(prob).pde_residual;
  prob.grid = Grid(2, 16.0, 128);
  const double fine = picard_solve(prob).pde_residual;
  EXPECT_LT(fine, coarse / 4.0);
}

TEST(Solver, SmoothCubicResidualAtRoundoff) {
  // u^3 is smooth, so operator and resolvent agree to roundoff once the grid resolves it
  FixedPointProblem prob = planar(0.2, 1.0);
  prob.f.p = 4.0;
  prob.grid = Grid(2, 16.0, 128);
  const SolveResult r = picard_solve(prob);
  ASSERT_TRUE(r.converged());
  EXPECT_LT(r.pde_residual, 1e-12);
}

TEST(Solver, FourthOrderCaseOne) {
  FixedPointProblem prob = planar(0.2, 1.0);
  prob.f.p = 4.0;
  prob.tag = ProblemTag::fourth_order;
  prob.fourth = FourthOrderSpec::make(-2.0, 1.0);
  ASSERT_DOUBLE_EQ(prob.fourth->lambda1, 1.0);
  const SolveResult r = picard_solve(prob);
  ASSERT_TRUE(r.converged()) << r.message;
  EXPECT_LT(r.fixed_point_residual, 1e-9);
  EXPECT_LT(r.pde_residual, 1e-6);
  // a nonzero second density has no sphere to live on
  prob.h2 = SphereDensity::circle(2.0, ComplexArray::Constant(1, 0.1));
  EXPECT_THROW(FixedPointMap{prob}, std::invalid_argument);
}

TEST(Solver, CylindricalCurlCurl) {
  FixedPointProblem prob;
  prob.tag = ProblemTag::curlcurl_cyl;
  prob.grid = Grid(3, 8.0, 32);
  prob.lambda = 1.0;
  prob.resolvent.lambda = 1.0;
  prob.f = cubic(1.0, AssumptionClass::A_cyl);
  prob.f.p = 4.0;  // smooth |E|^2 E
  prob.h = hermitian_filter(density_from_function(3, 1.0, 3, DensityKind::tangential, [](const Eigen::Vector3d& w) {
    // odd in w, so imaginary for a real wave
    return Eigen::Vector3cd(Complex(0, -0.05 * w[1]), Complex(0, 0.05 * w[0]), 0.0);
  }));
  prob.tol = 1e-10;
  const SolveResult r = picard_solve(prob);
  ASSERT_TRUE(r.converged()) << r.message;
  ASSERT_TRUE(r.E);
  EXPECT_GT(r.sup_norm, 1e-3);
  EXPECT_GT(r.iterations, 1);
  EXPECT_LT(r.fixed_point_residual, 1e-8);
  EXPECT_LT(cylindrical_field_defect(*r.E), 1e-8);
  for (int c = 0; c < 3; ++c) EXPECT_TRUE((*r.E)[c].is_real());
}

TEST(Solver, ClassMismatchRejected) {
  FixedPointProblem prob = planar(0.2, 1.0);
  prob.f.cls = AssumptionClass::A_cyl;
  EXPECT_THROW(FixedPointMap{prob}, std::invalid_argument);
  prob = planar(0.2, 1.0);
  prob.h = SphereDensity::circle(2.0, ComplexArray::Constant(1, 0.1));
  EXPECT_THROW(FixedPointMap{prob}, std::invalid_argument);
}

TEST(Solver, ContinuityInDensity) {
  const FixedPointProblem prob = planar(0.2, 1.0);
  const SphereDensity h1 = SphereDensity::circle(1.0, ComplexArray::Constant(1, 0.2));
  const SphereDensity h2 = SphereDensity::circle(1.0, ComplexArray::Constant(1, 0.21));
  const ContinuityProbe c = continuity_in_h(prob, h1, h2);
  EXPECT_FALSE(c.degenerate);
  EXPECT_GT(c.ratio, 0.0);
  EXPECT_TRUE(std::isfinite(c.ratio));
  const ContinuityProbe same = continuity_in_h(prob, h1, h1);
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.solution_distance, 0.0);
}

TEST(SolverInvariants, AgmonIdentityRecoversDensityGap) {
  // u_h - R f(u_h) is the Herglotz wave of h, so the shell average of the
  // difference of two such parts tends to the Agmon limit of h1 - h2
  FixedPointProblem prob = planar(0.2, 1.0);
  const SphereDensity h1 = SphereDensity::circle(1.0, ComplexArray::Constant(1, 0.2));
  const SphereDensity h2 = SphereDensity::circle(1.0, ComplexArray::Constant(1, 0.12));
  prob.h = h1;
  const FixedPointMap m1(prob);
  const SolveResult r1 = picard_solve(m1);
  prob.h = h2;
  const FixedPointMap m2(prob);
  const SolveResult r2 = picard_solve(m2);
  ASSERT_TRUE(r1.converged() && r2.converged());
  EXPECT_GT(solution_distance(r1, r2, r1.q), 0.0);
  const ScalarField lin1 = *r1.u - m1.resolve(m1.source(*r1.u));
  const ScalarField lin2 = *r2.u - m2.resolve(m2.source(*r2.u));
  const double R = 0.75 * prob.grid.half_extent();
  const double limit = agmon_shell_limit(h1.plus(h2, -1.0), build_quadrature(2, 1.0, 32));
  EXPECT_NEAR(shell_average(lin1 - lin2, R), limit, 0.1 * limit);
}

TEST(SolverInvariants, HalvingTheDensityHalvesTheSolution) {
  const SolveResult a = picard_solve(planar(0.1, 1.0));
  const SolveResult b = picard_solve(planar(0.05, 1.0));
  ASSERT_TRUE(a.converged() && b.converged());
  EXPECT_GE(a.lq / b.lq, 1.99);
  EXPECT_LE(a.lq / b.lq, 2.2);
  // the contraction ratio shrinks with the density
  EXPECT_LT(b.contraction_ratio, a.contraction_ratio);
}

TEST(SolverInvariants, SymmetryDefect) {
  // radial Q and a constant density: the quarter turn maps the solution onto itself
  const SolveResult inv = picard_solve(planar(0.2, 1.0));
  ASSERT_TRUE(inv.converged());
  const Eigen::Matrix3d quarter = rotation_about_z(kPi / 2);
  EXPECT_LT(symmetry_defect(*inv.u, quarter).defect, 1e-10);
  // first harmonics break it; the odd coefficients are imaginary to keep u real
  FixedPointProblem prob = planar(0.2, 1.0);
  ComplexArray c(3);
  c << Complex(0, 0.05), 0.2, Complex(0, 0.05);
  prob.h = SphereDensity::circle(1.0, c);
  const SolveResult broken = picard_solve(prob);
  ASSERT_TRUE(broken.converged());
  EXPECT_GT(symmetry_defect(*broken.u, quarter).defect, 1e-3);
}

TEST(SolverInvariants, ContinuityRatioStableUnderShrinkingGap) {
  const FixedPointProblem prob = planar(0.2, 1.0);
  const SphereDensity h = SphereDensity::circle(1.0, ComplexArray::Constant(1, 0.2));
  std::vector<double> ratios;
  for (double eps : {0.1, 0.05, 0.025}) ratios.push_back(continuity_in_h(prob, h, h.scaled(1.0 - eps)).ratio);
  for (double r : ratios) {
    EXPECT_LT(r, 2.0 * ratios.front());
    EXPECT_GT(r, 0.5 * ratios.front());
  }
}

TEST(SolverInvariants, LinearContinuityIsTheWaveNorm) {
  FixedPointProblem prob = planar(0.2, 0.0);
  prob.f.Q = Weight::constant(0.0);
  const SphereDensity h1 = SphereDensity::circle(1.0, ComplexArray::Constant(1, 0.2));
  const SphereDensity h2 = SphereDensity::circle(1.0, ComplexArray::Constant(1, 0.1));
  const ContinuityProbe c = continuity_in_h(prob, h1, h2);
  prob.h = h1.plus(h2, -1.0);
  const FixedPointMap map(prob);
  EXPECT_NEAR(c.solution_distance, lq_norm(*map.herglotz(), 8.0), 1e-12 * c.solution_distance);
}
