#include "nlh/nonlinearity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace nlh;

namespace {

// sup over a log-spaced z grid, refined around the best node
double brute_alpha(double p, double pt) {
  auto fn = [&](double z) { return (p == 2.0 ? 1.0 : std::pow(z, p - 2.0)) * std::pow(1.0 + z, pt - p); };
  double best = 0.0, arg = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double z = std::pow(10.0, -8.0 + 16.0 * i / 20000.0);
    if (fn(z) > best) best = fn(z), arg = z;
  }
  for (double z = arg * 0.999; z <= arg * 1.001; z += arg * 1e-7) best = std::max(best, fn(z));
  return best;
}

NonlinearitySpec cubic(double amplitude = 1.0) {
  NonlinearitySpec f;
  f.p = 3.0;
  f.s = 1.0;
  f.Q = Weight::gaussian(amplitude, 1.5);
  return f;
}

}  // namespace

TEST(AlphaConstant, MatchesBruteForceSupremum) {
  for (double p : {2.5, 3.0, 4.0, 6.0})
    for (double pt : {0.0, 1.0, 1.5})
      EXPECT_NEAR(alpha_constant(p, pt), brute_alpha(p, pt), 1e-6 * alpha_constant(p, pt)) << p << " " << pt;
}

TEST(AlphaConstant, DegenerateCornersEqualOne) {
  // p = 2: sup (1+z)^{pt-2} at z = 0; pt = 2: (z/(1+z))^{p-2} -> 1
  EXPECT_DOUBLE_EQ(alpha_constant(2.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(alpha_constant(3.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(alpha_constant(2.0, 2.0), 1.0);
  EXPECT_THROW(alpha_constant(1.5, 1.0), std::invalid_argument);
  EXPECT_THROW(alpha_constant(3.0, 2.5), std::invalid_argument);
}

TEST(SmoothRamp, MonotoneAndSymmetric) {
  EXPECT_EQ(smooth_ramp(-1.0), 0.0);
  EXPECT_EQ(smooth_ramp(2.0), 1.0);
  EXPECT_DOUBLE_EQ(smooth_ramp(0.5), 0.5);
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double t = i / 100.0;
    EXPECT_GE(smooth_ramp(t), prev);
    EXPECT_NEAR(smooth_ramp(t) + smooth_ramp(1.0 - t), 1.0, 1e-15);
    prev = smooth_ramp(t);
  }
}

TEST(Truncation, ShapeAndOddness) {
  const Truncation chi;
  for (int i = 0; i <= 400; ++i) {
    const double t = 4.0 * i / 400.0;
    const double c = chi.profile(t);
    EXPECT_LE(c, std::min(t, 1.0) + 1e-15) << t;
    EXPECT_GE(c, std::min(t, 0.5) - 1e-15) << t;
    EXPECT_DOUBLE_EQ(chi.profile(-t), -c);
    if (t <= 0.5) EXPECT_DOUBLE_EQ(c, t);
    if (t >= chi.outer()) EXPECT_DOUBLE_EQ(c, 1.0);
  }
  // the profile integrates its derivative
  const double d = 1e-6;
  for (double t : {0.6, 0.9, 1.2, 1.45}) {
    EXPECT_NEAR((chi.profile(t + d) - chi.profile(t - d)) / (2 * d), chi.derivative(t), 1e-6) << t;
  }
  // chi(z) keeps the phase
  const Complex z = std::polar(3.0, 0.7);
  EXPECT_NEAR(std::arg(chi(z)), 0.7, 1e-15);
  EXPECT_NEAR(std::abs(chi(z)), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(chi.ratio(0.0), 1.0);
}

TEST(Nonlinearity, PowerFormAndOddness) {
  const NonlinearitySpec f = cubic(2.0);
  const Point x(0.3, -0.2, 0.1);
  const double q = 2.0 * std::exp(-x.squaredNorm() / (2 * 1.5 * 1.5));
  for (double t : {-0.8, -0.1, 0.0, 0.25, 0.9}) {
    EXPECT_NEAR(f.eval(x, Complex(t)).real(), q * std::abs(t) * t, 1e-15);
    EXPECT_DOUBLE_EQ(f.eval(x, Complex(-t)).real(), -f.eval(x, Complex(t)).real());
  }
  // f(x, e^{i phi} z) = e^{i phi} f(x, z)
  const Complex z(0.3, 0.4), ph = std::polar(1.0, 1.1);
  EXPECT_LT(std::abs(f.eval(x, ph * z) - ph * f.eval(x, z)), 1e-15);
}

TEST(Nonlinearity, TruncatedMapBoundedByWeight) {
  const Grid g(2, 4.0, 32);
  const ScalarField u = ScalarField::sample(g, [](const Point& x) { return 5.0 * std::sin(x[0]) * std::cos(2 * x[1]); });
  const NonlinearitySpec f = cubic();
  const ScalarField v = apply_truncated(f, Truncation{}, u);
  EXPECT_TRUE(v.is_real());
  const RealArray Q = f.Q.sample(g);
  for (Eigen::Index i = 0; i < g.size(); ++i) EXPECT_LE(std::abs(v[i]), Q[i] + 1e-15);
  // small inputs pass through chi unchanged
  const ScalarField small = 0.1 * u;
  EXPECT_LT((apply_truncated(f, Truncation{}, small) - apply(f, small)).max_abs(), 1e-16);
}

TEST(Nonlinearity, SaturatedForm) {
  NonlinearitySpec f;
  f.cls = AssumptionClass::B;
  f.form = NonlinearForm::saturated;
  f.p = 4.0;
  f.p_tilde = 2.0;
  f.s = 2.0;
  f.delta = 0.5;
  f.Gamma = Weight::constant(2.0);
  f.P = Weight::constant(3.0);
  f.check();
  const Eigen::Vector3cd E(0.2, Complex(0.0, 0.1), -0.3);
  const double t = E.norm();
  const Eigen::Vector3cd want = (0.5 * 2.0 * t * t / (1.0 + 3.0 * t * t)) * E;
  EXPECT_LT((f.eval(Point::Zero(), E) - want).norm(), 1e-16);
  const Grid g(3, 2.0, 8);
  const VectorField3 F(ScalarField(g, RealArray(RealArray::Constant(g.size(), 0.2))), ScalarField::zeros(g),
                       ScalarField::zeros(g));
  EXPECT_THROW(apply_truncated(f, Truncation{}, F), std::invalid_argument);
}

TEST(Nonlinearity, CheckRejectsInconsistentData) {
  NonlinearitySpec f;
  f.p = 1.5;
  EXPECT_THROW(f.check(), std::invalid_argument);
  f = NonlinearitySpec{};
  f.s = 0.5;
  EXPECT_THROW(f.check(), std::invalid_argument);
  f = NonlinearitySpec{};
  f.cls = AssumptionClass::B;
  f.s = 3.0;
  EXPECT_THROW(f.check(), std::invalid_argument);
  f = NonlinearitySpec{};
  f.form = NonlinearForm::tabulated;
  f.table = {{0.0, 1.0}};
  EXPECT_THROW(f.check(), std::invalid_argument);
  f.table = {{0.5, 1.0}, {0.2, 2.0}};
  EXPECT_THROW(f.check(), std::invalid_argument);
  EXPECT_NO_THROW(cubic().check());
}

TEST(Assumption, CubicPasses) {
  const AssumptionReport rep = validate_assumption(cubic(), 2000, 7);
  EXPECT_TRUE(rep.passed) << rep.failure;
  EXPECT_LE(rep.growth_ratio, 1.0 + kAssumptionSlack);
  EXPECT_LE(rep.lipschitz_ratio, 1.0 + kAssumptionSlack);
  EXPECT_GT(rep.samples, 2000u);
}

TEST(Assumption, QuarticDeclaredCubicFailsLipschitz) {
  // |z|^3 z has Lipschitz constant 4 t^3 near |z| = t, above Q (2t)^{p-2} = 2t Q at t = 1
  NonlinearitySpec bad = cubic();
  bad.form_exponent = 4.0;
  const AssumptionReport w = validate_assumption(bad, 500, 3);
  ASSERT_FALSE(w.passed);
  EXPECT_EQ(w.failure, "Lipschitz bound");
  const double q = bad.Q.at(w.witness_x);
  const double t1 = w.witness_z1.norm(), t2 = w.witness_z2.norm();
  const Complex f1 = bad.eval(w.witness_x, Complex(w.witness_z1[0]));
  const Complex f2 = bad.eval(w.witness_x, Complex(w.witness_z2[0]));
  EXPECT_GT(std::abs(f1 - f2), q * (t1 + t2) * (w.witness_z1 - w.witness_z2).norm());
}

TEST(Assumption, SubcubicDeclaredQuarticFailsGrowth) {
  // |z|^{1/2} z exceeds |z|^3 on small |z|
  NonlinearitySpec bad = cubic();
  bad.p = 4.0;
  bad.form_exponent = 2.5;
  const AssumptionReport w = validate_assumption(bad, 500, 3);
  ASSERT_FALSE(w.passed);
  EXPECT_EQ(w.failure, "growth bound");
  const double t1 = w.witness_z1.norm();
  EXPECT_GT(std::abs(bad.eval(w.witness_x, Complex(w.witness_z1[0]))), bad.Q.at(w.witness_x) * std::pow(t1, 3.0));
}

TEST(Assumption, LipschitzTwoPointRandom) {
  // |f(z1) - f(z2)| <= Q (|z1| + |z2|)^{p-2} |z1 - z2| for the cubic, checked independently
  const NonlinearitySpec f = cubic();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 5000; ++k) {
    const Point x(2 * u(rng), 2 * u(rng), 2 * u(rng));
    const Complex z1(u(rng), u(rng)), z2(u(rng), u(rng));
    const double lhs = std::abs(f.eval(x, z1) - f.eval(x, z2));
    const double rhs = f.Q.at(x) * (std::abs(z1) + std::abs(z2)) * std::abs(z1 - z2);
    EXPECT_LE(lhs, rhs * (1 + 1e-12) + 1e-300);
  }
}

TEST(Assumption, ClassBAllMagnitudes) {
  NonlinearitySpec f;
  f.cls = AssumptionClass::B;
  f.form = NonlinearForm::saturated;
  f.p = 4.0;
  f.p_tilde = 2.0;
  f.s = 2.0;
  f.Q = Weight::constant(1.0);
  f.Gamma = Weight::constant(1.0);
  f.P = Weight::constant(1.0);
  f.delta = 0.25;
  const AssumptionReport rep = validate_assumption(f, 1000, 11);
  EXPECT_TRUE(rep.passed) << rep.failure << " " << rep.growth_ratio << " " << rep.lipschitz_ratio;
}

TEST(Weight, KindsAndScaling) {
  EXPECT_DOUBLE_EQ(Weight::gaussian(2.0, 1.0).at(Point(1, 0, 0)), 2.0 * std::exp(-0.5));
  EXPECT_DOUBLE_EQ(Weight::bump(1.0, 1.0).at(Point::Zero()), 1.0);
  EXPECT_DOUBLE_EQ(Weight::bump(1.0, 1.0).at(Point(1.0, 0, 0)), 0.0);
  EXPECT_DOUBLE_EQ(Weight::constant(3.0).scaled(0.5).sup(), 1.5);
  const Grid g(2, 2.0, 8);
  const ScalarField w = ScalarField::sample(g, [](const Point& x) { return 1.0 + x[0] * x[0]; });
  const Weight s = Weight::sampled(w);
  EXPECT_DOUBLE_EQ(s.at(g.point(10)), w[10].real());
  EXPECT_DOUBLE_EQ(s.at(Point(5.0, 0, 0)), 0.0);
  EXPECT_THROW(Weight::sampled(-1.0 * w), std::invalid_argument);
}
