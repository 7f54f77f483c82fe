#pragma once

#include "nlh/fields.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlh {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// (A) scalar problems, (A') cylindrically compatible vector problems, (B) the
// general curl-curl class with the (1+|E|)^{p~-p} factor
enum class AssumptionClass { A, A_cyl, B };
enum class NonlinearForm { power, saturated, tabulated };
enum class WeightKind { gaussian, bump, constant, field };

// Nonnegative weight Q(x). gaussian: a exp(-|x|^2 / (2 w^2)); bump: a exp(1 - 1/(1 - |x|^2/w^2))
// inside |x| < w; constant: a; field: sampled values, looked up at the nearest grid point.
struct Weight {
  WeightKind kind = WeightKind::constant;
  double amplitude = 1.0;
  double width = 1.0;
  std::optional<ScalarField> field;
  // dump the field was read from, kept for config echo
  std::string file;

  static Weight constant(double a) { return {WeightKind::constant, a, 1.0, std::nullopt, {}}; }
  static Weight gaussian(double a, double w) { return {WeightKind::gaussian, a, w, std::nullopt, {}}; }
  static Weight bump(double a, double w) { return {WeightKind::bump, a, w, std::nullopt, {}}; }
  static Weight sampled(ScalarField f);

  double at(const Point& x) const;
  RealArray sample(const Grid& grid) const;
  double sup() const;
  Weight scaled(double c) const;
};

// f(x, z) = c(x, |z|) z with
//   power:      c = Q |z|^{k-2}, k = form exponent (defaults to p)
//   saturated:  c = delta Gamma |z|^2 / (1 + P |z|^2)
//   tabulated:  c = Q phi(|z|), phi linear between table nodes, constant beyond
struct NonlinearitySpec {
  AssumptionClass cls = AssumptionClass::A;
  NonlinearForm form = NonlinearForm::power;
  double p = 3.0;
  double p_tilde = 2.0;
  double s = kInf;
  double form_exponent = 0.0;
  Weight Q = Weight::constant(1.0);
  double delta = 1.0;
  Weight Gamma = Weight::constant(1.0);
  Weight P = Weight::constant(1.0);
  std::vector<std::pair<double, double>> table;

  double exponent() const { return form_exponent > 0.0 ? form_exponent : p; }
  // throws std::invalid_argument on inconsistent exponents or class data
  void check() const;
  // the coefficient c given the weights at x
  double coefficient(double q, double gamma, double pw, double t) const;
  Complex eval(const Point& x, Complex z) const;
  Eigen::Vector3cd eval(const Point& x, const Eigen::Vector3cd& E) const;
  // same nonlinearity with every weight multiplied by c
  NonlinearitySpec scaled(double c) const;
};

// Odd truncation: chi(z) = c(|z|) z/|z| with c(t) = t on [0, 1/2], c = 1 from
// t = 3/2 on, and c' = 1 - ramp((t - 1/2)) in between, ramp the exp(-1/t) smoothstep.
class Truncation {
 public:
  double inner() const { return 0.5; }
  double outer() const { return 1.5; }
  double profile(double t) const;
  double derivative(double t) const;
  // chi(t)/t, equal to 1 at t = 0
  double ratio(double t) const;
  Complex operator()(Complex z) const;
};

// exp(-1/t) smoothstep on [0, 1]
double smooth_ramp(double t);

ScalarField apply(const NonlinearitySpec& spec, const ScalarField& u);
VectorField3 apply(const NonlinearitySpec& spec, const VectorField3& E);
ScalarField apply_truncated(const NonlinearitySpec& spec, const Truncation& chi, const ScalarField& u);
VectorField3 apply_truncated(const NonlinearitySpec& spec, const Truncation& chi, const VectorField3& E);

// sup_z |z|^{p-2} (1+|z|)^{p~-p}
double alpha_constant(double p, double p_tilde);

struct AssumptionReport {
  std::size_t samples = 0;
  double growth_ratio = 0.0;
  double lipschitz_ratio = 0.0;
  bool passed = true;
  std::string failure;
  Point witness_x = Point::Zero();
  Eigen::Vector3d witness_z1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d witness_z2 = Eigen::Vector3d::Zero();
};

inline constexpr double kAssumptionSlack = 1e-9;

// Monte-Carlo plus deterministic magnitude grid. Class (A) samples real
// |z| <= 1; class (A') and (B) sample vectors, (B) over all magnitudes.
AssumptionReport validate_assumption(const NonlinearitySpec& spec, int sample_count, std::uint64_t seed = 1);

}  // namespace nlh
