#include "nlh/nonlinearity.hpp"

#include "nlh/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nlh {

Weight Weight::sampled(ScalarField f) {
  if (!f.is_real()) throw std::invalid_argument("weight field must be real");
  if ((f.values().real() < 0.0).any()) throw std::invalid_argument("weight field must be nonnegative");
  return {WeightKind::field, 1.0, 1.0, std::move(f), {}};
}

double Weight::at(const Point& x) const {
  switch (kind) {
    case WeightKind::constant:
      return amplitude;
    case WeightKind::gaussian:
      return amplitude * std::exp(-x.squaredNorm() / (2.0 * width * width));
    case WeightKind::bump: {
      const double r2 = x.squaredNorm() / (width * width);
      return r2 < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
    }
    case WeightKind::field: {
      const Grid& g = field->grid();
      std::array<int, 3> idx{0, 0, 0};
      for (int d = 0; d < g.dim(); ++d) {
        const int i = int(std::lround((x[d] + g.half_extent()) / g.spacing()));
        if (i < 0 || i >= g.points_per_dim()) return 0.0;
        idx[d] = i;
      }
      return amplitude * (*field)[g.ravel(idx[0], idx[1], idx[2])].real();
    }
  }
  return 0.0;
}

RealArray Weight::sample(const Grid& grid) const {
  if (kind == WeightKind::field) {
    if (field->grid() == grid) return amplitude * field->values().real();
  }
  RealArray out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) out[i] = at(grid.point(i));
  return out;
}

double Weight::sup() const {
  if (kind == WeightKind::field) return amplitude * field->values().real().maxCoeff();
  return std::abs(amplitude);
}

Weight Weight::scaled(double c) const {
  Weight w = *this;
  w.amplitude *= c;
  return w;
}

void NonlinearitySpec::check() const {
  if (!(p >= 2.0)) throw std::invalid_argument("p must be at least 2");
  if (form == NonlinearForm::power && !(exponent() >= 2.0))
    throw std::invalid_argument("power-form exponent must be at least 2");
  if (!(s >= 1.0)) throw std::invalid_argument("s must lie in [1, inf]");
  if (cls == AssumptionClass::B) {
    if (!(p_tilde <= 2.0)) throw std::invalid_argument("class (B) needs p_tilde <= 2");
    if (!(s <= 2.0)) throw std::invalid_argument("class (B) needs 1 <= s <= 2");
  }
  if (form == NonlinearForm::tabulated) {
    if (table.size() < 2) throw std::invalid_argument("tabulated form needs at least two nodes");
    for (size_t i = 1; i < table.size(); ++i)
      if (!(table[i].first > table[i - 1].first)) throw std::invalid_argument("table nodes must increase");
  }
}

double NonlinearitySpec::coefficient(double q, double gamma, double pw, double t) const {
  switch (form) {
    case NonlinearForm::power: {
      const double k = exponent();
      if (k == 2.0) return q;
      return t == 0.0 ? 0.0 : q * std::pow(t, k - 2.0);
    }
    case NonlinearForm::saturated:
      return delta * gamma * t * t / (1.0 + pw * t * t);
    case NonlinearForm::tabulated: {
      if (t <= table.front().first) return q * table.front().second;
      if (t >= table.back().first) return q * table.back().second;
      auto it = std::upper_bound(table.begin(), table.end(), t,
                                 [](double v, const std::pair<double, double>& e) { return v < e.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (t - lo.first) / (hi.first - lo.first);
      return q * ((1.0 - w) * lo.second + w * hi.second);
    }
  }
  return 0.0;
}

Complex NonlinearitySpec::eval(const Point& x, Complex z) const {
  return coefficient(Q.at(x), Gamma.at(x), P.at(x), std::abs(z)) * z;
}

Eigen::Vector3cd NonlinearitySpec::eval(const Point& x, const Eigen::Vector3cd& E) const {
  return coefficient(Q.at(x), Gamma.at(x), P.at(x), E.norm()) * E;
}

NonlinearitySpec NonlinearitySpec::scaled(double c) const {
  NonlinearitySpec out = *this;
  out.Q = Q.scaled(c);
  if (form == NonlinearForm::saturated) out.delta *= c;
  return out;
}

double smooth_ramp(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double Truncation::derivative(double t) const {
  t = std::abs(t);
  return 1.0 - smooth_ramp(t - 0.5);
}

double Truncation::profile(double t) const {
  const double a = std::abs(t);
  double c;
  if (a <= 0.5) {
    c = a;
  } else if (a >= 1.5) {
    c = 1.0;
  } else {
    static const auto rule = gauss_legendre(24);
    const double half = 0.5 * (a - 0.5), mid = 0.5 * (a + 0.5);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < rule.first.size(); ++k) acc += rule.second[k] * derivative(mid + half * rule.first[k]);
    c = std::min({0.5 + half * acc, 1.0, a});
  }
  return t < 0.0 ? -c : c;
}

double Truncation::ratio(double t) const {
  const double a = std::abs(t);
  return a <= 0.5 ? 1.0 : profile(a) / a;
}

Complex Truncation::operator()(Complex z) const { return ratio(std::abs(z)) * z; }

namespace {

struct Sampled {
  RealArray q, gamma, pw;
};

Sampled sample_weights(const NonlinearitySpec& spec, const Grid& g) {
  Sampled s;
  const bool sat = spec.form == NonlinearForm::saturated;
  s.q = sat ? RealArray::Zero(g.size()) : spec.Q.sample(g);
  s.gamma = sat ? spec.Gamma.sample(g) : RealArray::Zero(g.size());
  s.pw = sat ? spec.P.sample(g) : RealArray::Zero(g.size());
  return s;
}

ScalarField scalar_map(const NonlinearitySpec& spec, const ScalarField& u, const Truncation* chi) {
  spec.check();
  const Grid& g = u.grid();
  const Sampled w = sample_weights(spec, g);
  ComplexArray out(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    Complex z = u[i];
    if (chi) z = (*chi)(z);
    out[i] = spec.coefficient(w.q[i], w.gamma[i], w.pw[i], std::abs(z)) * z;
  }
  if (u.is_real()) return ScalarField(g, RealArray(out.real()));
  return ScalarField(g, std::move(out));
}

VectorField3 vector_map(const NonlinearitySpec& spec, const VectorField3& E, const Truncation* chi) {
  spec.check();
  const Grid& g = E.grid();
  const Sampled w = sample_weights(spec, g);
  std::array<ComplexArray, 3> out;
  for (auto& a : out) a.resize(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const Complex e[3] = {E[0][i], E[1][i], E[2][i]};
    const double mag = std::sqrt(std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]));
    // chi(|E|) E/|E|, the 0/0 at E = 0 resolved by chi(t)/t -> 1
    const double shrink = chi ? chi->ratio(mag) : 1.0;
    const double c = spec.coefficient(w.q[i], w.gamma[i], w.pw[i], shrink * mag) * shrink;
    for (int k = 0; k < 3; ++k) out[k][i] = c * e[k];
  }
  auto make = [&](int k) {
    if (E[k].is_real()) return ScalarField(g, RealArray(out[k].real()));
    return ScalarField(g, out[k]);
  };
  return VectorField3(make(0), make(1), make(2));
}

}  // namespace

ScalarField apply(const NonlinearitySpec& spec, const ScalarField& u) { return scalar_map(spec, u, nullptr); }

VectorField3 apply(const NonlinearitySpec& spec, const VectorField3& E) { return vector_map(spec, E, nullptr); }

ScalarField apply_truncated(const NonlinearitySpec& spec, const Truncation& chi, const ScalarField& u) {
  if (spec.cls == AssumptionClass::B) throw std::invalid_argument("class (B) problems are not truncated");
  return scalar_map(spec, u, &chi);
}

VectorField3 apply_truncated(const NonlinearitySpec& spec, const Truncation& chi, const VectorField3& E) {
  if (spec.cls == AssumptionClass::B) throw std::invalid_argument("class (B) problems are not truncated");
  return vector_map(spec, E, &chi);
}

double alpha_constant(double p, double p_tilde) {
  if (p < 2.0 || p_tilde > 2.0) throw std::invalid_argument("alpha constant needs p_tilde <= 2 <= p");
  // 0^0 = 1
  auto pw = [](double b, double e) { return e == 0.0 ? 1.0 : std::pow(b, e); };
  return pw(p - 2.0, p - 2.0) * pw(2.0 - p_tilde, 2.0 - p_tilde) / pw(p - p_tilde, p - p_tilde);
}

namespace {

double bound_factor(const NonlinearitySpec& spec, double t) {
  double b = std::pow(t, spec.p - 2.0);
  if (spec.p == 2.0) b = 1.0;
  if (spec.cls == AssumptionClass::B) b *= std::pow(1.0 + t, spec.p_tilde - spec.p);
  return b;
}

}  // namespace

AssumptionReport validate_assumption(const NonlinearitySpec& spec, int sample_count, std::uint64_t seed) {
  spec.check();
  AssumptionReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), zero_one(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const bool vector = spec.cls != AssumptionClass::A;

  // spatial samples: origin plus random points where the weights live
  std::vector<Point> xs{Point::Zero()};
  double reach = 3.0;
  if (spec.Q.kind == WeightKind::gaussian || spec.Q.kind == WeightKind::bump) reach = 3.0 * spec.Q.width;
  if (spec.Q.kind == WeightKind::field) reach = spec.Q.field->grid().half_extent();
  const int dim = spec.Q.kind == WeightKind::field ? spec.Q.field->grid().dim() : 3;
  for (int k = 0; k < 16; ++k) {
    Point x = Point::Zero();
    for (int d = 0; d < dim; ++d) x[d] = reach * unit(rng);
    xs.push_back(x);
  }

  auto draw_magnitude = [&]() {
    if (spec.cls == AssumptionClass::B) return std::pow(10.0, -3.0 + 6.0 * zero_one(rng));
    return zero_one(rng);
  };
  auto draw = [&](double t) {
    Eigen::Vector3d z = Eigen::Vector3d::Zero();
    if (vector) {
      z = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized() * t;
    } else {
      z[0] = (zero_one(rng) < 0.5 ? -t : t);
    }
    return z;
  };

  auto record = [&](const Point& x, const Eigen::Vector3d& z1, const Eigen::Vector3d& z2) {
    ++rep.samples;
    const double q = spec.Q.at(x);
    const Eigen::Vector3cd f1 = spec.eval(x, Eigen::Vector3cd(z1.cast<Complex>()));
    const Eigen::Vector3cd f2 = spec.eval(x, Eigen::Vector3cd(z2.cast<Complex>()));
    auto ratio = [](double num, double den) {
      if (num <= 1e-300) return 0.0;
      return den > 0.0 ? num / den : kInf;
    };
    const double t1 = z1.norm(), t2 = z2.norm();
    const double g = ratio(f1.norm(), q * t1 * bound_factor(spec, t1));
    const double l = ratio((f1 - f2).norm(), q * bound_factor(spec, t1 + t2) * (z1 - z2).norm());
    if (g > rep.growth_ratio) rep.growth_ratio = g;
    if (l > rep.lipschitz_ratio) rep.lipschitz_ratio = l;
    if ((g > 1.0 + kAssumptionSlack || l > 1.0 + kAssumptionSlack) && rep.passed) {
      rep.passed = false;
      rep.failure = g > 1.0 + kAssumptionSlack ? "growth bound" : "Lipschitz bound";
      rep.witness_x = x;
      rep.witness_z1 = z1;
      rep.witness_z2 = z2;
    }
  };

  // deterministic magnitude grid, including nearly coincident pairs
  const int grid_pts = 24;
  std::vector<double> ts;
  for (int i = 1; i <= grid_pts; ++i) {
    const double u = double(i) / grid_pts;
    ts.push_back(spec.cls == AssumptionClass::B ? std::pow(10.0, -3.0 + 6.0 * u) : u);
  }
  for (const Point& x : xs)
    for (double a : ts) {
      const Eigen::Vector3d e = Eigen::Vector3d::UnitX();
      record(x, a * e, (a * (1.0 - 1e-6)) * e);
      record(x, a * e, -a * e);
      for (double b : ts) record(x, a * e, b * e);
    }
  for (int k = 0; k < sample_count; ++k) {
    const Point& x = xs[k % xs.size()];
    record(x, draw(draw_magnitude()), draw(draw_magnitude()));
  }
  return rep;
}

}  // namespace nlh
