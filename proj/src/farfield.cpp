#include "nlh/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlh {

Complex FarFieldPattern::amplitude_at(const Eigen::Vector3d& w) const {
  const double k = std::sqrt(lambda);
  const Complex pre = std::pow(lambda, (dim - 3) / 4.0) * std::sqrt(kPi / 2.0) * std::polar(1.0, (dim - 3) * kPi / 4.0);
  Complex a = source.at(w)[0];
  if (density) a += Complex(0.0, 2.0 * k / kPi) * density->at(w)[0];
  return pre * a;
}

double FarFieldPattern::value(const Point& x) const {
  const double r = x.norm();
  if (r == 0.0) throw std::invalid_argument("far-field pattern is undefined at the origin");
  return (std::polar(1.0, -std::sqrt(lambda) * r) * amplitude_at(x / r)).real();
}

namespace {

// smallest radius holding every point where |g| exceeds 1e-12 of its peak
double support_radius(const ScalarField& g) {
  const double top = g.max_abs();
  double r = 0.0;
  if (top == 0.0) return 0.0;
  for (Eigen::Index i = 0; i < g.grid().size(); ++i)
    if (std::abs(g[i]) > 1e-12 * top) r = std::max(r, g.grid().point(i).norm());
  return r;
}

}  // namespace

FarFieldPattern far_field_from_source(const ScalarField& source, const std::optional<SphereDensity>& h,
                                      double lambda) {
  const Grid& g = source.grid();
  const int n = g.dim();
  const double k = std::sqrt(lambda);
  if (k >= kPi / g.spacing()) throw std::invalid_argument("sphere radius beyond the grid Nyquist frequency");
  if (h && (h->dim() != n || h->kind() != DensityKind::scalar))
    throw std::invalid_argument("far-field density must be a scalar density of the grid dimension");
  const int degree = std::min(48, int(std::ceil(k * support_radius(source))) + 8);
  const double scale = g.cell_volume() / std::pow(2.0 * kPi, 0.5 * n);
  FarFieldPattern pat;
  pat.dim = n;
  pat.lambda = lambda;
  pat.density = h;
  // F evaluated at -sqrt(lambda) w, one direction at a time
  pat.source = density_from_function(n, lambda, degree, DensityKind::scalar, [&](const Eigen::Vector3d& w) {
    NodeMatrix xi(1, 3);
    xi.row(0) = -k * w.transpose();
    return Eigen::Vector3cd(scale * plane_wave_analysis(g, source.values(), xi)[0], 0.0, 0.0);
  });
  const SphereQuadrature quad = build_quadrature(n, 1.0, 2 * degree + 6);
  pat.directions = quad.nodes;
  pat.amplitude.resize(quad.size());
  pat.source_part.resize(quad.size());
  pat.density_part = ComplexArray::Zero(quad.size());
  for (Eigen::Index i = 0; i < quad.size(); ++i) {
    const Eigen::Vector3d w = quad.direction(i);
    pat.source_part[i] = pat.source.at(w)[0];
    if (h) pat.density_part[i] = h->at(w)[0];
    pat.amplitude[i] = pat.amplitude_at(w);
  }
  return pat;
}

FarFieldPattern predicted_far_field(const ScalarField& u, const FixedPointProblem& prob) {
  if (prob.tag != ProblemTag::nlh && prob.tag != ProblemTag::nlh_radial)
    throw std::invalid_argument("the far-field formula covers the Helmholtz problem");
  return far_field_from_source(apply(prob.f, u), prob.h, prob.lambda);
}

ScalarField far_field_asymptote(const FarFieldPattern& pat, const Grid& grid, double mask_radius) {
  RealArray out = RealArray::Zero(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    const double r = x.norm();
    if (r < mask_radius || r == 0.0) continue;
    out[i] = std::pow(r, 0.5 * (1 - grid.dim())) * pat.value(x);
  }
  return ScalarField(grid, out);
}

std::vector<double> verify_solution_far_field(const ScalarField& u, const FarFieldPattern& pat,
                                              const std::vector<double>& radii, double mask_radius) {
  const double mask = mask_radius > 0.0 ? mask_radius : default_mask_radius(pat.lambda);
  const ScalarField diff = u - far_field_asymptote(pat, u.grid(), mask);
  std::vector<double> out;
  for (double R : radii) out.push_back(shell_average(diff, R, mask));
  return out;
}

DecayFit decay_fit(const RealArray& mag, const Grid& grid, double r_lo, double r_hi, int n_bins) {
  if (!(r_hi > r_lo) || r_lo < 0.0 || r_hi > grid.half_extent() + 1e-12)
    throw std::invalid_argument("decay window must lie inside [0, L]");
  if (n_bins < 2) throw std::invalid_argument("decay fit needs at least two bins");
  // per bin: the largest magnitude and the radius where it sits
  std::vector<double> best(n_bins, 0.0), where(n_bins, 0.0);
  const double width = (r_hi - r_lo) / n_bins;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double r = grid.point(i).norm();
    if (r < r_lo || r > r_hi) continue;
    const int b = std::min(n_bins - 1, int((r - r_lo) / width));
    if (mag[i] > best[b]) best[b] = mag[i], where[b] = r;
  }
  std::vector<std::pair<double, double>> pts;
  for (int b = 0; b < n_bins; ++b)
    if (best[b] > 0.0) pts.emplace_back(std::log1p(where[b]), std::log(best[b]));
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 2) throw std::invalid_argument("decay window holds fewer than two populated bins");
  // upper hull: the crests of an oscillating profile
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
      // keep nearly collinear crests
      if (cross > 1e-12 * std::max(1.0, std::abs(p.second)))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  const double m = double(hull.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : hull) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  DecayFit fit;
  fit.points = int(hull.size());
  const double det = m * sxx - sx * sx;
  fit.exponent = det > 0.0 ? (m * sxy - sx * sy) / det : 0.0;
  const double icept = (sy - fit.exponent * sx) / m;
  fit.constant = std::exp(icept);
  double ss = 0.0;
  for (const auto& [x, y] : hull) ss += std::pow(y - icept - fit.exponent * x, 2);
  fit.residual = std::sqrt(ss / m);
  return fit;
}

DecayFit decay_fit(const ScalarField& u, double r_lo, double r_hi, int n_bins) {
  return decay_fit(RealArray(u.values().abs()), u.grid(), r_lo, r_hi, n_bins);
}

Eigen::Matrix3d rotation_about_z(double angle) {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  return R;
}

bool is_signed_permutation(const Eigen::Matrix3d& gamma, int dim) {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double v = gamma(i, j);
      if (std::abs(v) > 1e-14 && std::abs(std::abs(v) - 1.0) > 1e-14) return false;
    }
  return true;
}

namespace {

// cubic Lagrange weights for offset t in [0,1) on nodes -1, 0, 1, 2
void cubic_weights(double t, double w[4]) {
  w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
  w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
  w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

Complex sample_at(const ScalarField& u, const Point& y, bool exact) {
  const Grid& g = u.grid();
  const int n = g.dim(), N = g.points_per_dim();
  const double h = g.spacing();
  if (exact) {
    int idx[3] = {0, 0, 0};
    for (int d = 0; d < n; ++d) idx[d] = int(std::lround((y[d] + g.half_extent()) / h));
    return u[g.ravel(idx[0], idx[1], idx[2])];
  }
  int base[3] = {0, 0, 0};
  double w[3][4] = {{0, 1, 0, 0}, {0, 1, 0, 0}, {0, 1, 0, 0}};
  for (int d = 0; d < n; ++d) {
    const double s = (y[d] + g.half_extent()) / h;
    base[d] = int(std::floor(s));
    cubic_weights(s - base[d], w[d]);
    base[d] = std::clamp(base[d], 1, N - 3);
  }
  Complex acc = 0.0;
  const int r2 = n == 3 ? 4 : 1;
  for (int c = 0; c < r2; ++c)
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        const double wt = w[0][a] * w[1][b] * (n == 3 ? w[2][c] : 1.0);
        acc += wt * u[g.ravel(base[0] - 1 + a, base[1] - 1 + b, n == 3 ? base[2] - 1 + c : 0)];
      }
  return acc;
}

double raw_defect(const ScalarField& u, const Eigen::Matrix3d& gamma, bool exact) {
  const Grid& g = u.grid();
  const double R = g.half_extent() - 2.0 * g.spacing();
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const Point x = g.point(i);
    if (x.norm() > R) continue;
    const Point y = gamma * x;
    num += std::norm(u[i] - sample_at(u, y, exact));
    den += std::norm(u[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

SymmetryDefect symmetry_defect(const ScalarField& u, const Eigen::Matrix3d& gamma, double k_ref) {
  const int n = u.grid().dim();
  const Eigen::Matrix3d top = gamma.topLeftCorner(3, 3);
  if ((top.transpose() * top - Eigen::Matrix3d::Identity()).norm() > 1e-10)
    throw std::invalid_argument("symmetry map must be orthogonal");
  if (n == 2 && (std::abs(gamma(2, 2) - 1.0) > 1e-12 || gamma(0, 2) != 0.0 || gamma(1, 2) != 0.0))
    throw std::invalid_argument("planar symmetry map must fix the third axis");
  SymmetryDefect out;
  out.lattice_exact = is_signed_permutation(gamma, n);
  out.defect = raw_defect(u, gamma, out.lattice_exact);
  const ScalarField ref = ScalarField::sample(u.grid(), [&](const Point& x) {
    const double kr = k_ref * x.norm();
    if (n == 2) return std::cyl_bessel_j(0.0, kr);
    return kr < 1e-8 ? 1.0 - kr * kr / 6.0 : std::sin(kr) / kr;
  });
  out.floor = raw_defect(ref, gamma, out.lattice_exact);
  return out;
}

double cylindrical_field_defect(const VectorField3& E) {
  const Grid& g = E.grid();
  const int N = g.points_per_dim();
  const double R = g.half_extent() - 2.0 * g.spacing();
  double total = 0.0, radial = 0.0, axial = 0.0, turn = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const Point x = g.point(i);
    if (x.norm() > R) continue;
    const Complex ex = E[0][i], ey = E[1][i], ez = E[2][i];
    total += std::norm(ex) + std::norm(ey) + std::norm(ez);
    const double rho = std::hypot(x[0], x[1]);
    if (rho > 0.0) radial += std::norm((x[0] * ex + x[1] * ey) / rho);
    axial += std::norm(ez);
    // quarter turn (x, y) -> (-y, x) on lattice indices
    const auto ijk = g.unravel(i);
    const Eigen::Index j = g.ravel((N - ijk[1]) % N, ijk[0], ijk[2]);
    turn += std::norm(E[0][j] + ey) + std::norm(E[1][j] - ex) + std::norm(E[2][j] - ez);
  }
  if (total == 0.0) return 0.0;
  return std::sqrt(std::max({radial, axial, turn}) / total);
}

double potential_norm(const NonlinearitySpec& f, const ScalarField& u) {
  const Grid& g = u.grid();
  RealArray w(g.size());
  const bool sat = f.form == NonlinearForm::saturated;
  const RealArray q = sat ? RealArray::Zero(g.size()) : f.Q.sample(g);
  const RealArray ga = sat ? f.Gamma.sample(g) : RealArray::Zero(g.size());
  const RealArray pw = sat ? f.P.sample(g) : RealArray::Zero(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) w[i] = std::abs(f.coefficient(q[i], ga[i], pw[i], std::abs(u[i])));
  return lq_norm(w, g, 0.5 * (g.dim() + 1));
}

}  // namespace nlh
