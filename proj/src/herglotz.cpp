#include "nlh/herglotz.hpp"

#include <cmath>
#include <stdexcept>

namespace nlh {

namespace {

double synthesis_prefactor(int n) { return std::pow(2.0 * kPi, -0.5 * n); }

// keep the real part when the density is Hermitian and the imaginary residue
// is at rounding level
ScalarField settle(const Grid& grid, ComplexArray v, bool hermitian, double& ratio) {
  const double top = v.size() ? v.abs().maxCoeff() : 0.0;
  const double im = v.size() ? v.imag().abs().maxCoeff() : 0.0;
  ratio = top > 0.0 ? im / top : 0.0;
  if (hermitian && ratio <= 1e-10) return ScalarField(grid, RealArray(v.real()));
  return ScalarField(grid, std::move(v));
}

bool is_hermitian(const SphereDensity& h, const SphereQuadrature& quad, const Eigen::ArrayXXcd& vals) {
  const double scale = vals.size() ? vals.abs().maxCoeff() : 0.0;
  return hermitian_defect(h, quad) <= 1e-12 * std::max(1.0, scale);
}

}  // namespace

HerglotzWave synthesize_scalar(const SphereDensity& h, const SphereQuadrature& quad, const Grid& grid) {
  if (h.dim() != grid.dim() || quad.dim != grid.dim()) throw std::invalid_argument("dimension mismatch in synthesis");
  if (h.kind() != DensityKind::scalar) throw std::invalid_argument("synthesize_scalar needs a scalar density");
  HerglotzWave w{quad.lambda(), h, quad, evaluate_density(h, quad), std::nullopt, std::nullopt, 0.0};
  const ComplexArray amps = synthesis_prefactor(grid.dim()) * quad.weights.cast<Complex>() * w.node_values.col(0);
  w.scalar = settle(grid, plane_wave_synthesis(grid, quad.nodes, amps, -1), is_hermitian(h, quad, w.node_values),
                    w.imag_ratio);
  return w;
}

HerglotzWave synthesize_vector(const SphereDensity& h, const SphereQuadrature& quad, const Grid& grid) {
  if (grid.dim() != 3 || h.dim() != 3 || quad.dim != 3) throw std::invalid_argument("vector waves need n = 3");
  if (h.kind() != DensityKind::tangential) throw std::invalid_argument("synthesize_vector needs a tangential density");
  HerglotzWave w{quad.lambda(), h, quad, evaluate_density(h, quad), std::nullopt, std::nullopt, 0.0};
  const bool herm = is_hermitian(h, quad, w.node_values);
  std::array<ScalarField, 3> comps{ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid)};
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    const ComplexArray amps = synthesis_prefactor(3) * quad.weights.cast<Complex>() * w.node_values.col(c);
    double r = 0.0;
    comps[c] = settle(grid, plane_wave_synthesis(grid, quad.nodes, amps, -1), herm, r);
    worst = std::max(worst, r);
  }
  w.vector = VectorField3(comps[0], comps[1], comps[2]);
  w.imag_ratio = worst;
  return w;
}

double pde_residual(const HerglotzWave& w) {
  const double lambda = w.lambda;
  double bound = 0.0;
  for (Eigen::Index j = 0; j < w.quad.size(); ++j) {
    const Eigen::Vector3d xi = w.quad.nodes.row(j).transpose();
    const double sym = xi.squaredNorm() - lambda;
    double mag;
    if (w.vector) {
      const Eigen::Vector3cd hv = w.node_values.row(j).transpose();
      const Complex radial = xi[0] * hv[0] + xi[1] * hv[1] + xi[2] * hv[2];
      mag = (sym * hv - radial * xi.cast<Complex>()).norm();
    } else {
      mag = std::abs(sym * w.node_values(j, 0));
    }
    bound += w.quad.weights[j] * mag;
  }
  bound *= synthesis_prefactor(w.quad.dim);
  const double top = w.scalar ? w.scalar->max_abs() : w.vector->magnitude().maxCoeff();
  return top > 0.0 ? bound / top : 0.0;
}

double fd_helmholtz_residual(const ScalarField& u, double lambda, int order) {
  std::vector<double> c;
  if (order == 4)
    c = {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
  else if (order == 6)
    c = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  else
    throw std::invalid_argument("finite-difference order must be 4 or 6");
  const Grid& g = u.grid();
  const int N = g.points_per_dim(), r = int(c.size()) - 1;
  const double h2 = g.spacing() * g.spacing();
  const auto& v = u.values();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    auto ijk = g.unravel(i);
    bool inside = true;
    for (int d = 0; d < g.dim(); ++d) inside = inside && ijk[d] >= r && ijk[d] < N - r;
    if (!inside) continue;
    Complex lap = 0.0;
    Eigen::Index stride = 1;
    for (int d = 0; d < g.dim(); ++d) {
      lap += c[0] * v[i];
      for (int k = 1; k <= r; ++k) lap += c[k] * (v[i + k * stride] + v[i - k * stride]);
      stride *= N;
    }
    worst = std::max(worst, std::abs(-lap / h2 - lambda * v[i]));
  }
  const double top = u.max_abs();
  return top > 0.0 ? worst / top : 0.0;
}

Eigen::Vector3cd far_field_envelope_vector(const SphereDensity& h, const Point& x) {
  const double r = x.norm();
  if (r == 0.0) throw std::invalid_argument("far-field envelope is undefined at the origin");
  const int n = h.dim();
  const double phase = (n - 1) * kPi / 4.0 - std::sqrt(h.lambda()) * r;
  const Eigen::Vector3d xh = x / r;
  return std::polar(1.0, phase) * h.at(xh) + std::polar(1.0, -phase) * h.at(-xh);
}

Complex far_field_envelope(const SphereDensity& h, const Point& x) { return far_field_envelope_vector(h, x)[0]; }

namespace {

std::array<ComplexArray, 3> asymptote_values(const SphereDensity& h, const Grid& grid, double mask) {
  const int n = grid.dim();
  std::array<ComplexArray, 3> out;
  for (auto& a : out) a = ComplexArray::Zero(grid.size());
  const double pre = 1.0 / std::sqrt(2.0 * kPi);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    const double r = x.norm();
    if (r < mask || r == 0.0) continue;
    const Eigen::Vector3cd m = far_field_envelope_vector(h, x);
    const double amp = pre * std::pow(std::sqrt(h.lambda()) / r, 0.5 * (n - 1));
    for (int c = 0; c < h.components(); ++c) out[c][i] = amp * m[c];
  }
  return out;
}

}  // namespace

ScalarField herglotz_asymptote(const SphereDensity& h, const Grid& grid, double mask_radius) {
  return ScalarField(grid, asymptote_values(h, grid, mask_radius)[0]);
}

VectorField3 herglotz_asymptote_vector(const SphereDensity& h, const Grid& grid, double mask_radius) {
  auto v = asymptote_values(h, grid, mask_radius);
  return VectorField3(ScalarField(grid, v[0]), ScalarField(grid, v[1]), ScalarField(grid, v[2]));
}

std::vector<double> verify_far_field(const HerglotzWave& w, const std::vector<double>& radii) {
  const double mask = default_mask_radius(w.lambda);
  std::vector<double> out;
  if (w.scalar) {
    const ScalarField diff = *w.scalar - herglotz_asymptote(w.density, w.grid(), mask);
    for (double R : radii) out.push_back(shell_average(diff, R, mask));
  } else {
    const VectorField3 diff = *w.vector - herglotz_asymptote_vector(w.density, w.grid(), mask);
    for (double R : radii) out.push_back(shell_average(diff, R, mask));
  }
  return out;
}

double agmon_shell_limit(const SphereDensity& h, const SphereQuadrature& quad) {
  const Eigen::ArrayXXcd v = evaluate_density(h, quad);
  return (quad.weights * v.abs2().rowwise().sum()).sum() / kPi;
}

double fit_decay_constant(const HerglotzWave& w, int n_bins) {
  const double norm = cm_norm_estimate(w.density, required_smoothness(w.quad.dim));
  if (norm == 0.0) return 0.0;
  const Grid& g = w.grid();
  const RealArray mag = w.scalar ? RealArray(w.scalar->values().abs()) : w.vector->magnitude();
  double C = 0.0;
  for (const auto& b : radial_profile(mag, g, n_bins, 0.0, g.half_extent())) {
    if (b.empty) continue;
    const double r_out = b.radius + 0.5 * g.half_extent() / n_bins;
    C = std::max(C, b.max_abs * std::pow(1.0 + r_out, 0.5 * (g.dim() - 1)) / norm);
  }
  return C;
}

}  // namespace nlh
