#include "nlh/resolvent.hpp"

#include "nlh/fft.hpp"
#include "nlh/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlh {

double ResolventConfig::epsilon_for(const Grid& grid) const {
  return epsilon > 0.0 ? epsilon : 2.0 * grid.freq_spacing() * std::sqrt(lambda);
}

int ResolventConfig::surface_resolution_for(const Grid& grid) const {
  if (surface_resolution > 0) return surface_resolution;
  // enough nodes to resolve e^{i x.xi} across the box diagonal
  const double reach = std::sqrt(lambda) * std::sqrt(double(grid.dim())) * grid.half_extent();
  const int m = int(std::ceil(reach)) + 24;
  return m + (m % 2);
}

PaddedLattice::PaddedLattice(const Grid& box, double source_radius) : box_(box) {
  const double diag = std::sqrt(double(box.dim())) * box.half_extent();
  source_radius_ = source_radius > 0.0 ? std::min(source_radius, diag) : diag;
  radius_ = diag + source_radius_;
  // a periodic image must stay farther than R from every box point
  const double needed = box.half_extent() + radius_ + source_radius_;
  side_ = next_fft_size(int(std::ceil(needed / box.spacing())) + 1);
  size_ = 1;
  for (int d = 0; d < box.dim(); ++d) size_ *= side_;
}

namespace {

// visit box points with their padded index
template <class F>
void for_each_box_point(const PaddedLattice& lat, F&& fn) {
  const Grid& g = lat.box();
  const int N = g.points_per_dim(), P = lat.side(), off = (P - N) / 2;
  const int n2 = g.dim() == 3 ? N : 1;
  Eigen::Index i = 0;
  for (int i2 = 0; i2 < n2; ++i2)
    for (int i1 = 0; i1 < N; ++i1) {
      Eigen::Index base = (g.dim() == 3 ? Eigen::Index(i2 + off) * P * P : 0) + Eigen::Index(i1 + off) * P + off;
      for (int i0 = 0; i0 < N; ++i0) fn(i++, base + i0);
    }
}

}  // namespace

ComplexArray PaddedLattice::forward(const ComplexArray& v) const {
  if (v.size() != box_.size()) throw std::invalid_argument("padded transform: size mismatch");
  ComplexArray buf = ComplexArray::Zero(size_);
  for_each_box_point(*this, [&](Eigen::Index i, Eigen::Index p) { buf[p] = v[i]; });
  fft_cube(buf, box_.dim(), side_, false);
  return buf;
}

ComplexArray PaddedLattice::inverse(ComplexArray spec) const {
  fft_cube(spec, box_.dim(), side_, true);
  ComplexArray out(box_.size());
  const double scale = 1.0 / double(size_);
  for_each_box_point(*this, [&](Eigen::Index i, Eigen::Index p) { out[i] = spec[p] * scale; });
  return out;
}

Point PaddedLattice::frequency(Eigen::Index k) const {
  Point xi = Point::Zero();
  const double dxi = 2.0 * kPi / period();
  for (int d = 0; d < box_.dim(); ++d) {
    const int j = int(k % side_);
    k /= side_;
    xi[d] = (j < side_ / 2 ? j : j - side_) * dxi;
  }
  return xi;
}

RealArray PaddedLattice::frequency_norms() const {
  RealArray s(size_);
  for (Eigen::Index k = 0; k < size_; ++k) s[k] = frequency(k).norm();
  return s;
}

namespace {

using C = Complex;

// int_0^R e^{iar} dr, stable near a = 0
C segment_integral(C a, double R) {
  const C w = a * R / 2.0;
  const C sinc = std::abs(w) < 1e-4 ? C(1.0) - w * w / 6.0 + w * w * w * w / 120.0 : std::sin(w) / w;
  return R * std::exp(C(0.0, 1.0) * w) * sinc;
}

C multiplier_3d(C kappa, double R, double s) {
  const C i(0.0, 1.0);
  if (s == 0.0) return std::exp(i * kappa * R) * (R / (i * kappa) + 1.0 / (kappa * kappa)) - 1.0 / (kappa * kappa);
  return (segment_integral(kappa + s, R) - segment_integral(kappa - s, R)) / (2.0 * i * s);
}

struct Hankel2d {
  C h0, h1;
};

C multiplier_2d_direct(C kappa, double R, double s, const Hankel2d& hk) {
  const C i(0.0, 1.0);
  const double j0 = std::cyl_bessel_j(0.0, s * R);
  const double j1 = s == 0.0 ? 0.0 : std::cyl_bessel_j(1.0, s * R);
  const C num = R * (s * hk.h0 * j1 - kappa * hk.h1 * j0) - 2.0 * i / kPi;
  return (i * kPi / 2.0) * num / (s * s - kappa * kappa);
}

C multiplier_2d(C kappa, double R, double s, const Hankel2d& hk) {
  if (kappa.imag() == 0.0) {
    // removable singularity at s = kappa: cubic interpolation across it
    const double k = kappa.real(), d = 2e-3 / R;
    if (std::abs(s - k) < d) {
      const double xs[4] = {k - 2 * d, k - d, k + d, k + 2 * d};
      C acc = 0.0;
      for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
          if (b != a) w *= (s - xs[b]) / (xs[a] - xs[b]);
        acc += w * multiplier_2d_direct(kappa, R, xs[a], hk);
      }
      return acc;
    }
  }
  return multiplier_2d_direct(kappa, R, s, hk);
}

}  // namespace

Complex truncated_multiplier(int n, Complex kappa, double R, double s) {
  if (n == 3) return multiplier_3d(kappa, R, s);
  auto [h0, h1] = hankel1_01(kappa * R);
  return multiplier_2d(kappa, R, s, {h0, h1});
}

ComplexArray truncated_multiplier(const PaddedLattice& lat, Complex kappa) {
  const int n = lat.box().dim();
  const double R = lat.truncation_radius();
  ComplexArray m(lat.size());
  if (n == 3) {
    for (Eigen::Index k = 0; k < lat.size(); ++k) m[k] = multiplier_3d(kappa, R, lat.frequency(k).norm());
    return m;
  }
  auto [h0, h1] = hankel1_01(kappa * R);
  const Hankel2d hk{h0, h1};
  for (Eigen::Index k = 0; k < lat.size(); ++k) m[k] = multiplier_2d(kappa, R, lat.frequency(k).norm(), hk);
  return m;
}

namespace {

C kappa_of(double lambda, double eps) { return std::sqrt(C(lambda, eps)); }

void check_source(const ScalarField& f, const PaddedLattice& lat) {
  const double frac = boundary_mass_fraction(f);
  if (frac > kBoundaryFail)
    throw std::runtime_error("source carries " + std::to_string(frac) +
                             " of its mass near the box boundary; enlarge the box");
  const double top = f.max_abs();
  if (top == 0.0) return;
  const Grid& g = f.grid();
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (g.point(i).norm() > lat.source_radius() && std::abs(f[i]) > 1e-10 * top)
      throw std::runtime_error("source extends beyond the configured source radius");
}

ScalarField finish(const Grid& g, ComplexArray v, bool real) {
  if (real) return ScalarField(g, RealArray(v.real()));
  return ScalarField(g, std::move(v));
}

}  // namespace

HelmholtzResolvent::HelmholtzResolvent(const Grid& grid, const ResolventConfig& cfg)
    : grid_(grid), cfg_(cfg), lattice_(grid, cfg.source_radius) {
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (std::sqrt(cfg.lambda) >= kPi / grid.spacing())
    throw std::invalid_argument("sphere radius sqrt(lambda) beyond the grid Nyquist frequency");
  real_multiplier_ = truncated_multiplier(lattice_, kappa_of(cfg.lambda, 0.0)).real();
}

void HelmholtzResolvent::check_input(const ScalarField& f) const {
  if (f.grid() != grid_) throw std::invalid_argument("resolvent applied on a different grid");
  check_source(f, lattice_);
}

ScalarField HelmholtzResolvent::real(const ScalarField& f) const {
  check_input(f);
  ComplexArray s = lattice_.forward(f.values());
  s *= real_multiplier_.cast<Complex>();
  return finish(grid_, lattice_.inverse(std::move(s)), f.is_real());
}

ScalarField HelmholtzResolvent::regularized(const ScalarField& f, double eps) const {
  check_input(f);
  if (!(eps >= 0.0)) throw std::invalid_argument("regularization must be nonnegative");
  ComplexArray s = lattice_.forward(f.values());
  s *= truncated_multiplier(lattice_, kappa_of(cfg_.lambda, eps));
  return ScalarField(grid_, lattice_.inverse(std::move(s)));
}

ScalarField HelmholtzResolvent::regularized_limit(const ScalarField& f) const {
  const int levels = std::max(1, cfg_.richardson_levels);
  std::vector<ComplexArray> t;
  double eps = cfg_.richardson_epsilon * cfg_.lambda;
  for (int k = 0; k < levels; ++k, eps /= 2.0) t.push_back(regularized(f, eps).values());
  // eliminate eps, eps^2, ... for the halving sequence
  for (int j = 1; j < levels; ++j)
    for (int k = levels - 1; k >= j; --k) t[k] = t[k] + (t[k] - t[k - 1]) / (std::pow(2.0, j) - 1.0);
  return ScalarField(grid_, t.back());
}

ScalarField HelmholtzResolvent::surface_term(const ScalarField& f) const {
  check_input(f);
  const int n = grid_.dim();
  const SphereQuadrature quad = build_quadrature(n, cfg_.lambda, cfg_.surface_resolution_for(grid_));
  const ComplexArray fhat = restrict_spectrum_to_sphere(f, quad);
  const C pre = C(0.0, kPi / (2.0 * std::sqrt(cfg_.lambda))) * std::pow(2.0 * kPi, -0.5 * n);
  const ComplexArray amps = pre * quad.weights.cast<Complex>() * fhat;
  return ScalarField(grid_, plane_wave_synthesis(grid_, quad.nodes, amps, +1));
}

ScalarField HelmholtzResolvent::complex(const ScalarField& f) const {
  if (cfg_.scheme == DeltaScheme::regularized) return regularized(f, cfg_.epsilon_for(grid_));
  const ScalarField re = real(f);
  return ScalarField(grid_, ComplexArray(re.values() + surface_term(f).values()));
}

ScalarField HelmholtzResolvent::operator_image(const ScalarField& f) const {
  check_input(f);
  ComplexArray s = lattice_.forward(f.values());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    s[k] *= real_multiplier_[k] * (lattice_.frequency(k).squaredNorm() - cfg_.lambda);
  return finish(grid_, lattice_.inverse(std::move(s)), f.is_real());
}

std::vector<ScalarField> HelmholtzResolvent::regularized_gradient(const ScalarField& f, double eps) const {
  check_input(f);
  ComplexArray s = lattice_.forward(f.values());
  s *= truncated_multiplier(lattice_, kappa_of(cfg_.lambda, eps));
  std::vector<ScalarField> out;
  for (int d = 0; d < grid_.dim(); ++d) {
    ComplexArray sd(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) sd[k] = C(0.0, lattice_.frequency(k)[d]) * s[k];
    out.emplace_back(grid_, lattice_.inverse(std::move(sd)));
  }
  return out;
}

ScalarField helmholtz_resolvent_complex(const ScalarField& f, const ResolventConfig& cfg) {
  return HelmholtzResolvent(f.grid(), cfg).complex(f);
}

ScalarField helmholtz_resolvent_real(const ScalarField& f, const ResolventConfig& cfg) {
  if (cfg.scheme == DeltaScheme::regularized) return helmholtz_resolvent_complex(f, cfg).real_part();
  return HelmholtzResolvent(f.grid(), cfg).real(f);
}

ScalarField apply_helmholtz(const ScalarField& g, double lambda) {
  return (-1.0) * spectral_laplacian(g) - lambda * g;
}

FourthOrderSpec FourthOrderSpec::make(double alpha, double beta) {
  const double disc = beta * beta - 4.0 * alpha;
  if (!(disc > 0.0)) throw std::invalid_argument("beta^2 - 4 alpha must be positive");
  FourthOrderSpec s;
  s.alpha = alpha;
  s.beta = beta;
  s.lambda1 = (-beta + std::sqrt(disc)) / 2.0;
  s.lambda2 = (-beta - std::sqrt(disc)) / 2.0;
  if (alpha < 0.0)
    s.tag = FourthOrderCase::i;
  else if (alpha > 0.0 && beta < -2.0 * std::sqrt(alpha))
    s.tag = FourthOrderCase::ii;
  else
    throw std::invalid_argument("(alpha, beta) outside cases (i) and (ii)");
  return s;
}

FourthOrderResolvent::FourthOrderResolvent(const Grid& grid, const FourthOrderSpec& spec, const ResolventConfig& cfg)
    : grid_(grid), spec_(spec), lattice_(grid, cfg.source_radius) {
  if (std::sqrt(spec.lambda1) >= kPi / grid.spacing())
    throw std::invalid_argument("sphere radius sqrt(lambda1) beyond the grid Nyquist frequency");
  const RealArray m1 = truncated_multiplier(lattice_, kappa_of(spec.lambda1, 0.0)).real();
  // the negative root gives an exponentially decaying kernel, no absorption needed
  const C k2 = spec.lambda2 > 0.0 ? kappa_of(spec.lambda2, 0.0) : C(0.0, std::sqrt(-spec.lambda2));
  const RealArray m2 = truncated_multiplier(lattice_, k2).real();
  multiplier_ = (m1 - m2) / (spec.lambda1 - spec.lambda2);
}

ScalarField FourthOrderResolvent::apply(const ScalarField& f) const {
  if (f.grid() != grid_) throw std::invalid_argument("resolvent applied on a different grid");
  check_source(f, lattice_);
  ComplexArray s = lattice_.forward(f.values());
  s *= multiplier_.cast<Complex>();
  return finish(grid_, lattice_.inverse(std::move(s)), f.is_real());
}

ScalarField FourthOrderResolvent::operator_image(const ScalarField& f) const {
  check_source(f, lattice_);
  ComplexArray s = lattice_.forward(f.values());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double q = lattice_.frequency(k).squaredNorm();
    s[k] *= multiplier_[k] * (q - spec_.lambda1) * (q - spec_.lambda2);
  }
  return finish(grid_, lattice_.inverse(std::move(s)), f.is_real());
}

ScalarField fourth_order_resolvent(const ScalarField& f, const FourthOrderSpec& spec, const ResolventConfig& cfg) {
  return FourthOrderResolvent(f.grid(), spec, cfg).apply(f);
}

ScalarField apply_fourth_order(const ScalarField& g, const FourthOrderSpec& spec) {
  const ScalarField lap = spectral_laplacian(g);
  return spectral_laplacian(lap) - spec.beta * lap + spec.alpha * g;
}

namespace {

ComplexArray raw_dft(const Grid& g, ComplexArray v) {
  fft_cube(v, g.dim(), g.points_per_dim(), false);
  return v;
}

ComplexArray raw_idft(const Grid& g, ComplexArray v) {
  fft_cube(v, g.dim(), g.points_per_dim(), true);
  return v / double(g.size());
}

}  // namespace

HelmholtzSplit helmholtz_decompose(const VectorField3& G) {
  const Grid& g = G.grid();
  std::array<ComplexArray, 3> s;
  for (int c = 0; c < 3; ++c) s[c] = raw_dft(g, G[c].values());
  std::array<ComplexArray, 3> s1;
  for (auto& a : s1) a = ComplexArray::Zero(g.size());
  const int nyq = -g.points_per_dim() / 2;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    // frequencies as seen by the spectral derivatives, Nyquist components dropped
    Point xi = g.frequency_vector(k);
    const auto ijk = g.unravel(k);
    for (int d = 0; d < 3; ++d)
      if (g.wavenumber(ijk[d]) == nyq) xi[d] = 0.0;
    const double q = xi.squaredNorm();
    if (q == 0.0) {
      // zero mode goes to the curl-free part
      for (int c = 0; c < 3; ++c) s1[c][k] = s[c][k];
      continue;
    }
    const C dot = (xi[0] * s[0][k] + xi[1] * s[1][k] + xi[2] * s[2][k]) / q;
    for (int c = 0; c < 3; ++c) s1[c][k] = dot * xi[c];
  }
  std::array<ScalarField, 3> g1{ScalarField::zeros(g), ScalarField::zeros(g), ScalarField::zeros(g)};
  std::array<ScalarField, 3> g2 = g1;
  for (int c = 0; c < 3; ++c) {
    ComplexArray v1 = raw_idft(g, s1[c]);
    if (G[c].is_real()) v1 = v1.real().cast<Complex>();
    g1[c] = ScalarField(g, v1);
    g2[c] = ScalarField(g, ComplexArray(G[c].values() - v1));
  }
  return {VectorField3(g1[0], g1[1], g1[2]), VectorField3(g2[0], g2[1], g2[2])};
}

CurlCurlResolvent::CurlCurlResolvent(const Grid& grid, const ResolventConfig& cfg)
    : grid_(grid), cfg_(cfg), lattice_(grid, cfg.source_radius) {
  if (grid.dim() != 3) throw std::invalid_argument("curl-curl resolvent needs n = 3");
  if (std::sqrt(cfg.lambda) >= kPi / grid.spacing())
    throw std::invalid_argument("sphere radius sqrt(lambda) beyond the grid Nyquist frequency");
  real_multiplier_ = truncated_multiplier(lattice_, kappa_of(cfg.lambda, 0.0)).real();
}

std::array<ComplexArray, 3> CurlCurlResolvent::localized_spectrum(const VectorField3& G) const {
  // spectrum of G + grad div G / lambda: compactly supported with G
  std::array<ComplexArray, 3> s;
  for (int c = 0; c < 3; ++c) {
    check_source(G[c], lattice_);
    s[c] = lattice_.forward(G[c].values());
  }
  for (Eigen::Index k = 0; k < lattice_.size(); ++k) {
    const Point xi = lattice_.frequency(k);
    const C dot = xi[0] * s[0][k] + xi[1] * s[1][k] + xi[2] * s[2][k];
    for (int c = 0; c < 3; ++c) s[c][k] -= xi[c] * dot / cfg_.lambda;
  }
  return s;
}

VectorField3 CurlCurlResolvent::apply(const VectorField3& G) const {
  if (G.grid() != grid_) throw std::invalid_argument("resolvent applied on a different grid");
  const double total = lq_norm(G, 2.0);
  if (total == 0.0) return VectorField3::zeros(grid_);
  const HelmholtzSplit split = helmholtz_decompose(G);
  const double tiny = 1e-13 * total;
  if (lq_norm(split.div_free, 2.0) <= tiny) return (-1.0 / cfg_.lambda) * split.curl_free;
  auto real_apply = [&](const ScalarField& f) {
    check_source(f, lattice_);
    ComplexArray s = lattice_.forward(f.values());
    s *= real_multiplier_.cast<Complex>();
    return finish(grid_, lattice_.inverse(std::move(s)), f.is_real());
  };
  if (lq_norm(split.curl_free, 2.0) <= tiny) return VectorField3(real_apply(G[0]), real_apply(G[1]), real_apply(G[2]));
  auto s = localized_spectrum(G);
  std::array<ScalarField, 3> out{ScalarField::zeros(grid_), ScalarField::zeros(grid_), ScalarField::zeros(grid_)};
  for (int c = 0; c < 3; ++c) {
    s[c] *= real_multiplier_.cast<Complex>();
    out[c] = finish(grid_, lattice_.inverse(std::move(s[c])), G[c].is_real());
  }
  return VectorField3(out[0], out[1], out[2]);
}

VectorField3 CurlCurlResolvent::operator_image(const VectorField3& G) const {
  auto s = localized_spectrum(G);
  for (Eigen::Index k = 0; k < lattice_.size(); ++k) {
    const Point xi = lattice_.frequency(k);
    C w[3];
    for (int c = 0; c < 3; ++c) w[c] = real_multiplier_[k] * s[c][k];
    const C dot = xi[0] * w[0] + xi[1] * w[1] + xi[2] * w[2];
    const double q = xi.squaredNorm();
    for (int c = 0; c < 3; ++c) s[c][k] = (q - cfg_.lambda) * w[c] - xi[c] * dot;
  }
  std::array<ScalarField, 3> out{ScalarField::zeros(grid_), ScalarField::zeros(grid_), ScalarField::zeros(grid_)};
  for (int c = 0; c < 3; ++c) out[c] = finish(grid_, lattice_.inverse(std::move(s[c])), G[c].is_real());
  return VectorField3(out[0], out[1], out[2]);
}

VectorField3 curlcurl_resolvent(const VectorField3& G, const ResolventConfig& cfg) {
  return CurlCurlResolvent(G.grid(), cfg).apply(G);
}

VectorField3 apply_curlcurl(const VectorField3& E, double lambda) {
  return spectral_curl(spectral_curl(E)) - lambda * E;
}

std::vector<RuizVegaRow> ruiz_vega_diagnostic(const ScalarField& f, const ResolventConfig& cfg,
                                              const std::vector<double>& eps_list,
                                              const std::vector<double>& R_list) {
  for (size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("eps_list must be decreasing");
  const HelmholtzResolvent res(f.grid(), cfg);
  std::vector<RuizVegaRow> rows;
  for (double eps : eps_list) {
    RuizVegaRow row;
    row.epsilon = eps;
    const ScalarField u = res.regularized(f, eps);
    RealArray g2 = RealArray::Zero(f.grid().size());
    for (const auto& gd : res.regularized_gradient(f, eps)) g2 += gd.values().abs2();
    const ScalarField gmag(f.grid(), RealArray(g2.sqrt()));
    for (double R : R_list) {
      row.shell_norms.push_back(std::sqrt(shell_average(u, R)));
      row.gradient_shell_norms.push_back(std::sqrt(shell_average(gmag, R)));
      row.sup_norm = std::max(row.sup_norm, row.shell_norms.back());
      row.gradient_sup = std::max(row.gradient_sup, row.gradient_shell_norms.back());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nlh
