#include "nlh/fields.hpp"

#include "nlh/fft.hpp"

#include <cmath>
#include <limits>

namespace nlh {

Grid::Grid(int dim, double half_extent, int points_per_dim)
    : dim_(dim), half_extent_(half_extent), n_(points_per_dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("grid dimension must be 2 or 3");
  if (!(half_extent > 0.0)) throw std::invalid_argument("grid half extent must be positive");
  if (points_per_dim < 8 || points_per_dim % 2)
    throw std::invalid_argument("points per dimension must be even and >= 8");
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= n_;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::array<int, 3> Grid::unravel(Eigen::Index idx) const {
  std::array<int, 3> out{0, 0, 0};
  for (int d = 0; d < dim_; ++d) {
    out[d] = int(idx % n_);
    idx /= n_;
  }
  return out;
}

Point Grid::point(Eigen::Index idx) const {
  auto ijk = unravel(idx);
  Point x = Point::Zero();
  for (int d = 0; d < dim_; ++d) x[d] = coordinate(ijk[d]);
  return x;
}

Point Grid::frequency_vector(Eigen::Index idx) const {
  auto ijk = unravel(idx);
  Point k = Point::Zero();
  for (int d = 0; d < dim_; ++d) k[d] = frequency(ijk[d]);
  return k;
}

namespace {

bool decide_real(const ComplexArray& v) {
  if (v.size() == 0) return true;
  const double scale = v.abs().maxCoeff();
  return v.imag().abs().maxCoeff() <= kRealityTolerance * scale;
}

void require_same(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("fields live on different grids");
}

// (-1)^(i0+i1+i2): phase of the [-L, L] offset
ComplexArray alternate(const Grid& g, ComplexArray v) {
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    auto ijk = g.unravel(i);
    if ((ijk[0] + ijk[1] + ijk[2]) & 1) v[i] = -v[i];
  }
  return v;
}

ComplexArray raw_forward(const Grid& g, ComplexArray v) {
  fft_cube(v, g.dim(), g.points_per_dim(), false);
  return v;
}

ComplexArray raw_inverse(const Grid& g, ComplexArray v) {
  fft_cube(v, g.dim(), g.points_per_dim(), true);
  return v / double(g.size());
}

}  // namespace

ScalarField::ScalarField(const Grid& grid, ComplexArray values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("value count does not match grid");
  real_ = decide_real(values_);
}

ScalarField::ScalarField(const Grid& grid, const RealArray& values)
    : ScalarField(grid, ComplexArray(values.cast<Complex>())) {}

ScalarField ScalarField::zeros(const Grid& grid) {
  return ScalarField(grid, ComplexArray(ComplexArray::Zero(grid.size())));
}

ScalarField ScalarField::real_part() const {
  return ScalarField(grid_, RealArray(values_.real()));
}

double ScalarField::max_abs() const { return values_.size() ? values_.abs().maxCoeff() : 0.0; }

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same(a.grid(), b.grid());
  return ScalarField(a.grid(), ComplexArray(a.values() + b.values()));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same(a.grid(), b.grid());
  return ScalarField(a.grid(), ComplexArray(a.values() - b.values()));
}

ScalarField operator*(Complex c, const ScalarField& a) {
  return ScalarField(a.grid(), ComplexArray(c * a.values()));
}

ScalarField operator*(double c, const ScalarField& a) {
  return ScalarField(a.grid(), ComplexArray(c * a.values()));
}

VectorField3::VectorField3(ScalarField x, ScalarField y, ScalarField z)
    : c_{std::move(x), std::move(y), std::move(z)} {
  if (c_[0].grid().dim() != 3) throw std::invalid_argument("vector fields need a 3d grid");
  require_same(c_[0].grid(), c_[1].grid());
  require_same(c_[0].grid(), c_[2].grid());
}

VectorField3 VectorField3::zeros(const Grid& grid) {
  return VectorField3(ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid));
}

VectorField3 VectorField3::real_part() const {
  return VectorField3(c_[0].real_part(), c_[1].real_part(), c_[2].real_part());
}

RealArray VectorField3::magnitude() const {
  return (c_[0].values().abs2() + c_[1].values().abs2() + c_[2].values().abs2()).sqrt();
}

VectorField3 operator+(const VectorField3& a, const VectorField3& b) {
  return VectorField3(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
}

VectorField3 operator-(const VectorField3& a, const VectorField3& b) {
  return VectorField3(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

VectorField3 operator*(double c, const VectorField3& a) {
  return VectorField3(c * a[0], c * a[1], c * a[2]);
}

SpectralField::SpectralField(const Grid& grid, ComplexArray coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw std::invalid_argument("coefficient count does not match grid");
}

SpectralField forward_transform(const ScalarField& f) {
  const Grid& g = f.grid();
  const double scale = g.cell_volume() / std::pow(2.0 * kPi, 0.5 * g.dim());
  ComplexArray c = alternate(g, raw_forward(g, f.values()));
  return SpectralField(g, ComplexArray(c * scale));
}

ScalarField inverse_transform(const SpectralField& F) {
  const Grid& g = F.grid();
  const double scale = std::pow(g.freq_spacing(), g.dim()) / std::pow(2.0 * kPi, 0.5 * g.dim());
  ComplexArray v = alternate(g, F.coeffs());
  fft_cube(v, g.dim(), g.points_per_dim(), true);
  return ScalarField(g, ComplexArray(v * scale));
}

double spectral_l2_norm(const SpectralField& F) {
  const Grid& g = F.grid();
  return std::sqrt(std::pow(g.freq_spacing(), g.dim()) * F.coeffs().abs2().sum());
}

double lq_norm(const RealArray& m, const Grid& grid, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm needs q >= 1");
  if (std::isinf(q)) return m.size() ? m.abs().maxCoeff() : 0.0;
  const double top = m.size() ? m.abs().maxCoeff() : 0.0;
  if (top == 0.0) return 0.0;
  // scale by the max to keep |f|^q in range for large q
  const double s = (m.abs() / top).pow(q).sum();
  return top * std::pow(grid.cell_volume() * s, 1.0 / q);
}

double lq_norm(const ScalarField& f, double q) {
  return lq_norm(RealArray(f.values().abs()), f.grid(), q);
}

double lq_norm(const VectorField3& f, double q) { return lq_norm(f.magnitude(), f.grid(), q); }

namespace {

double shell_average_abs2(const RealArray& abs2, const Grid& g, double R, double mask) {
  if (!(R > 0.0)) throw std::invalid_argument("shell radius must be positive");
  if (R > g.half_extent() * (1.0 + 1e-12))
    throw std::invalid_argument("shell radius exceeds the box half extent");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double r = g.point(i).norm();
    if (r < R && r >= mask) sum += abs2[i];
  }
  return g.cell_volume() * sum / R;
}

}  // namespace

double shell_average(const ScalarField& f, double R, double mask_radius) {
  return shell_average_abs2(f.values().abs2(), f.grid(), R, mask_radius);
}

double shell_average(const VectorField3& f, double R, double mask_radius) {
  return shell_average_abs2(f.magnitude().square(), f.grid(), R, mask_radius);
}

std::vector<RadialBin> radial_profile(const RealArray& m, const Grid& g, int n_bins, double r_lo,
                                      double r_hi) {
  if (n_bins < 4) throw std::invalid_argument("radial_profile needs at least 4 bins");
  if (!(r_hi > r_lo) || r_lo < 0.0) throw std::invalid_argument("empty radial window");
  std::vector<RadialBin> bins(n_bins);
  const double w = (r_hi - r_lo) / n_bins;
  for (int b = 0; b < n_bins; ++b) bins[b].radius = r_lo + (b + 0.5) * w;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double r = g.point(i).norm();
    if (r < r_lo || r >= r_hi) continue;
    const int b = std::min(n_bins - 1, int((r - r_lo) / w));
    auto& bin = bins[b];
    bin.mean_abs += m[i];
    bin.max_abs = std::max(bin.max_abs, m[i]);
    ++bin.count;
  }
  for (auto& bin : bins) {
    bin.empty = bin.count == 0;
    if (!bin.empty) bin.mean_abs /= double(bin.count);
  }
  return bins;
}

std::vector<RadialBin> radial_profile(const ScalarField& f, int n_bins, double r_lo, double r_hi) {
  return radial_profile(RealArray(f.values().abs()), f.grid(), n_bins, r_lo, r_hi);
}

std::vector<RadialBin> radial_profile(const ScalarField& f, int n_bins) {
  return radial_profile(f, n_bins, 0.0, f.grid().half_extent());
}

namespace {

double boundary_fraction_abs2(const RealArray& abs2, const Grid& g) {
  const double total = abs2.sum();
  if (total == 0.0) return 0.0;
  const double inner = g.half_extent() * (1.0 - 1.0 / 8.0);
  double edge = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (g.point(i).cwiseAbs().maxCoeff() > inner) edge += abs2[i];
  return edge / total;
}

}  // namespace

double boundary_mass_fraction(const ScalarField& f) {
  return boundary_fraction_abs2(f.values().abs2(), f.grid());
}

double boundary_mass_fraction(const VectorField3& f) {
  return boundary_fraction_abs2(f.magnitude().square(), f.grid());
}

namespace {

// multiply the raw spectrum by i*xi_axis, zeroing the Nyquist plane
ComplexArray derivative_spectrum(const Grid& g, const ComplexArray& spec, int axis) {
  ComplexArray out(spec.size());
  const int nyq = -g.points_per_dim() / 2;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const int k = g.wavenumber(g.unravel(i)[axis]);
    out[i] = k == nyq ? Complex(0.0) : Complex(0.0, k * g.freq_spacing()) * spec[i];
  }
  return out;
}

}  // namespace

std::array<ScalarField, 3> spectral_gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  ComplexArray spec = raw_forward(g, f.values());
  std::array<ScalarField, 3> out{ScalarField::zeros(g), ScalarField::zeros(g), ScalarField::zeros(g)};
  for (int d = 0; d < g.dim(); ++d)
    out[d] = ScalarField(g, raw_inverse(g, derivative_spectrum(g, spec, d)));
  return out;
}

ScalarField spectral_divergence(const VectorField3& G) {
  const Grid& g = G.grid();
  ComplexArray acc = ComplexArray::Zero(g.size());
  for (int d = 0; d < 3; ++d) acc += derivative_spectrum(g, raw_forward(g, G[d].values()), d);
  return ScalarField(g, raw_inverse(g, acc));
}

VectorField3 spectral_curl(const VectorField3& G) {
  const Grid& g = G.grid();
  std::array<ComplexArray, 3> s;
  for (int d = 0; d < 3; ++d) s[d] = raw_forward(g, G[d].values());
  auto dd = [&](int comp, int axis) { return derivative_spectrum(g, s[comp], axis); };
  return VectorField3(ScalarField(g, raw_inverse(g, dd(2, 1) - dd(1, 2))),
                      ScalarField(g, raw_inverse(g, dd(0, 2) - dd(2, 0))),
                      ScalarField(g, raw_inverse(g, dd(1, 0) - dd(0, 1))));
}

ScalarField spectral_laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  ComplexArray spec = raw_forward(g, f.values());
  for (Eigen::Index i = 0; i < g.size(); ++i) spec[i] *= -g.frequency_vector(i).squaredNorm();
  return ScalarField(g, raw_inverse(g, spec));
}

Complex inner_product(const ScalarField& a, const ScalarField& b) {
  require_same(a.grid(), b.grid());
  return a.grid().cell_volume() * (a.values().conjugate() * b.values()).sum();
}

Complex inner_product(const VectorField3& a, const VectorField3& b) {
  return inner_product(a[0], b[0]) + inner_product(a[1], b[1]) + inner_product(a[2], b[2]);
}

}  // namespace nlh
