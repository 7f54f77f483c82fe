#include "nlh/sphere.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <stdexcept>

namespace nlh {

std::pair<RealArray, RealArray> gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre needs at least one node");
  RealArray x(count), w(count);
  // Newton on P_n from the Chebyshev-like guess; fill the upper half and mirror
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (count == 1) p0 = 1.0;
    dp = count * (z * p1 - p0) / (z * z - 1.0);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[count - 1 - i] = z;
    x[i] = -z;
    w[i] = w[count - 1 - i] = wi;
  }
  if (count % 2) x[half - 1] = 0.0;
  return {x, w};
}

SphereQuadrature build_quadrature(int n, double lambda, int resolution) {
  if (n != 2 && n != 3) throw std::invalid_argument("sphere quadrature needs n in {2,3}");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (resolution < 4 || resolution % 2)
    throw std::invalid_argument("quadrature resolution must be even (antipodal closure) and >= 4");
  SphereQuadrature q;
  q.dim = n;
  q.radius = std::sqrt(lambda);
  const int M = resolution;
  std::vector<double> ca(M), sa(M);
  for (int a = 0; a < M / 2; ++a) {
    ca[a] = std::cos(2.0 * kPi * a / M);
    sa[a] = std::sin(2.0 * kPi * a / M);
    ca[a + M / 2] = -ca[a];
    sa[a + M / 2] = -sa[a];
  }
  q.n_azimuth = M;
  if (n == 2) {
    q.n_polar = 1;
    q.nodes.setZero(M, 3);
    q.weights.setConstant(M, 2.0 * kPi * q.radius / M);
    q.antipode.resize(M);
    for (int a = 0; a < M; ++a) {
      q.nodes(a, 0) = q.radius * ca[a];
      q.nodes(a, 1) = q.radius * sa[a];
      q.antipode[a] = (a + M / 2) % M;
    }
    return q;
  }
  const int P = M / 2;
  auto [z, wz] = gauss_legendre(P);
  q.n_polar = P;
  q.nodes.setZero(Eigen::Index(P) * M, 3);
  q.weights.resize(Eigen::Index(P) * M);
  q.antipode.resize(Eigen::Index(P) * M);
  for (int p = 0; p < P; ++p) {
    const double st = std::sqrt(std::max(0.0, 1.0 - z[p] * z[p]));
    for (int a = 0; a < M; ++a) {
      const Eigen::Index i = Eigen::Index(p) * M + a;
      q.nodes(i, 0) = q.radius * st * ca[a];
      q.nodes(i, 1) = q.radius * st * sa[a];
      q.nodes(i, 2) = q.radius * z[p];
      q.weights[i] = wz[p] * (2.0 * kPi / M) * lambda;
      q.antipode[i] = Eigen::Index(P - 1 - p) * M + (a + M / 2) % M;
    }
  }
  return q;
}

SphereDensity::SphereDensity(int dim, DensityKind kind, double lambda, int degree,
                             std::vector<ComplexArray> c)
    : dim_(dim), kind_(kind), lambda_(lambda), degree_(degree), coeffs_(std::move(c)) {
  if (!(lambda > 0.0)) throw std::invalid_argument("density lambda must be positive");
}

SphereDensity SphereDensity::circle(double lambda, ComplexArray coeffs) {
  if (coeffs.size() % 2 == 0) throw std::invalid_argument("circle density needs 2K+1 coefficients");
  const int K = int(coeffs.size() / 2);
  return SphereDensity(2, DensityKind::scalar, lambda, K, {std::move(coeffs)});
}

SphereDensity SphereDensity::harmonics(double lambda, int l_max, ComplexArray coeffs) {
  if (l_max < 0 || coeffs.size() != harmonic_count(l_max))
    throw std::invalid_argument("harmonic density needs (l_max+1)^2 coefficients");
  return SphereDensity(3, DensityKind::scalar, lambda, l_max, {std::move(coeffs)});
}

SphereDensity SphereDensity::tangential(double lambda, int l_max, std::array<ComplexArray, 3> g) {
  for (auto& c : g)
    if (l_max < 0 || c.size() != harmonic_count(l_max))
      throw std::invalid_argument("tangential density needs (l_max+1)^2 coefficients per component");
  return SphereDensity(3, DensityKind::tangential, lambda, l_max, {g[0], g[1], g[2]});
}

SphereDensity SphereDensity::scaled(Complex a) const {
  SphereDensity out = *this;
  for (auto& c : out.coeffs_) c *= a;
  return out;
}

SphereDensity SphereDensity::plus(const SphereDensity& o, Complex a) const {
  if (o.dim_ != dim_ || o.kind_ != kind_ || o.lambda_ != lambda_)
    throw std::invalid_argument("densities live on different spheres");
  const int deg = std::max(degree_, o.degree_);
  auto widen = [&](const ComplexArray& c, int from) {
    if (dim_ == 2) {
      ComplexArray w = ComplexArray::Zero(2 * deg + 1);
      w.segment(deg - from, 2 * from + 1) = c;
      return w;
    }
    ComplexArray w = ComplexArray::Zero(harmonic_count(deg));
    w.head(c.size()) = c;
    return w;
  };
  SphereDensity out = *this;
  out.degree_ = deg;
  for (size_t i = 0; i < coeffs_.size(); ++i)
    out.coeffs_[i] = widen(coeffs_[i], degree_) + a * widen(o.coeffs_[i], o.degree_);
  return out;
}

Eigen::Vector3cd SphereDensity::at(const Eigen::Vector3d& w) const {
  Eigen::Vector3cd out = Eigen::Vector3cd::Zero();
  if (dim_ == 2) {
    const double th = std::atan2(w[1], w[0]);
    const int K = degree_;
    Complex s = 0.0;
    for (int k = -K; k <= K; ++k) s += coeffs_[0][k + K] * std::polar(1.0, k * th);
    out[0] = s;
    return out;
  }
  for (int c = 0; c < components(); ++c) {
    auto [re, im] = harmonic_sum<double>(coeffs_[c], degree_, w[0], w[1], w[2]);
    out[c] = Complex(re, im);
  }
  if (kind_ == DensityKind::tangential) {
    const Complex radial = w[0] * out[0] + w[1] * out[1] + w[2] * out[2];
    for (int c = 0; c < 3; ++c) out[c] -= radial * w[c];
  }
  return out;
}

Eigen::ArrayXXcd evaluate_density(const SphereDensity& h, const SphereQuadrature& quad) {
  if (h.dim() != quad.dim) throw std::invalid_argument("density and quadrature dimensions differ");
  Eigen::ArrayXXcd out(quad.size(), h.components());
  for (Eigen::Index i = 0; i < quad.size(); ++i) {
    const Eigen::Vector3cd v = h.at(quad.direction(i));
    for (int c = 0; c < h.components(); ++c) out(i, c) = v[c];
  }
  return out;
}

SphereDensity hermitian_filter(const SphereDensity& h) {
  std::vector<ComplexArray> c = h.coefficients();
  for (auto& a : c) {
    ComplexArray b = a;
    if (h.dim() == 2) {
      const int K = h.degree();
      for (int k = -K; k <= K; ++k)
        b[k + K] = 0.5 * (a[k + K] + (k & 1 ? -1.0 : 1.0) * std::conj(a[-k + K]));
    } else {
      for (int l = 0; l <= h.degree(); ++l)
        for (int m = -l; m <= l; ++m)
          b[l * l + l + m] = 0.5 * (a[l * l + l + m] + ((l + m) & 1 ? -1.0 : 1.0) * std::conj(a[l * l + l - m]));
    }
    a = b;
  }
  SphereDensity out = h.dim() == 2 ? SphereDensity::circle(h.lambda(), c[0])
                      : h.kind() == DensityKind::scalar
                          ? SphereDensity::harmonics(h.lambda(), h.degree(), c[0])
                          : SphereDensity::tangential(h.lambda(), h.degree(), {c[0], c[1], c[2]});
  out.declared_m = h.declared_m;
  out.declared_delta = h.declared_delta;
  return out;
}

double hermitian_defect(const SphereDensity& h, const SphereQuadrature& quad) {
  const Eigen::ArrayXXcd v = evaluate_density(h, quad);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < quad.size(); ++i)
    for (int c = 0; c < v.cols(); ++c)
      worst = std::max(worst, std::abs(v(i, c) - std::conj(v(quad.antipode[i], c))));
  return worst;
}

double tangential_defect(const SphereDensity& h, const SphereQuadrature& quad) {
  if (h.kind() != DensityKind::tangential) return 0.0;
  const Eigen::ArrayXXcd v = evaluate_density(h, quad);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < quad.size(); ++i) {
    const Eigen::Vector3d w = quad.direction(i);
    worst = std::max(worst, std::abs(v(i, 0) * w[0] + v(i, 1) * w[1] + v(i, 2) * w[2]));
  }
  return worst;
}

namespace {

using AD1 = Eigen::AutoDiffScalar<Eigen::Vector3d>;
using AD2 = Eigen::AutoDiffScalar<Eigen::Matrix<AD1, 3, 1>>;

// value, gradient and Hessian (per component, complex) of the degree-0
// homogeneous extension at the point xi
struct Jet {
  Eigen::Vector3cd value;
  Eigen::Matrix3cd grad;                // row = component
  std::array<Eigen::Matrix3cd, 3> hess;  // per component
};

Jet density_jet(const SphereDensity& h, const Eigen::Vector3d& xi) {
  AD2 v[3];
  for (int i = 0; i < 3; ++i) {
    v[i].value() = AD1(xi[i], 3, i);
    for (int j = 0; j < 3; ++j) v[i].derivatives()(j) = AD1(i == j ? 1.0 : 0.0, Eigen::Vector3d::Zero());
  }
  const AD2 r = sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const AD2 w[3] = {AD2(v[0] / r), AD2(v[1] / r), AD2(v[2] / r)};
  AD2 re[3], im[3];
  for (int c = 0; c < h.components(); ++c) {
    auto s = harmonic_sum<AD2>(h.coefficients()[c], h.degree(), w[0], w[1], w[2]);
    re[c] = s.first;
    im[c] = s.second;
  }
  if (h.kind() == DensityKind::tangential) {
    const AD2 rr = AD2(w[0] * re[0] + w[1] * re[1] + w[2] * re[2]);
    const AD2 ri = AD2(w[0] * im[0] + w[1] * im[1] + w[2] * im[2]);
    for (int c = 0; c < 3; ++c) {
      re[c] = AD2(re[c] - rr * w[c]);
      im[c] = AD2(im[c] - ri * w[c]);
    }
  }
  Jet j;
  j.value.setZero();
  j.grad.setZero();
  for (auto& m : j.hess) m.setZero();
  for (int c = 0; c < h.components(); ++c) {
    j.value[c] = Complex(re[c].value().value(), im[c].value().value());
    for (int a = 0; a < 3; ++a) {
      j.grad(c, a) = Complex(re[c].value().derivatives()[a], im[c].value().derivatives()[a]);
      for (int b = 0; b < 3; ++b)
        j.hess[c](a, b) = Complex(re[c].derivatives()(a).derivatives()[b], im[c].derivatives()(a).derivatives()[b]);
    }
  }
  return j;
}

}  // namespace

double cm_norm_estimate(const SphereDensity& h, int m) {
  if (m < 0) throw std::invalid_argument("smoothness order must be nonnegative");
  if (h.dim() == 2) {
    const int K = h.degree();
    const int M = std::max(64, 8 * (K + 1));
    const auto& c = h.coefficients()[0];
    double best = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double scale = std::pow(h.lambda(), -0.5 * j);
      for (int a = 0; a < M; ++a) {
        const double th = 2.0 * kPi * a / M;
        Complex s = 0.0;
        for (int k = -K; k <= K; ++k) s += std::pow(Complex(0.0, k), j) * c[k + K] * std::polar(1.0, k * th);
        best = std::max(best, scale * std::abs(s));
      }
    }
    return best;
  }
  if (m > 2) throw std::invalid_argument("cm_norm_estimate supports m <= 2 on the 2-sphere");
  const SphereQuadrature quad = build_quadrature(3, h.lambda(), 4 * (h.degree() + 2));
  double best = 0.0;
  for (Eigen::Index i = 0; i < quad.size(); ++i) {
    const Jet j = density_jet(h, quad.nodes.row(i).transpose());
    best = std::max(best, j.value.norm());
    if (m >= 1) best = std::max(best, j.grad.norm());
    if (m >= 2) {
      double s = 0.0;
      for (auto& hm : j.hess) s += hm.squaredNorm();
      best = std::max(best, std::sqrt(s));
    }
  }
  return best;
}

namespace {

// azimuthal unit vector at a node; zero at the poles
Eigen::Vector3d azimuthal(const Eigen::Vector3d& w) {
  const double rho = std::hypot(w[0], w[1]);
  if (rho == 0.0) return Eigen::Vector3d::Zero();
  return Eigen::Vector3d(-w[1] / rho, w[0] / rho, 0.0);
}

}  // namespace

double cylindrical_defect(const SphereDensity& h, const SphereQuadrature& quad) {
  if (h.kind() != DensityKind::tangential) throw std::invalid_argument("cylindrical form needs a tangential density");
  const Eigen::ArrayXXcd v = evaluate_density(h, quad);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < quad.size(); ++i) scale = std::max(scale, v.row(i).matrix().norm());
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  const int M = quad.n_azimuth;
  for (int p = 0; p < quad.n_polar; ++p) {
    Complex mean = 0.0;
    std::vector<Complex> az(M);
    for (int a = 0; a < M; ++a) {
      const Eigen::Index i = Eigen::Index(p) * M + a;
      const Eigen::Vector3d w = quad.direction(i);
      const Eigen::Vector3d e = azimuthal(w);
      const Eigen::Vector3d rh = Eigen::Vector3d(w[0], w[1], 0.0).normalized();
      const Eigen::Vector3cd hv = v.row(i).transpose();
      az[a] = hv.dot(e.cast<Complex>());
      mean += az[a] / double(M);
      worst = std::max(worst, std::abs(hv.dot(rh.cast<Complex>())));
      worst = std::max(worst, std::abs(hv[2]));
    }
    for (int a = 0; a < M; ++a) worst = std::max(worst, std::abs(az[a] - mean));
  }
  return worst / scale;
}

std::pair<SphereDensity, CylSymmetryTag> project_cylindrical(const SphereDensity& h) {
  if (h.dim() != 3 || h.kind() != DensityKind::tangential)
    throw std::invalid_argument("project_cylindrical needs a tangential density on the 2-sphere");
  const int L = h.degree();
  const SphereQuadrature quad = build_quadrature(3, 1.0, 2 * L + 6);
  const Eigen::ArrayXXcd v = evaluate_density(h, quad);
  const int M = quad.n_azimuth, P = quad.n_polar;

  // ring means of the azimuthal component, then a weighted least-squares fit
  // of Z(w3) sin(theta) with Z spanned by zonal harmonics of degree < L
  Eigen::VectorXcd abar(P);
  Eigen::VectorXd sin_t(P), z(P), wp(P);
  for (int p = 0; p < P; ++p) {
    Complex mean = 0.0;
    for (int a = 0; a < M; ++a) {
      const Eigen::Index i = Eigen::Index(p) * M + a;
      const Eigen::Vector3d e = azimuthal(quad.direction(i));
      mean += Eigen::Vector3cd(v.row(i).transpose()).dot(e.cast<Complex>());
    }
    abar[p] = mean / double(M);
    const Eigen::Vector3d w = quad.direction(Eigen::Index(p) * M);
    z[p] = w[2];
    sin_t[p] = std::hypot(w[0], w[1]);
    wp[p] = std::sqrt(quad.weights[Eigen::Index(p) * M]);
  }
  const int nz = std::max(L, 1);
  Eigen::MatrixXd B(P, nz);
  for (int p = 0; p < P; ++p)
    for (int l = 0; l < nz; ++l) B(p, l) = std::legendre(l, z[p]) * sin_t[p] * wp[p];
  const Eigen::MatrixXcd Bc = B.cast<Complex>();
  const Eigen::VectorXcd rhs = (abar.array() * wp.cast<Complex>().array()).matrix();
  const Eigen::VectorXcd zc = Bc.colPivHouseholderQr().solve(rhs);

  // rebuild g = Z(w3) (-w2, w1, 0) and expand it again
  SphereDensity out = density_from_function(3, h.lambda(), L, DensityKind::tangential,
                                            [&](const Eigen::Vector3d& w) {
                                              Complex Z = 0.0;
                                              for (int l = 0; l < nz; ++l) Z += zc[l] * std::legendre(l, w[2]);
                                              return Eigen::Vector3cd(-w[1] * Z, w[0] * Z, 0.0);
                                            });
  out.declared_m = h.declared_m;
  out.declared_delta = h.declared_delta;
  CylSymmetryTag tag;
  tag.residual = cylindrical_defect(out, build_quadrature(3, h.lambda(), 2 * L + 6));
  tag.flag = tag.residual <= kCylTolerance;
  return {out, tag};
}

SphereDensity density_from_function(int n, double lambda, int degree, DensityKind kind,
                                    const DensityFunction& fn) {
  if (degree < 0) throw std::invalid_argument("density degree must be nonnegative");
  if (n == 2) {
    if (kind != DensityKind::scalar) throw std::invalid_argument("tangential densities need n = 3");
    const int K = degree, M = 4 * K + 8;
    ComplexArray c = ComplexArray::Zero(2 * K + 1);
    for (int a = 0; a < M; ++a) {
      const double th = 2.0 * kPi * a / M;
      const Complex v = fn(Eigen::Vector3d(std::cos(th), std::sin(th), 0.0))[0];
      for (int k = -K; k <= K; ++k) c[k + K] += v * std::polar(1.0, -k * th) / double(M);
    }
    return SphereDensity::circle(lambda, c);
  }
  if (n != 3) throw std::invalid_argument("densities need n in {2,3}");
  const int L = degree;
  const SphereQuadrature quad = build_quadrature(3, 1.0, 2 * L + 6);
  const int comps = kind == DensityKind::tangential ? 3 : 1;
  std::array<ComplexArray, 3> coef;
  for (auto& c : coef) c = ComplexArray::Zero(harmonic_count(L));
  for (Eigen::Index i = 0; i < quad.size(); ++i) {
    const Eigen::Vector3d w = quad.direction(i);
    const Eigen::Vector3cd g = fn(w);
    const double th = std::acos(std::clamp(w[2], -1.0, 1.0));
    const double ph = std::atan2(w[1], w[0]);
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) {
        Complex y = std::sph_legendre(l, std::abs(m), th) * std::polar(1.0, std::abs(m) * ph);
        if (m < 0) y = ((m & 1) ? -1.0 : 1.0) * std::conj(y);
        for (int c = 0; c < comps; ++c) coef[c][l * l + l + m] += quad.weights[i] * g[c] * std::conj(y);
      }
  }
  // drop quadrature dust so exact zeros stay exact
  for (auto& c : coef)
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      if (std::abs(c[k].real()) < 1e-15) c[k].real(0.0);
      if (std::abs(c[k].imag()) < 1e-15) c[k].imag(0.0);
    }
  if (kind == DensityKind::scalar) return SphereDensity::harmonics(lambda, L, coef[0]);
  return SphereDensity::tangential(lambda, L, coef);
}

ComplexArray plane_wave_synthesis(const Grid& grid, const NodeMatrix& freqs, const ComplexArray& amps,
                                  int sign) {
  const int N = grid.points_per_dim();
  const int n = grid.dim();
  ComplexArray out = ComplexArray::Zero(grid.size());
  std::vector<Complex> e0(N), e1(N), e2(N, 1.0);
  for (Eigen::Index j = 0; j < freqs.rows(); ++j) {
    if (amps[j] == Complex(0.0)) continue;
    for (int i = 0; i < N; ++i) {
      const double x = grid.coordinate(i);
      e0[i] = std::polar(1.0, sign * x * freqs(j, 0));
      e1[i] = std::polar(1.0, sign * x * freqs(j, 1));
      if (n == 3) e2[i] = std::polar(1.0, sign * x * freqs(j, 2));
    }
    Complex* o = out.data();
    const int n2 = n == 3 ? N : 1;
    for (int i2 = 0; i2 < n2; ++i2) {
      const Complex a2 = amps[j] * e2[i2];
      for (int i1 = 0; i1 < N; ++i1) {
        const Complex a1 = a2 * e1[i1];
        for (int i0 = 0; i0 < N; ++i0) *o++ += a1 * e0[i0];
      }
    }
  }
  return out;
}

ComplexArray plane_wave_analysis(const Grid& grid, const ComplexArray& values, const NodeMatrix& freqs) {
  const int N = grid.points_per_dim();
  const int n = grid.dim();
  ComplexArray out(freqs.rows());
  std::vector<Complex> e0(N), e1(N), e2(N, 1.0);
  for (Eigen::Index j = 0; j < freqs.rows(); ++j) {
    for (int i = 0; i < N; ++i) {
      const double x = grid.coordinate(i);
      e0[i] = std::polar(1.0, -x * freqs(j, 0));
      e1[i] = std::polar(1.0, -x * freqs(j, 1));
      if (n == 3) e2[i] = std::polar(1.0, -x * freqs(j, 2));
    }
    const Complex* v = values.data();
    const int n2 = n == 3 ? N : 1;
    Complex total = 0.0;
    for (int i2 = 0; i2 < n2; ++i2) {
      Complex plane = 0.0;
      for (int i1 = 0; i1 < N; ++i1) {
        Complex line = 0.0;
        for (int i0 = 0; i0 < N; ++i0) line += *v++ * e0[i0];
        plane += line * e1[i1];
      }
      total += plane * e2[i2];
    }
    out[j] = total;
  }
  return out;
}

ComplexArray restrict_spectrum_to_sphere(const ScalarField& f, const SphereQuadrature& quad) {
  const Grid& g = f.grid();
  if (g.dim() != quad.dim) throw std::invalid_argument("field and sphere dimensions differ");
  if (quad.radius >= kPi / g.spacing()) throw std::invalid_argument("sphere radius beyond the grid Nyquist frequency");
  const double scale = g.cell_volume() / std::pow(2.0 * kPi, 0.5 * g.dim());
  return scale * plane_wave_analysis(g, f.values(), quad.nodes);
}

ComplexArray restrict_spectrum_to_sphere(const SpectralField& F, const SphereQuadrature& quad) {
  return restrict_spectrum_to_sphere(inverse_transform(F), quad);
}

}  // namespace nlh
