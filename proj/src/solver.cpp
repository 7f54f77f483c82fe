#include "nlh/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlh {

ExponentProblem FixedPointProblem::exponent_problem() const {
  return {tag, grid.dim(), f.s, f.p, f.p_tilde};
}

namespace {

SphereQuadrature quadrature_for(const FixedPointProblem& prob, double lambda) {
  ResolventConfig rc = prob.resolvent;
  rc.lambda = lambda;
  const int res = prob.quad_resolution > 0 ? prob.quad_resolution : rc.surface_resolution_for(prob.grid);
  return build_quadrature(prob.grid.dim(), lambda, res);
}

ScalarField scalar_wave(const FixedPointProblem& prob, const SphereDensity& h) {
  if (std::abs(h.lambda() - (prob.fourth ? prob.fourth->lambda1 : prob.lambda)) > 1e-12 * h.lambda() &&
      !(prob.fourth && std::abs(h.lambda() - prob.fourth->lambda2) <= 1e-12 * h.lambda()))
    throw std::invalid_argument("density lives on a sphere that does not match the operator");
  return *synthesize_scalar(h, quadrature_for(prob, h.lambda()), prob.grid).scalar;
}

}  // namespace

FixedPointMap::FixedPointMap(const FixedPointProblem& prob) : prob_(prob) {
  prob_.f.check();
  const Grid& g = prob_.grid;
  ResolventConfig rc = prob_.resolvent;
  switch (prob_.tag) {
    case ProblemTag::nlh:
    case ProblemTag::nlh_radial: {
      if (prob_.f.cls != AssumptionClass::A) throw std::invalid_argument("scalar problems need a class (A) nonlinearity");
      rc.lambda = prob_.lambda;
      helmholtz_.emplace(g, rc);
      wave_ = prob_.h ? scalar_wave(prob_, *prob_.h) : ScalarField::zeros(g);
      break;
    }
    case ProblemTag::fourth_order: {
      if (!prob_.fourth) throw std::invalid_argument("fourth-order problem needs (alpha, beta)");
      if (prob_.f.cls != AssumptionClass::A) throw std::invalid_argument("scalar problems need a class (A) nonlinearity");
      const FourthOrderSpec& sp = *prob_.fourth;
      prob_.lambda = sp.lambda1;
      fourth_.emplace(g, sp, rc);
      ScalarField w = prob_.h ? scalar_wave(prob_, *prob_.h) : ScalarField::zeros(g);
      if (prob_.h2) {
        if (sp.tag != FourthOrderCase::ii) {
          // no second sphere in case (i): only a vanishing density is meaningful
          for (const auto& c : prob_.h2->coefficients())
            if (c.abs().maxCoeff() > 0.0) throw std::invalid_argument("case (i) has no second sphere");
        } else {
          w = w + scalar_wave(prob_, *prob_.h2);
        }
      }
      wave_ = w;
      break;
    }
    case ProblemTag::curlcurl_cyl:
    case ProblemTag::curlcurl_general: {
      if (g.dim() != 3) throw std::invalid_argument("curl-curl problems need n = 3");
      if (prob_.tag == ProblemTag::curlcurl_cyl && prob_.f.cls != AssumptionClass::A_cyl)
        throw std::invalid_argument("cylindrical curl-curl needs a class (A') nonlinearity");
      if (prob_.tag == ProblemTag::curlcurl_general && prob_.f.cls != AssumptionClass::B)
        throw std::invalid_argument("general curl-curl needs a class (B) nonlinearity");
      rc.lambda = prob_.lambda;
      curlcurl_.emplace(g, rc);
      if (prob_.h) {
        if (prob_.h->kind() != DensityKind::tangential) throw std::invalid_argument("curl-curl needs a tangential density");
        wave_vec_ = *synthesize_vector(*prob_.h, quadrature_for(prob_, prob_.lambda), g).vector;
      } else {
        wave_vec_ = VectorField3::zeros(g);
      }
      break;
    }
  }
}

ScalarField FixedPointMap::source(const ScalarField& u) const { return apply_truncated(prob_.f, prob_.chi, u); }

VectorField3 FixedPointMap::source(const VectorField3& E) const {
  return prob_.truncated() ? apply_truncated(prob_.f, prob_.chi, E) : nlh::apply(prob_.f, E);
}

ScalarField FixedPointMap::resolve(const ScalarField& g) const {
  if (helmholtz_) return helmholtz_->real(g);
  return fourth_->apply(g);
}

VectorField3 FixedPointMap::resolve(const VectorField3& G) const { return curlcurl_->apply(G); }

ScalarField FixedPointMap::operator_image(const ScalarField& g) const {
  if (helmholtz_) return helmholtz_->operator_image(g);
  return fourth_->operator_image(g);
}

VectorField3 FixedPointMap::operator_image(const VectorField3& G) const { return curlcurl_->operator_image(G); }

ScalarField FixedPointMap::apply(const ScalarField& u) const {
  if (!wave_) throw std::invalid_argument("scalar map applied to a vector problem");
  return *wave_ + resolve(source(u));
}

VectorField3 FixedPointMap::apply(const VectorField3& E) const {
  if (!wave_vec_) throw std::invalid_argument("vector map applied to a scalar problem");
  return *wave_vec_ + resolve(source(E));
}

ScalarField apply_T_nlh(const ScalarField& u, const FixedPointProblem& prob) {
  if (prob.tag != ProblemTag::nlh && prob.tag != ProblemTag::nlh_radial)
    throw std::invalid_argument("apply_T_nlh needs a Helmholtz problem");
  return FixedPointMap(prob).apply(u);
}

ScalarField apply_T_fourth(const ScalarField& u, const FixedPointProblem& prob) {
  if (prob.tag != ProblemTag::fourth_order) throw std::invalid_argument("apply_T_fourth needs a fourth-order problem");
  return FixedPointMap(prob).apply(u);
}

VectorField3 apply_T_curlcurl(const VectorField3& E, const FixedPointProblem& prob) {
  if (!prob.is_vector()) throw std::invalid_argument("apply_T_curlcurl needs a curl-curl problem");
  return FixedPointMap(prob).apply(E);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "max_iter";
}

namespace {

double norm_q(const ScalarField& u, double q) { return lq_norm(u, q); }
double norm_q(const VectorField3& u, double q) { return lq_norm(u, q); }
double sup_of(const ScalarField& u) { return u.max_abs(); }
double sup_of(const VectorField3& u) { return u.magnitude().maxCoeff(); }
double sup_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }
double sup_diff(const VectorField3& a, const VectorField3& b) { return (a - b).magnitude().maxCoeff(); }

ScalarField zero_like(const FixedPointMap& m, const ScalarField*) { return ScalarField::zeros(m.problem().grid); }
VectorField3 zero_like(const FixedPointMap& m, const VectorField3*) { return VectorField3::zeros(m.problem().grid); }

ScalarField untruncated(const FixedPointProblem& p, const ScalarField& u) { return apply(p.f, u); }
VectorField3 untruncated(const FixedPointProblem& p, const VectorField3& E) { return apply(p.f, E); }

template <class Field>
void iterate(const FixedPointMap& map, double q, SolveResult& res, std::optional<Field>& out) {
  const FixedPointProblem& prob = map.problem();
  Field u = zero_like(map, static_cast<const Field*>(nullptr));
  int streak = 0;
  res.status = SolveStatus::max_iter;
  for (int k = 0; k < prob.max_iter; ++k) {
    Field next = map.apply(u);
    const double upd = norm_q(next - u, q);
    res.updates.push_back(upd);
    if (!std::isfinite(upd)) {
      res.status = SolveStatus::diverged;
      res.message = "non-finite iterate; reduce the density or the weight Q";
      u = next;
      break;
    }
    if (res.updates.size() >= 2) {
      // updates within a few thousand ulps of the iterate are roundoff, not contraction
      const double noise = 1e4 * std::numeric_limits<double>::epsilon() * norm_q(next, q);
      const double prev = res.updates[res.updates.size() - 2];
      if (prev > noise && upd > noise) {
        const double r = upd / prev;
        res.ratios.push_back(r);
        streak = r >= 1.0 ? streak + 1 : 0;
        if (streak >= 3) {
          res.status = SolveStatus::diverged;
          res.message = "update ratio >= 1 for 3 consecutive steps; reduce ||h|| or the weight Q";
          u = next;
          break;
        }
      }
    }
    u = next;
    if (upd < prob.tol) {
      res.status = SolveStatus::converged;
      res.iterations = k;
      break;
    }
    res.iterations = k + 1;
  }
  if (!res.ratios.empty()) {
    // each ratio is a two-point sample of the Lipschitz constant of T along the path
    res.contraction_ratio = *std::max_element(res.ratios.begin(), res.ratios.end());
  }
  res.sup_norm = sup_of(u);
  res.lq = norm_q(u, q);
  if (prob.truncated()) res.truncation_active = !(res.sup_norm < 0.5);
  if (res.status != SolveStatus::diverged) {
    const Field g = map.source(u);
    res.boundary_mass = boundary_mass_fraction(g);
    const Field again = map.apply(u);
    res.fixed_point_residual = norm_q(again - u, q);
    // the nonlinear part of u is resolve(g); the Herglotz part solves the homogeneous equation
    const Field rhs = res.truncation_active ? g : untruncated(prob, u);
    const double scale = sup_of(rhs);
    res.pde_residual = scale > 0.0 ? sup_diff(map.operator_image(g), rhs) / scale : 0.0;
  }
  out = u;
}

}  // namespace

SolveResult picard_solve(const FixedPointMap& map) {
  const FixedPointProblem& prob = map.problem();
  SolveResult res;
  const ExponentReport rep = exponent_report(prob.exponent_problem());
  if (!rep.nonempty) {
    res.status = SolveStatus::infeasible;
    res.message = rep.certificate;
    return res;
  }
  res.q = prob.q > 0.0 ? prob.q : rep.q;
  if (!rep.interval.contains(res.q)) {
    res.status = SolveStatus::infeasible;
    res.message = "q outside the admissible set: " + rep.certificate;
    return res;
  }
  try {
    if (prob.is_vector())
      iterate<VectorField3>(map, res.q, res, res.E);
    else
      iterate<ScalarField>(map, res.q, res, res.u);
  } catch (const std::runtime_error& e) {
    res.status = SolveStatus::diverged;
    res.message = e.what();
    return res;
  }
  if (res.truncation_active && res.converged())
    res.warnings.push_back("truncation active: the fixed point solves the truncated equation only");
  if (res.boundary_mass > kBoundaryWarn) res.warnings.push_back("nonlinear source reaches the box boundary");
  if (prob.rho > 0.0 && res.lq > prob.rho) res.warnings.push_back("iterate left the monitored L^q ball");
  return res;
}

SolveResult picard_solve(const FixedPointProblem& prob) { return picard_solve(FixedPointMap(prob)); }

double solution_distance(const SolveResult& a, const SolveResult& b, double q) {
  if (a.u && b.u) return lq_norm(*a.u - *b.u, q);
  if (a.E && b.E) return lq_norm(*a.E - *b.E, q);
  throw std::invalid_argument("solutions of different kinds");
}

ContinuityProbe continuity_in_h(const SolveResult& a, const SolveResult& b, const SphereDensity& h1,
                                const SphereDensity& h2) {
  if (!a.converged() || !b.converged()) throw std::invalid_argument("continuity probe needs converged solves");
  ContinuityProbe pr;
  pr.solution_distance = solution_distance(a, b, a.q);
  pr.density_distance = cm_norm_estimate(h1.plus(h2, -1.0), required_smoothness(h1.dim()));
  if (pr.density_distance == 0.0) {
    pr.degenerate = true;
    return pr;
  }
  pr.ratio = pr.solution_distance / pr.density_distance;
  return pr;
}

ContinuityProbe continuity_in_h(const FixedPointProblem& prob, const SphereDensity& h1, const SphereDensity& h2) {
  FixedPointProblem p1 = prob, p2 = prob;
  p1.h = h1;
  p2.h = h2;
  const SolveResult a = picard_solve(p1);
  const SolveResult b = picard_solve(p2);
  return continuity_in_h(a, b, h1, h2);
}

}  // namespace nlh
