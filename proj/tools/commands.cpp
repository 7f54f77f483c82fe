#include "commands.hpp"

#include "nlh/farfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace nlh::cli {

using io::fs::path;
using io::json;

namespace {

constexpr int kAssumptionSamples = 2000;

std::string fmt(double v, int digits = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string csv_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

path run_dir(const std::string& override_name, const std::string& configured) {
  return output_root() / (override_name.empty() ? configured : override_name);
}

int exit_code(const SolveResult& r) {
  if (!r.converged()) return kExitFailed;
  return r.warnings.empty() ? kExitOk : kExitWarnings;
}

std::string exponent_table(const ExponentReport& r) {
  std::ostringstream os;
  os << "problem      " << to_string(r.problem.tag) << "  n=" << r.problem.n << "  s=" << fmt(r.problem.s)
     << "  p=" << fmt(r.problem.p) << "  p~=" << fmt(r.problem.p_tilde) << "\n";
  os << "threshold    " << fmt(r.threshold) << "\n";
  os << "q-interval   (" << fmt(r.interval.lo) << ", " << fmt(r.interval.hi) << ")"
     << (r.nonempty ? "" : "  EMPTY") << "\n";
  if (r.nonempty) {
    os << "chosen q     " << fmt(r.q) << "\n";
    os << "t-window     [" << fmt(r.t_window.lo) << ", " << fmt(r.t_window.hi) << ")\n";
  }
  for (std::size_t i = 0; i < r.schedules.size(); ++i) {
    os << "schedule to " << fmt(r.targets[i]) << ":";
    for (const auto& st : r.schedules[i].steps) os << "  (t=" << fmt(st.t) << ", q=" << fmt(st.q) << ")";
    os << (r.schedules[i].reached ? "  reached" : "  stalled: " + r.schedules[i].stall) << "\n";
  }
  os << "certificate  " << r.certificate << "\n";
  return os.str();
}

json assumption_json(const AssumptionReport& a) {
  json j;
  j["samples"] = a.samples;
  j["growth_ratio"] = io::number(a.growth_ratio);
  j["lipschitz_ratio"] = io::number(a.lipschitz_ratio);
  j["passed"] = a.passed;
  if (!a.passed) {
    j["failure"] = a.failure;
    j["witness_x"] = {a.witness_x[0], a.witness_x[1], a.witness_x[2]};
    j["witness_z1"] = {a.witness_z1[0], a.witness_z1[1], a.witness_z1[2]};
    j["witness_z2"] = {a.witness_z2[0], a.witness_z2[1], a.witness_z2[2]};
  }
  return j;
}

void write_convergence_csv(const path& file, const SolveResult& r) {
  std::ostringstream os;
  os << "iteration,update,ratio\n";
  for (std::size_t k = 0; k < r.updates.size(); ++k) {
    os << k + 1 << ',' << csv_num(r.updates[k]) << ',';
    if (k > 0 && r.updates[k - 1] > 0.0) os << csv_num(r.updates[k] / r.updates[k - 1]);
    os << '\n';
  }
  io::write_text(file, os.str());
}

struct FarFieldSummary {
  std::vector<double> radii;
  std::vector<double> errors;
  std::optional<DecayFit> decay;
  json pattern;
};

FarFieldSummary far_field_summary(const ScalarField& u, const FixedPointProblem& prob, const RunConfig& cfg) {
  FarFieldSummary s;
  const FarFieldPattern pat = predicted_far_field(u, prob);
  for (double f : cfg.farfield.radii) s.radii.push_back(f * cfg.L);
  s.errors = verify_solution_far_field(u, pat, s.radii, cfg.farfield.mask);
  const double lo = std::max(cfg.farfield.mask > 0.0 ? cfg.farfield.mask : default_mask_radius(cfg.lambda), 0.25 * cfg.L);
  try {
    s.decay = decay_fit(u, lo, cfg.L - 2.0 * u.grid().spacing());
  } catch (const std::invalid_argument&) {
  }
  s.pattern = io::to_json(pat);
  return s;
}

void write_far_field(const path& dir, const FarFieldSummary& s) {
  std::ostringstream os;
  os << "R,shell_error\n";
  for (std::size_t i = 0; i < s.radii.size(); ++i) os << csv_num(s.radii[i]) << ',' << csv_num(s.errors[i]) << '\n';
  io::write_text(dir / "farfield.csv", os.str());
  io::write_json(dir / "pattern.json", s.pattern);
}

json far_field_json(const FarFieldSummary& s) {
  json j;
  j["radii"] = s.radii;
  json e = json::array();
  for (double v : s.errors) e.push_back(io::number(v));
  j["shell_errors"] = e;
  if (s.decay) {
    j["decay_exponent"] = s.decay->exponent;
    j["decay_constant"] = s.decay->constant;
    j["decay_points"] = s.decay->points;
  }
  return j;
}

struct RunOutcome {
  SolveResult result;
  std::optional<FixedPointProblem> problem;
  std::optional<SphereDensity> density;
  json record;
  int code = kExitFailed;
};

// exponents -> densities -> solve -> far field, artifacts under dir
RunOutcome run_pipeline(const RunConfig& cfg, const std::optional<std::vector<SphereDensity>>& dens, const path& dir,
                        std::uint64_t seed) {
  RunOutcome out;
  json rec;
  const ExponentProblem epr{cfg.problem, cfg.n, cfg.nonlinearity.s, cfg.nonlinearity.p, cfg.nonlinearity.p_tilde};
  ExponentReport rep;
  try {
    rep = exponent_report(epr, cfg.solver.q);
  } catch (const std::invalid_argument& e) {
    out.result.status = SolveStatus::infeasible;
    out.result.message = e.what();
  }
  if (out.result.message.empty()) {
    io::write_json(dir / "exponents.json", io::to_json(rep));
    rec["exponents"] = io::to_json(rep);
    if (!rep.nonempty) {
      out.result.status = SolveStatus::infeasible;
      out.result.message = rep.certificate;
    }
  }
  if (out.result.status != SolveStatus::infeasible) {
    rec["assumption"] = assumption_json(validate_assumption(cfg.nonlinearity, kAssumptionSamples, seed));
    FixedPointProblem prob = make_problem(cfg, dens);
    if (prob.h) out.density = *prob.h;
    FixedPointMap map(prob);
    out.result = picard_solve(map);
    const std::vector<SphereDensity> given = dens ? *dens : load_densities(cfg);
    bool projected = false;
    for (std::size_t i = 0; i < given.size() && i < 2; ++i) {
      const SphereDensity& used = i == 0 ? *prob.h : *prob.h2;
      for (std::size_t c = 0; c < used.coefficients().size(); ++c)
        projected = projected || (used.coefficients()[c] - given[i].coefficients()[c]).abs().maxCoeff() > 1e-14;
    }
    if (projected) out.result.warnings.push_back("density projected onto the Hermitian subspace h(-xi) = conj h(xi)");
    if (!rec["assumption"]["passed"].get<bool>())
      out.result.warnings.push_back("nonlinearity violates its assumption class on sampled points");
    if (map.herglotz()) io::write_field(dir / "herglotz", *map.herglotz());
    if (map.herglotz_vector()) io::write_field(dir / "herglotz", *map.herglotz_vector());
    out.problem = prob;
  }
  const SolveResult& r = out.result;
  RunConfig echo = cfg;
  if (r.q > 0.0) echo.solver.q = r.q;
  json cj = to_json(echo);
  cj["seed"] = seed;
  rec["config"] = cj;
  rec["result"] = io::to_json(r);
  if (r.u) {
    io::write_field(dir / "solution", *r.u);
    io::write_profile_csv(dir / "profile.csv", radial_profile(*r.u, cfg.farfield.profile_bins));
  }
  if (r.E) {
    io::write_field(dir / "solution", *r.E);
    io::write_profile_csv(dir / "profile.csv", radial_profile(r.E->magnitude(), r.E->grid(), cfg.farfield.profile_bins,
                                                              0.0, cfg.L));
    if (cfg.problem == ProblemTag::curlcurl_cyl) rec["cylindrical_defect"] = cylindrical_field_defect(*r.E);
  }
  if (!r.updates.empty()) write_convergence_csv(dir / "convergence.csv", r);
  if (r.converged() && r.u && (cfg.problem == ProblemTag::nlh || cfg.problem == ProblemTag::nlh_radial)) {
    const FarFieldSummary ff = far_field_summary(*r.u, *out.problem, cfg);
    write_far_field(dir, ff);
    rec["farfield"] = far_field_json(ff);
  }
  out.code = exit_code(r);
  rec["exit_code"] = out.code;
  io::write_json(dir / "result.json", rec);

  std::ostringstream md;
  md << "# Run " << dir.filename().string() << "\n\n";
  md << "| quantity | value |\n|---|---|\n";
  md << "| problem | " << to_string(cfg.problem) << " |\n";
  md << "| grid | n=" << cfg.n << ", L=" << fmt(cfg.L) << ", N=" << cfg.N << " |\n";
  md << "| status | " << to_string(r.status) << " |\n";
  md << "| q | " << fmt(r.q) << " |\n";
  md << "| iterations | " << r.iterations << " |\n";
  md << "| contraction ratio | " << fmt(r.contraction_ratio) << " |\n";
  md << "| fixed-point residual | " << fmt(r.fixed_point_residual) << " |\n";
  md << "| PDE residual | " << fmt(r.pde_residual) << " |\n";
  md << "| sup norm | " << fmt(r.sup_norm) << " |\n";
  md << "| exit code | " << out.code << " |\n";
  if (!r.message.empty()) md << "\n" << r.message << "\n";
  for (const auto& w : r.warnings) md << "\n- warning: " << w << "\n";
  io::write_text(dir / "report.md", md.str());
  out.record = rec;
  return out;
}

std::uint64_t effective_seed(const RunConfig& cfg, const Globals& g) { return g.seed ? *g.seed : cfg.seed; }

}  // namespace

path output_root() {
  const char* env = std::getenv("NLH_OUTPUT_ROOT");
  return env && *env ? path(env) : path(".");
}

int cmd_exponents(const ExponentsArgs& a, const Globals&) {
  ExponentProblem pr;
  double q = a.q;
  if (!a.config.empty()) {
    const RunConfig cfg = load_run_config(a.config);
    pr = {cfg.problem, cfg.n, cfg.nonlinearity.s, cfg.nonlinearity.p, cfg.nonlinearity.p_tilde};
    if (q <= 0.0) q = cfg.solver.q;
  } else {
    pr.tag = problem_tag_from_string(a.problem);
    pr.n = a.n;
    pr.s = io::to_number(json(a.s), "--s");
    pr.p = a.p;
    pr.p_tilde = a.p_tilde;
  }
  ExponentReport rep;
  try {
    rep = exponent_report(pr, q, a.targets);
  } catch (const std::invalid_argument& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::domain_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitFailed;
  }
  const json j = io::to_json(rep);
  if (!a.json_only) std::cout << exponent_table(rep) << "\n";
  std::cout << io::dump(j);
  if (!a.out.empty()) io::write_json(output_root() / a.out / "exponents.json", j);
  return rep.nonempty ? kExitOk : kExitFailed;
}

int cmd_herglotz(const HerglotzArgs& a, const Globals&) {
  const SphereDensity h = io::density_from_json(io::read_json(a.density), a.density);
  const Grid grid(h.dim(), a.L, a.N);
  ResolventConfig rc;
  rc.lambda = h.lambda();
  const int res = a.quad > 0 ? a.quad : rc.surface_resolution_for(grid);
  const SphereQuadrature quad = build_quadrature(h.dim(), h.lambda(), res);
  const HerglotzWave w =
      h.kind() == DensityKind::tangential ? synthesize_vector(h, quad, grid) : synthesize_scalar(h, quad, grid);
  const path dir = output_root() / a.out;
  std::vector<double> radii;
  for (double f : {0.25, 0.5, 0.75}) radii.push_back(f * a.L);
  const std::vector<double> err = verify_far_field(w, radii);
  std::ostringstream os;
  os << "R,shell_error\n";
  for (std::size_t i = 0; i < radii.size(); ++i) os << csv_num(radii[i]) << ',' << csv_num(err[i]) << '\n';
  io::write_text(dir / "farfield.csv", os.str());
  if (w.scalar) {
    io::write_field(dir / "field", *w.scalar);
    io::write_profile_csv(dir / "profile.csv", radial_profile(*w.scalar, 32));
  } else {
    io::write_field(dir / "field", *w.vector);
    io::write_profile_csv(dir / "profile.csv", radial_profile(w.vector->magnitude(), grid, 32, 0.0, a.L));
  }
  json j;
  j["density"] = io::to_json(h);
  j["grid"] = {{"n", grid.dim()}, {"L", a.L}, {"N", a.N}};
  j["quadrature_resolution"] = res;
  j["quadrature_nodes"] = quad.size();
  j["pde_residual"] = pde_residual(w);
  j["imag_ratio"] = w.imag_ratio;
  j["agmon_limit"] = agmon_shell_limit(h, quad);
  io::write_json(dir / "herglotz.json", j);
  std::cout << "wrote " << (dir / "field.bin").string() << "\n";
  return kExitOk;
}

int cmd_resolve(const ResolveArgs& a, const Globals&) {
  const io::FieldDump in = io::read_field(a.input);
  ResolventConfig rc;
  rc.lambda = a.lambda;
  rc.epsilon = a.epsilon;
  rc.source_radius = a.source_radius;
  rc.scheme = a.scheme == "regularized" ? DeltaScheme::regularized : DeltaScheme::pv_surface;
  json j;
  j["operator"] = a.op;
  j["scheme"] = a.scheme;
  const path out = output_root() / a.output;
  auto rel = [](const ScalarField& x, const ScalarField& y) { return (x - y).max_abs() / std::max(y.max_abs(), 1e-300); };
  if (a.op == "helmholtz" || a.op == "fourth") {
    if (!in.scalar) throw io::ConfigError("--input", "scalar operator needs a scalar dump");
    const ScalarField& f = *in.scalar;
    if (a.op == "helmholtz") {
      const HelmholtzResolvent R(in.grid, rc);
      ScalarField u = ScalarField::zeros(in.grid);
      if (a.scheme == "real")
        u = R.real(f);
      else if (a.scheme == "limit")
        u = R.regularized_limit(f);
      else if (a.scheme == "regularized")
        u = R.regularized(f, rc.epsilon_for(in.grid));
      else if (a.scheme == "pv_surface")
        u = R.complex(f);
      else
        throw io::ConfigError("--scheme", "expected pv_surface, regularized, limit or real");
      j["lambda"] = a.lambda;
      j["epsilon"] = a.scheme == "regularized" ? rc.epsilon_for(in.grid) : 0.0;
      j["inverse_residual"] = rel(R.operator_image(f), f);
      io::write_field(out, u);
    } else {
      if (!a.alpha || !a.beta) throw io::ConfigError("--alpha", "fourth-order operator needs --alpha and --beta");
      const FourthOrderSpec sp = FourthOrderSpec::make(*a.alpha, *a.beta);
      const FourthOrderResolvent R(in.grid, sp, rc);
      j["alpha"] = sp.alpha;
      j["beta"] = sp.beta;
      j["lambda1"] = sp.lambda1;
      j["lambda2"] = sp.lambda2;
      j["case"] = sp.tag == FourthOrderCase::i ? "i" : "ii";
      j["inverse_residual"] = rel(R.operator_image(f), f);
      io::write_field(out, R.apply(f));
    }
  } else if (a.op == "curlcurl") {
    if (!in.vector) throw io::ConfigError("--input", "curl-curl needs a three-component dump");
    const CurlCurlResolvent R(in.grid, rc);
    const VectorField3 img = R.operator_image(*in.vector);
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 3; ++c) {
      num = std::max(num, (img[c] - (*in.vector)[c]).max_abs());
      den = std::max(den, (*in.vector)[c].max_abs());
    }
    j["lambda"] = a.lambda;
    j["inverse_residual"] = num / std::max(den, 1e-300);
    io::write_field(out, R.apply(*in.vector));
  } else {
    throw io::ConfigError("--operator", "expected helmholtz, fourth or curlcurl");
  }
  io::fs::path meta = out;
  meta += ".resolve.json";
  io::write_json(meta, j);
  std::cout << io::dump(j);
  return kExitOk;
}

int cmd_solve(const SolveArgs& a, const Globals& g) {
  const RunConfig cfg = load_run_config(a.config);
  const path dir = run_dir(a.out, cfg.output);
  const RunOutcome r = run_pipeline(cfg, std::nullopt, dir, effective_seed(cfg, g));
  std::cout << to_string(r.result.status) << ": iterations " << r.result.iterations << ", contraction ratio "
            << fmt(r.result.contraction_ratio) << ", exit " << r.code << "\n";
  if (!r.result.message.empty()) std::cout << r.result.message << "\n";
  for (const auto& w : r.result.warnings) std::cout << "warning: " << w << "\n";
  return r.code;
}

int cmd_farfield(const FarFieldArgs& a, const Globals&) {
  const RunConfig cfg = load_run_config(a.config);
  if (cfg.problem != ProblemTag::nlh && cfg.problem != ProblemTag::nlh_radial)
    throw io::ConfigError("problem", "far-field patterns cover the Helmholtz problems");
  const io::FieldDump d = io::read_field(a.input);
  if (!d.scalar) throw io::ConfigError("--input", "expected a scalar solution dump");
  if (d.grid != cfg.grid()) throw io::ConfigError("grid", "dump grid differs from the config grid");
  const FixedPointProblem prob = make_problem(cfg);
  const FarFieldSummary s = far_field_summary(*d.scalar, prob, cfg);
  const path dir = run_dir(a.out, cfg.output);
  write_far_field(dir, s);
  json j = far_field_json(s);
  io::write_json(dir / "farfield.json", j);
  std::cout << io::dump(j);
  return kExitOk;
}

int cmd_sweep(const SolveArgs& a, const Globals& g) {
  const RunConfig cfg = load_run_config(a.config);
  const path dir = run_dir(a.out, cfg.output);
  const std::vector<SphereDensity> base = load_densities(cfg);
  // family members: scalings of the first density, then the listed extras
  std::vector<std::vector<SphereDensity>> family;
  std::vector<std::string> labels;
  std::vector<double> scales = cfg.sweep ? cfg.sweep->scales : std::vector<double>{};
  if (scales.empty() && !(cfg.sweep && !cfg.sweep->members.empty())) scales = {1.0};
  for (double t : scales) {
    if (base.empty()) throw io::ConfigError("densities", "a scaled sweep needs a density");
    std::vector<SphereDensity> m = base;
    m[0] = m[0].scaled(t);
    family.push_back(m);
    labels.push_back("scale " + fmt(t));
  }
  if (cfg.sweep)
    for (std::size_t i = 0; i < cfg.sweep->members.size(); ++i) {
      family.push_back({load_density_entry(cfg.sweep->members[i], cfg.base_dir,
                                           "sweep.members[" + std::to_string(i) + "]")});
      labels.push_back("member " + std::to_string(i));
    }
  const std::size_t M = family.size();
  std::vector<std::optional<RunOutcome>> outcomes(M);
  std::vector<std::string> errors(M);
  std::atomic<std::size_t> next{0};
  const std::uint64_t seed = effective_seed(cfg, g);
  auto worker = [&] {
    for (std::size_t k = next++; k < M; k = next++) {
      try {
        outcomes[k] = run_pipeline(cfg, family[k], dir / ("member_" + std::to_string(k)), seed);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int T = std::max(1, std::min<int>(g.threads, int(M)));
  std::vector<std::thread> pool;
  for (int t = 1; t < T; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // aggregation is sequential
  double q = 0.0;
  for (const auto& o : outcomes)
    if (o && o->result.converged()) {
      q = o->result.q;
      break;
    }
  json members = json::array();
  int ok = 0, warn = 0;
  std::optional<double> first_norm;
  for (std::size_t k = 0; k < M; ++k) {
    json m;
    m["index"] = k;
    m["label"] = labels[k];
    if (!outcomes[k]) {
      m["status"] = "error";
      m["message"] = errors[k];
    } else {
      const SolveResult& r = outcomes[k]->result;
      m["status"] = to_string(r.status);
      m["lq_norm"] = io::number(r.lq);
      m["contraction_ratio"] = io::number(r.contraction_ratio);
      m["exit_code"] = outcomes[k]->code;
      if (r.converged()) {
        ++ok;
        if (!r.warnings.empty()) ++warn;
        if (!first_norm && r.lq > 0.0) first_norm = r.lq;
        if (first_norm) m["norm_ratio_to_first"] = r.lq / *first_norm;
      }
    }
    members.push_back(m);
  }
  json dist = json::array();
  std::ostringstream csv;
  csv << "i,j,distance\n";
  for (std::size_t i = 0; i < M; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < M; ++k) {
      const bool both = outcomes[i] && outcomes[k] && outcomes[i]->result.converged() && outcomes[k]->result.converged();
      const double d = both ? solution_distance(outcomes[i]->result, outcomes[k]->result, q) : std::nan("");
      row.push_back(io::number(d));
      if (both) csv << i << ',' << k << ',' << csv_num(d) << '\n';
    }
    dist.push_back(row);
  }
  json cont = json::array();
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const auto& A = outcomes[i];
    const auto& B = outcomes[i + 1];
    if (!(A && B && A->result.converged() && B->result.converged() && A->density && B->density)) continue;
    try {
      const ContinuityProbe p = continuity_in_h(A->result, B->result, *A->density, *B->density);
      cont.push_back({{"pair", {i, i + 1}},
                      {"ratio", io::number(p.ratio)},
                      {"solution_distance", p.solution_distance},
                      {"density_distance", p.density_distance},
                      {"degenerate", p.degenerate}});
    } catch (const std::invalid_argument&) {
    }
  }
  json j;
  j["config"] = to_json(cfg);
  j["config"]["seed"] = seed;
  j["q"] = io::number(q);
  j["members"] = members;
  j["distances"] = dist;
  j["continuity"] = cont;
  io::write_json(dir / "sweep.json", j);
  io::write_text(dir / "distances.csv", csv.str());
  std::cout << ok << " of " << M << " members converged\n";
  if (ok == 0) return kExitFailed;
  return ok == int(M) && warn == 0 ? kExitOk : kExitWarnings;
}

int cmd_report(const ReportArgs& a, const Globals&) {
  const path root = a.dir.empty() ? output_root() : path(a.dir);
  if (!io::fs::is_directory(root)) throw io::ConfigError("--dir", "not a directory: " + root.string());
  std::vector<path> runs, sweeps;
  for (const auto& e : io::fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    if (e.path().filename() == "result.json") runs.push_back(e.path().parent_path());
    if (e.path().filename() == "sweep.json") sweeps.push_back(e.path().parent_path());
  }
  std::sort(runs.begin(), runs.end());
  std::sort(sweeps.begin(), sweeps.end());
  std::ostringstream csv, md;
  csv << "run,problem,status,q,iterations,contraction_ratio,fixed_point_residual,pde_residual,sup_norm,"
         "decay_exponent,farfield_first,farfield_last\n";
  md << "# Summary\n\n";
  std::vector<std::string> missing;
  if (runs.empty()) {
    md << "No runs found.\n";
  } else {
    md << "| run | problem | status | q | iterations | contraction | fixed-point residual | PDE residual | decay "
          "exponent | far-field trend |\n|---|---|---|---|---|---|---|---|---|---|\n";
  }
  for (const auto& r : runs) {
    const std::string name = io::fs::relative(r, root).generic_string();
    const json j = io::read_json(r / "result.json");
    const json& res = j.at("result");
    auto num = [](const json& v) { return io::to_number(v, "value"); };
    const std::string problem = j.at("config").at("problem").get<std::string>();
    const std::string status = res.at("status").get<std::string>();
    std::string decay, first, last, trend = "-";
    if (j.contains("farfield")) {
      const json& f = j["farfield"];
      if (f.contains("decay_exponent")) decay = fmt(num(f["decay_exponent"]));
      const json& e = f["shell_errors"];
      if (!e.empty()) {
        first = fmt(num(e.front()));
        last = fmt(num(e.back()));
        trend = first + " -> " + last;
      }
    }
    csv << name << ',' << problem << ',' << status << ',' << csv_num(num(res["q"])) << ',' << res["iterations"] << ','
        << csv_num(num(res["contraction_ratio"])) << ',' << csv_num(num(res["fixed_point_residual"])) << ','
        << csv_num(num(res["pde_residual"])) << ',' << csv_num(num(res["sup_norm"])) << ',' << decay << ',' << first
        << ',' << last << '\n';
    md << "| " << name << " | " << problem << " | " << status << " | " << fmt(num(res["q"])) << " | "
       << res["iterations"] << " | " << fmt(num(res["contraction_ratio"])) << " | "
       << fmt(num(res["fixed_point_residual"])) << " | " << fmt(num(res["pde_residual"])) << " | "
       << (decay.empty() ? "-" : decay) << " | " << trend << " |\n";
    if (status == "converged") {
      for (const char* f : {"solution.json", "solution.bin", "convergence.csv", "profile.csv"})
        if (!io::fs::exists(r / f)) missing.push_back(name + "/" + f);
      if ((problem == "nlh" || problem == "nlh-radial") && !io::fs::exists(r / "farfield.csv"))
        missing.push_back(name + "/farfield.csv");
    }
  }
  for (const auto& s : sweeps) {
    const std::string name = io::fs::relative(s, root).generic_string();
    const json j = io::read_json(s / "sweep.json");
    std::ostringstream heat;
    heat << "i,j,distance\n";
    const json& d = j.at("distances");
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t k = 0; k < d[i].size(); ++k)
        if (d[i][k].is_number()) heat << i << ',' << k << ',' << csv_num(d[i][k].get<double>()) << '\n';
    const std::string file = (name == "." ? std::string("sweep") : name) + "_heatmap.csv";
    std::string flat = file;
    std::replace(flat.begin(), flat.end(), '/', '_');
    io::write_text(root / flat, heat.str());
    md << "\nSweep " << name << ": " << j.at("members").size() << " members, distances in " << flat << "\n";
  }
  if (!missing.empty()) {
    md << "\n## Missing artifacts\n\n";
    for (const auto& m : missing) md << "- " << m << "\n";
  }
  io::write_text(root / "summary.csv", csv.str());
  io::write_text(root / "report.md", md.str());
  std::cout << md.str();
  return kExitOk;
}

}  // namespace nlh::cli
