#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace nlh::cli;
  CLI::App app{"Nonlinear Helmholtz solver: Herglotz waves, outgoing resolvents, Picard iteration"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "seed for the randomized assumption probes");
  app.add_option("--threads", g.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);

  ExponentsArgs ea;
  auto* ex = app.add_subcommand("exponents", "admissible Lebesgue exponents and bootstrap schedules");
  ex->add_option("--config", ea.config, "run config to read the problem from");
  ex->add_option("--problem", ea.problem, "nlh | nlh-radial | fourth-order | curlcurl-cyl | curlcurl-general");
  ex->add_option("--n", ea.n, "dimension")->check(CLI::IsMember({2, 3}));
  ex->add_option("--s", ea.s, "integrability of Q, a number or inf");
  ex->add_option("--p", ea.p, "growth exponent");
  ex->add_option("--p-tilde", ea.p_tilde, "second growth exponent (general curl-curl)");
  ex->add_option("--q", ea.q, "requested q; default picks one");
  ex->add_option("--target", ea.targets, "bootstrap targets");
  ex->add_flag("--json", ea.json_only, "print only the JSON report");
  ex->add_option("--out", ea.out, "also write exponents.json under this run directory");

  HerglotzArgs ha;
  auto* he = app.add_subcommand("herglotz", "synthesize a Herglotz wave from a density file");
  he->add_option("--density", ha.density, "density JSON")->required();
  he->add_option("--L", ha.L, "box half-width")->check(CLI::PositiveNumber);
  he->add_option("--N", ha.N, "points per axis")->check(CLI::PositiveNumber);
  he->add_option("--quad", ha.quad, "sphere quadrature resolution");
  he->add_option("--out", ha.out, "run directory under the output root");

  ResolveArgs ra;
  auto* re = app.add_subcommand("resolve", "apply an outgoing resolvent to a field dump");
  re->add_option("--operator", ra.op, "helmholtz | fourth | curlcurl");
  re->add_option("--scheme", ra.scheme, "pv_surface | regularized | limit | real");
  re->add_option("--epsilon", ra.epsilon, "regularization for the regularized scheme");
  re->add_option("--lambda", ra.lambda, "spectral parameter")->check(CLI::PositiveNumber);
  re->add_option("--alpha", ra.alpha, "fourth-order alpha");
  re->add_option("--beta", ra.beta, "fourth-order beta");
  re->add_option("--source-radius", ra.source_radius, "radius of a ball holding the source");
  re->add_option("--input", ra.input, "input dump (path without extension)")->required();
  re->add_option("--output", ra.output, "output dump under the output root");

  SolveArgs sa;
  auto* so = app.add_subcommand("solve", "run the full pipeline for one config");
  so->add_option("--config", sa.config, "run config JSON")->required();
  so->add_option("--out", sa.out, "run directory under the output root");

  FarFieldArgs fa;
  auto* ff = app.add_subcommand("farfield", "far-field pattern and shell errors of a solution dump");
  ff->add_option("--config", fa.config, "run config JSON")->required();
  ff->add_option("--input", fa.input, "solution dump (path without extension)")->required();
  ff->add_option("--out", fa.out, "run directory under the output root");

  SolveArgs wa;
  auto* sw = app.add_subcommand("sweep", "solve a family of densities");
  sw->add_option("--config", wa.config, "run config JSON with a sweep block")->required();
  sw->add_option("--out", wa.out, "run directory under the output root");

  ReportArgs pa;
  auto* rp = app.add_subcommand("report", "summarize the runs below a directory");
  rp->add_option("--dir", pa.dir, "results directory; default is the output root");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed;

  try {
    if (*ex) return cmd_exponents(ea, g);
    if (*he) return cmd_herglotz(ha, g);
    if (*re) return cmd_resolve(ra, g);
    if (*so) return cmd_solve(sa, g);
    if (*ff) return cmd_farfield(fa, g);
    if (*sw) return cmd_sweep(wa, g);
    if (*rp) return cmd_report(pa, g);
  } catch (const nlh::io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
