#include "nlh/config.hpp"

namespace nlh {

using io::ConfigError;
using io::json;

namespace {

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(path.empty() ? key : path + "." + key, "missing");
  return j.at(key);
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError(path.empty() ? k : path + "." + k, "unknown field");
  }
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(io::to_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["problem"] = to_string(c.problem);
  j["grid"] = {{"n", c.n}, {"L", c.L}, {"N", c.N}};
  if (c.problem == ProblemTag::fourth_order) {
    j["alpha"] = c.alpha.value_or(0.0);
    j["beta"] = c.beta.value_or(0.0);
  } else {
    j["lambda"] = c.lambda;
  }
  j["densities"] = c.densities;
  j["nonlinearity"] = io::to_json(c.nonlinearity);
  j["resolvent"] = io::to_json(c.resolvent);
  json s;
  if (c.solver.q > 0.0)
    s["q"] = c.solver.q;
  else
    s["q"] = "auto";
  s["tol"] = c.solver.tol;
  s["max_iter"] = c.solver.max_iter;
  s["rho"] = c.solver.rho;
  s["quad_resolution"] = c.solver.quad_resolution;
  j["solver"] = s;
  j["farfield"] = {{"radii", c.farfield.radii}, {"mask", c.farfield.mask}, {"profile_bins", c.farfield.profile_bins}};
  if (c.sweep) j["sweep"] = {{"scales", c.sweep->scales}, {"members", c.sweep->members}};
  j["output"] = c.output;
  j["seed"] = c.seed;
  return j;
}

RunConfig run_config_from_json(const json& j, const io::fs::path& base_dir) {
  check_keys(j, "", {"schema_version", "problem", "grid", "lambda", "alpha", "beta", "densities", "nonlinearity",
                     "resolvent", "solver", "farfield", "sweep", "output", "seed"});
  RunConfig c;
  c.base_dir = base_dir;
  c.schema_version = as_int(need(j, "", "schema_version"), "schema_version");
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported version " + std::to_string(c.schema_version));
  const json& tag = need(j, "", "problem");
  if (!tag.is_string()) throw ConfigError("problem", "expected a string");
  try {
    c.problem = problem_tag_from_string(tag.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("problem", e.what());
  }
  const json& g = need(j, "", "grid");
  check_keys(g, "grid", {"n", "L", "N"});
  c.n = as_int(need(g, "grid", "n"), "grid.n");
  c.L = io::to_number(need(g, "grid", "L"), "grid.L");
  c.N = as_int(need(g, "grid", "N"), "grid.N");
  if (c.n != 2 && c.n != 3) throw ConfigError("grid.n", "expected 2 or 3");
  if (!(c.L > 0.0)) throw ConfigError("grid.L", "must be positive");
  if (c.N < 8 || c.N % 2) throw ConfigError("grid.N", "must be even and at least 8");
  if (c.problem == ProblemTag::fourth_order) {
    c.alpha = io::to_number(need(j, "", "alpha"), "alpha");
    c.beta = io::to_number(need(j, "", "beta"), "beta");
    try {
      c.lambda = FourthOrderSpec::make(*c.alpha, *c.beta).lambda1;
    } catch (const std::invalid_argument& e) {
      throw ConfigError("alpha", e.what());
    }
  } else {
    c.lambda = io::to_number(need(j, "", "lambda"), "lambda");
    if (!(c.lambda > 0.0)) throw ConfigError("lambda", "must be positive");
  }
  if (j.contains("densities")) {
    const json& d = j["densities"];
    if (!d.is_array()) throw ConfigError("densities", "expected an array");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::string p = "densities[" + std::to_string(i) + "]";
      if (!d[i].is_string() && !d[i].is_object()) throw ConfigError(p, "expected a file name or a density object");
      if (d[i].is_string() && !io::fs::exists(base_dir / d[i].get<std::string>()))
        throw ConfigError(p, "file not found: " + d[i].get<std::string>());
      c.densities.push_back(d[i]);
    }
    if (c.densities.size() > 2) throw ConfigError("densities", "at most two densities");
  }
  c.nonlinearity = io::nonlinearity_from_json(need(j, "", "nonlinearity"), "nonlinearity", base_dir);
  if (j.contains("resolvent")) c.resolvent = io::resolvent_from_json(j["resolvent"], "resolvent");
  c.resolvent.lambda = c.lambda;
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, "solver", {"q", "tol", "max_iter", "rho", "quad_resolution"});
    if (s.contains("q")) {
      if (s["q"].is_string() && s["q"].get<std::string>() == "auto")
        c.solver.q = 0.0;
      else
        c.solver.q = io::to_number(s["q"], "solver.q");
      if (c.solver.q < 0.0) throw ConfigError("solver.q", "must be positive or \"auto\"");
    }
    if (s.contains("tol")) c.solver.tol = io::to_number(s["tol"], "solver.tol");
    if (s.contains("max_iter")) c.solver.max_iter = as_int(s["max_iter"], "solver.max_iter");
    if (s.contains("rho")) c.solver.rho = io::to_number(s["rho"], "solver.rho");
    if (s.contains("quad_resolution")) c.solver.quad_resolution = as_int(s["quad_resolution"], "solver.quad_resolution");
    if (!(c.solver.tol > 0.0)) throw ConfigError("solver.tol", "must be positive");
    if (c.solver.max_iter < 1) throw ConfigError("solver.max_iter", "must be at least 1");
  }
  if (j.contains("farfield")) {
    const json& f = j["farfield"];
    check_keys(f, "farfield", {"radii", "mask", "profile_bins"});
    if (f.contains("radii")) c.farfield.radii = number_list(f["radii"], "farfield.radii");
    if (f.contains("mask")) c.farfield.mask = io::to_number(f["mask"], "farfield.mask");
    if (f.contains("profile_bins")) c.farfield.profile_bins = as_int(f["profile_bins"], "farfield.profile_bins");
    for (double r : c.farfield.radii)
      if (!(r > 0.0 && r <= 1.0)) throw ConfigError("farfield.radii", "fractions of L must lie in (0, 1]");
    if (c.farfield.profile_bins < 1) throw ConfigError("farfield.profile_bins", "must be positive");
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep", {"scales", "members"});
    SweepSettings sw;
    if (s.contains("scales")) sw.scales = number_list(s["scales"], "sweep.scales");
    if (s.contains("members")) {
      if (!s["members"].is_array()) throw ConfigError("sweep.members", "expected an array");
      for (const auto& m : s["members"]) sw.members.push_back(m);
    }
    c.sweep = sw;
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("output", "expected a string");
    c.output = j["output"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  return c;
}

RunConfig load_run_config(const io::fs::path& file) {
  return run_config_from_json(io::read_json(file), file.parent_path());
}

SphereDensity load_density_entry(const json& entry, const io::fs::path& base_dir, const std::string& path) {
  if (entry.is_string()) return io::density_from_json(io::read_json(base_dir / entry.get<std::string>()), path);
  return io::density_from_json(entry, path);
}

std::vector<SphereDensity> load_densities(const RunConfig& c) {
  std::vector<SphereDensity> out;
  for (std::size_t i = 0; i < c.densities.size(); ++i)
    out.push_back(load_density_entry(c.densities[i], c.base_dir, "densities[" + std::to_string(i) + "]"));
  return out;
}

FixedPointProblem make_problem(const RunConfig& c, const std::optional<std::vector<SphereDensity>>& dens) {
  FixedPointProblem p;
  p.tag = c.problem;
  p.grid = c.grid();
  p.lambda = c.lambda;
  if (c.problem == ProblemTag::fourth_order) p.fourth = FourthOrderSpec::make(*c.alpha, *c.beta);
  const std::vector<SphereDensity> d = dens ? *dens : load_densities(c);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i].dim() != c.n)
      throw ConfigError("densities[" + std::to_string(i) + "]", "density dimension differs from grid.n");
  // real solutions need h(-xi) = conj h(xi)
  if (!d.empty()) p.h = hermitian_filter(d[0]);
  if (d.size() > 1) p.h2 = hermitian_filter(d[1]);
  p.f = c.nonlinearity;
  p.resolvent = c.resolvent;
  p.quad_resolution = c.solver.quad_resolution;
  p.q = c.solver.q;
  p.rho = c.solver.rho;
  p.max_iter = c.solver.max_iter;
  p.tol = c.solver.tol;
  return p;
}

}  // namespace nlh
