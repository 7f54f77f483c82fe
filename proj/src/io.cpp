#include "nlh/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlh::io {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace {

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

fs::path with_suffix(const fs::path& base, const char* ext) {
  fs::path p = base;
  p += ext;
  return p;
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
}

void append_values(std::vector<double>& buf, const ScalarField& f, bool real) {
  for (Eigen::Index i = 0; i < f.grid().size(); ++i) {
    buf.push_back(f[i].real());
    if (!real) buf.push_back(f[i].imag());
  }
}

void write_dump(const fs::path& base, const Grid& g, const std::vector<const ScalarField*>& comps) {
  bool real = true;
  for (auto* c : comps) real = real && c->is_real();
  std::vector<double> buf;
  buf.reserve(std::size_t(g.size()) * comps.size() * (real ? 1 : 2));
  for (auto* c : comps) append_values(buf, *c, real);
  ensure_parent(base);
  std::ofstream out(with_suffix(base, ".bin"), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + with_suffix(base, ".bin").string());
  write_doubles(out, buf);
  json side;
  side["dim"] = g.dim();
  side["L"] = g.half_extent();
  side["N"] = g.points_per_dim();
  side["reality"] = real ? "real" : "complex";
  side["component_count"] = comps.size();
  side["byte_order"] = "little";
  write_json(with_suffix(base, ".json"), side);
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing");
  return j.at(key);
}

int to_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::string to_str(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

json complex_list(const ComplexArray& c) {
  json a = json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) a.push_back({c[i].real(), c[i].imag()});
  return a;
}

ComplexArray complex_from_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of [re, im] pairs");
  ComplexArray c(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw ConfigError(p, "expected [re, im]");
    c[Eigen::Index(i)] = Complex(to_number(j[i][0], p + "[0]"), to_number(j[i][1], p + "[1]"));
  }
  return c;
}

const char* kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::gaussian: return "gaussian";
    case WeightKind::bump: return "bump";
    case WeightKind::constant: return "constant";
    case WeightKind::field: return "field";
  }
  return "constant";
}

const char* class_name(AssumptionClass c) {
  switch (c) {
    case AssumptionClass::A: return "A";
    case AssumptionClass::A_cyl: return "A'";
    case AssumptionClass::B: return "B";
  }
  return "A";
}

const char* form_name(NonlinearForm f) {
  switch (f) {
    case NonlinearForm::power: return "power";
    case NonlinearForm::saturated: return "saturated";
    case NonlinearForm::tabulated: return "tabulated";
  }
  return "power";
}

// Gamma and P are plain numbers when constant
json scalar_weight(const Weight& w) {
  if (w.kind == WeightKind::constant) return number(w.amplitude);
  return to_json(w);
}

Weight scalar_weight_from_json(const json& j, const std::string& path, const fs::path& base_dir) {
  if (j.is_number() || j.is_string()) return Weight::constant(to_number(j, path));
  return weight_from_json(j, path, base_dir);
}

}  // namespace

void write_field(const fs::path& base, const ScalarField& f) { write_dump(base, f.grid(), {&f}); }

void write_field(const fs::path& base, const VectorField3& E) {
  write_dump(base, E.grid(), {&E[0], &E[1], &E[2]});
}

FieldDump read_field(const fs::path& base) {
  const json side = read_json(with_suffix(base, ".json"));
  const std::string sp = with_suffix(base, ".json").string();
  const int dim = to_int(member(side, sp, "dim"), sp + ".dim");
  const double L = to_number(member(side, sp, "L"), sp + ".L");
  const int N = to_int(member(side, sp, "N"), sp + ".N");
  const std::string reality = to_str(member(side, sp, "reality"), sp + ".reality");
  const int comps = to_int(member(side, sp, "component_count"), sp + ".component_count");
  if (to_str(member(side, sp, "byte_order"), sp + ".byte_order") != "little")
    throw ConfigError(sp + ".byte_order", "only little-endian dumps are supported");
  if (reality != "real" && reality != "complex") throw ConfigError(sp + ".reality", "expected real or complex");
  if (comps != 1 && comps != 3) throw ConfigError(sp + ".component_count", "expected 1 or 3");
  FieldDump d;
  d.grid = Grid(dim, L, N);
  const bool real = reality == "real";
  const std::size_t per = std::size_t(d.grid.size()) * (real ? 1 : 2);
  std::vector<double> buf(per * comps);
  std::ifstream in(with_suffix(base, ".bin"), std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + with_suffix(base, ".bin").string());
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size() * sizeof(double)));
  if (std::size_t(in.gcount()) != buf.size() * sizeof(double) || in.peek() != std::char_traits<char>::eof())
    throw std::runtime_error(with_suffix(base, ".bin").string() + ": size does not match the sidecar");
  auto component = [&](int c) {
    ComplexArray v(d.grid.size());
    const double* src = buf.data() + c * per;
    for (Eigen::Index i = 0; i < d.grid.size(); ++i)
      v[i] = real ? Complex(src[i], 0.0) : Complex(src[2 * i], src[2 * i + 1]);
    return ScalarField(d.grid, std::move(v));
  };
  if (comps == 1)
    d.scalar = component(0);
  else
    d.vector = VectorField3(component(0), component(1), component(2));
  return d;
}

void write_profile_csv(const fs::path& file, const std::vector<RadialBin>& bins) {
  std::ostringstream os;
  os.precision(17);
  os << "radius,mean_abs,max_abs\n";
  for (const auto& b : bins) os << b.radius << ',' << b.mean_abs << ',' << b.max_abs << '\n';
  write_text(file, os.str());
}

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double to_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "Infinity") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  throw ConfigError(path, "expected a number");
}

json to_json(const SphereDensity& h) {
  json j;
  if (h.kind() == DensityKind::tangential)
    j["kind"] = "tangential";
  else
    j["kind"] = h.dim() == 2 ? "circle" : "harmonics";
  j["n"] = h.dim();
  j["lambda"] = h.lambda();
  j[h.dim() == 2 ? "k_max" : "l_max"] = h.degree();
  if (h.kind() == DensityKind::tangential) {
    json c = json::array();
    for (const auto& a : h.coefficients()) c.push_back(complex_list(a));
    j["coefficients"] = c;
  } else {
    j["coefficients"] = complex_list(h.coefficients()[0]);
  }
  j["declared_m"] = h.declared_m;
  j["declared_delta"] = h.declared_delta;
  return j;
}

SphereDensity density_from_json(const json& j, const std::string& path) {
  const std::string kind = to_str(member(j, path, "kind"), path + ".kind");
  const int n = to_int(member(j, path, "n"), path + ".n");
  const double lambda = to_number(member(j, path, "lambda"), path + ".lambda");
  if (!(lambda > 0.0)) throw ConfigError(path + ".lambda", "must be positive");
  const json& coeffs = member(j, path, "coefficients");
  const std::string cp = path + ".coefficients";
  std::optional<SphereDensity> h;
  try {
    if (kind == "circle") {
      if (n != 2) throw ConfigError(path + ".n", "circle densities need n = 2");
      const int K = to_int(member(j, path, "k_max"), path + ".k_max");
      ComplexArray c = complex_from_list(coeffs, cp);
      if (c.size() != 2 * K + 1) throw ConfigError(cp, "expected 2 k_max + 1 coefficients");
      h = SphereDensity::circle(lambda, std::move(c));
    } else if (kind == "harmonics") {
      if (n != 3) throw ConfigError(path + ".n", "harmonic densities need n = 3");
      const int l = to_int(member(j, path, "l_max"), path + ".l_max");
      h = SphereDensity::harmonics(lambda, l, complex_from_list(coeffs, cp));
    } else if (kind == "tangential") {
      if (n != 3) throw ConfigError(path + ".n", "tangential densities need n = 3");
      const int l = to_int(member(j, path, "l_max"), path + ".l_max");
      if (!coeffs.is_array() || coeffs.size() != 3) throw ConfigError(cp, "expected three component lists");
      h = SphereDensity::tangential(lambda, l,
                                    {complex_from_list(coeffs[0], cp + "[0]"), complex_from_list(coeffs[1], cp + "[1]"),
                                     complex_from_list(coeffs[2], cp + "[2]")});
    } else {
      throw ConfigError(path + ".kind", "expected circle, harmonics or tangential");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cp, e.what());
  }
  if (j.contains("declared_m")) h->declared_m = to_int(j["declared_m"], path + ".declared_m");
  if (j.contains("declared_delta")) h->declared_delta = to_number(j["declared_delta"], path + ".declared_delta");
  return *h;
}

json to_json(const Weight& w) {
  json j;
  j["kind"] = kind_name(w.kind);
  json p;
  p["amplitude"] = w.amplitude;
  if (w.kind == WeightKind::gaussian || w.kind == WeightKind::bump) p["width"] = w.width;
  if (w.kind == WeightKind::field) p["file"] = w.file;
  j["params"] = p;
  return j;
}

Weight weight_from_json(const json& j, const std::string& path, const fs::path& base_dir) {
  const std::string kind = to_str(member(j, path, "kind"), path + ".kind");
  const json empty = json::object();
  const json& p = j.contains("params") ? j["params"] : empty;
  const std::string pp = path + ".params";
  if (!p.is_object()) throw ConfigError(pp, "expected an object");
  const double a = p.contains("amplitude") ? to_number(p["amplitude"], pp + ".amplitude") : 1.0;
  if (!(a >= 0.0)) throw ConfigError(pp + ".amplitude", "must be nonnegative");
  auto width = [&] {
    const double w = to_number(member(p, pp, "width"), pp + ".width");
    if (!(w > 0.0)) throw ConfigError(pp + ".width", "must be positive");
    return w;
  };
  if (kind == "constant") return Weight::constant(a);
  if (kind == "gaussian") return Weight::gaussian(a, width());
  if (kind == "bump") return Weight::bump(a, width());
  if (kind == "field") {
    const std::string file = to_str(member(p, pp, "file"), pp + ".file");
    FieldDump d = read_field(base_dir / file);
    if (!d.scalar) throw ConfigError(pp + ".file", "weight dump must be scalar");
    Weight w;
    try {
      w = Weight::sampled(*d.scalar);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(pp + ".file", e.what());
    }
    w.amplitude = a;
    w.file = file;
    return w;
  }
  throw ConfigError(path + ".kind", "expected gaussian, bump, constant or field");
}

json to_json(const NonlinearitySpec& f) {
  json j;
  j["class"] = class_name(f.cls);
  j["form"] = form_name(f.form);
  j["p"] = f.p;
  j["p_tilde"] = f.p_tilde;
  j["s"] = number(f.s);
  if (f.form_exponent > 0.0) j["exponent"] = f.form_exponent;
  j["Q"] = to_json(f.Q);
  j["delta"] = f.delta;
  j["Gamma"] = scalar_weight(f.Gamma);
  j["P"] = scalar_weight(f.P);
  if (f.form == NonlinearForm::tabulated) {
    json t = json::array();
    for (const auto& [x, y] : f.table) t.push_back({x, y});
    j["table"] = t;
  }
  return j;
}

NonlinearitySpec nonlinearity_from_json(const json& j, const std::string& path, const fs::path& base_dir) {
  NonlinearitySpec f;
  const std::string cls = to_str(member(j, path, "class"), path + ".class");
  if (cls == "A")
    f.cls = AssumptionClass::A;
  else if (cls == "A'" || cls == "A_cyl")
    f.cls = AssumptionClass::A_cyl;
  else if (cls == "B")
    f.cls = AssumptionClass::B;
  else
    throw ConfigError(path + ".class", "expected A, A' or B");
  const std::string form = j.contains("form") ? to_str(j["form"], path + ".form") : "power";
  if (form == "power")
    f.form = NonlinearForm::power;
  else if (form == "saturated")
    f.form = NonlinearForm::saturated;
  else if (form == "tabulated")
    f.form = NonlinearForm::tabulated;
  else
    throw ConfigError(path + ".form", "expected power, saturated or tabulated");
  f.p = to_number(member(j, path, "p"), path + ".p");
  if (j.contains("p_tilde")) f.p_tilde = to_number(j["p_tilde"], path + ".p_tilde");
  if (j.contains("s")) f.s = to_number(j["s"], path + ".s");
  if (j.contains("exponent")) f.form_exponent = to_number(j["exponent"], path + ".exponent");
  if (j.contains("Q")) f.Q = weight_from_json(j["Q"], path + ".Q", base_dir);
  if (j.contains("delta")) f.delta = to_number(j["delta"], path + ".delta");
  if (j.contains("Gamma")) f.Gamma = scalar_weight_from_json(j["Gamma"], path + ".Gamma", base_dir);
  if (j.contains("P")) f.P = scalar_weight_from_json(j["P"], path + ".P", base_dir);
  if (j.contains("table")) {
    const json& t = j["table"];
    if (!t.is_array()) throw ConfigError(path + ".table", "expected [t, phi] pairs");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string tp = path + ".table[" + std::to_string(i) + "]";
      if (!t[i].is_array() || t[i].size() != 2) throw ConfigError(tp, "expected [t, phi]");
      f.table.emplace_back(to_number(t[i][0], tp + "[0]"), to_number(t[i][1], tp + "[1]"));
    }
  }
  try {
    f.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return f;
}

json to_json(const ResolventConfig& c) {
  json j;
  j["scheme"] = c.scheme == DeltaScheme::pv_surface ? "pv_surface" : "regularized";
  j["epsilon"] = c.epsilon;
  j["surface_resolution"] = c.surface_resolution;
  j["source_radius"] = c.source_radius;
  j["richardson_epsilon"] = c.richardson_epsilon;
  j["richardson_levels"] = c.richardson_levels;
  return j;
}

ResolventConfig resolvent_from_json(const json& j, const std::string& path) {
  ResolventConfig c;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("scheme")) {
    const std::string s = to_str(j["scheme"], path + ".scheme");
    if (s == "pv_surface")
      c.scheme = DeltaScheme::pv_surface;
    else if (s == "regularized")
      c.scheme = DeltaScheme::regularized;
    else
      throw ConfigError(path + ".scheme", "expected pv_surface or regularized");
  }
  if (j.contains("epsilon")) c.epsilon = to_number(j["epsilon"], path + ".epsilon");
  if (j.contains("surface_resolution"))
    c.surface_resolution = to_int(j["surface_resolution"], path + ".surface_resolution");
  if (j.contains("source_radius")) c.source_radius = to_number(j["source_radius"], path + ".source_radius");
  if (j.contains("richardson_epsilon"))
    c.richardson_epsilon = to_number(j["richardson_epsilon"], path + ".richardson_epsilon");
  if (j.contains("richardson_levels"))
    c.richardson_levels = to_int(j["richardson_levels"], path + ".richardson_levels");
  if (c.epsilon < 0.0) throw ConfigError(path + ".epsilon", "must be nonnegative");
  if (c.source_radius < 0.0) throw ConfigError(path + ".source_radius", "must be nonnegative");
  if (c.richardson_levels < 1) throw ConfigError(path + ".richardson_levels", "must be at least 1");
  return c;
}

json to_json(const Interval& iv) { return {{"lo", number(iv.lo)}, {"hi", number(iv.hi)}}; }

json to_json(const ExponentReport& r) {
  json j;
  j["problem"] = to_string(r.problem.tag);
  j["n"] = r.problem.n;
  j["s"] = number(r.problem.s);
  j["p"] = r.problem.p;
  j["p_tilde"] = r.problem.p_tilde;
  j["threshold"] = number(r.threshold);
  j["interval"] = to_json(r.interval);
  j["nonempty"] = r.nonempty;
  j["q"] = number(r.q);
  j["t_window"] = to_json(r.t_window);
  json sched = json::array();
  for (std::size_t i = 0; i < r.schedules.size(); ++i) {
    json s;
    s["target"] = number(i < r.targets.size() ? r.targets[i] : 0.0);
    json steps = json::array();
    for (const auto& st : r.schedules[i].steps) steps.push_back({number(st.t), number(st.q)});
    s["steps"] = steps;
    s["reached"] = r.schedules[i].reached;
    if (!r.schedules[i].stall.empty()) s["stall"] = r.schedules[i].stall;
    sched.push_back(s);
  }
  j["schedules"] = sched;
  j["certificate"] = r.certificate;
  return j;
}

json to_json(const SolveResult& r) {
  json j;
  j["status"] = to_string(r.status);
  j["q"] = number(r.q);
  j["iterations"] = r.iterations;
  j["contraction_ratio"] = number(r.contraction_ratio);
  j["fixed_point_residual"] = number(r.fixed_point_residual);
  j["pde_residual"] = number(r.pde_residual);
  j["sup_norm"] = number(r.sup_norm);
  j["lq_norm"] = number(r.lq);
  j["truncation_active"] = r.truncation_active;
  j["boundary_mass"] = number(r.boundary_mass);
  json up = json::array(), ra = json::array();
  for (double v : r.updates) up.push_back(number(v));
  for (double v : r.ratios) ra.push_back(number(v));
  j["updates"] = up;
  j["ratios"] = ra;
  j["warnings"] = r.warnings;
  j["message"] = r.message;
  return j;
}

json to_json(const FarFieldPattern& p) {
  json j;
  j["dim"] = p.dim;
  j["lambda"] = p.lambda;
  json dirs = json::array();
  for (Eigen::Index i = 0; i < p.directions.rows(); ++i) {
    const Eigen::Vector3d w = p.directions.row(i).transpose().normalized();
    dirs.push_back({w[0], w[1], w[2]});
  }
  j["directions"] = dirs;
  j["amplitude"] = complex_list(p.amplitude);
  j["source_part"] = complex_list(p.source_part);
  j["density_part"] = complex_list(p.density_part);
  j["source_expansion"] = to_json(p.source);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string(), e.what());
  }
}

void write_json(const fs::path& file, const json& j) { write_text(file, dump(j)); }

void write_text(const fs::path& file, const std::string& text) {
  ensure_parent(file);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

}  // namespace nlh::io
