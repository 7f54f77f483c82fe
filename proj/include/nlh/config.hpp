#pragma once

#include "nlh/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlh {

inline constexpr int kSchemaVersion = 1;

struct SolverSettings {
  // 0 means "auto": the exponent calculus picks q
  double q = 0.0;
  double tol = 1e-10;
  int max_iter = 200;
  double rho = 0.0;
  int quad_resolution = 0;
};

struct FarFieldSettings {
  // shell radii as fractions of L
  std::vector<double> radii = {0.25, 0.5, 0.75};
  // 0 selects half a wavelength
  double mask = 0.0;
  int profile_bins = 32;
};

// Density family of a sweep: scalings of the first density, then extra members.
struct SweepSettings {
  std::vector<double> scales;
  std::vector<io::json> members;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  ProblemTag problem = ProblemTag::nlh;
  int n = 3;
  double L = 12.0;
  int N = 48;
  double lambda = 1.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  // each entry is a file name (relative to the config) or an inline density object
  std::vector<io::json> densities;
  NonlinearitySpec nonlinearity;
  ResolventConfig resolvent;
  SolverSettings solver;
  FarFieldSettings farfield;
  std::optional<SweepSettings> sweep;
  std::string output = "run";
  std::uint64_t seed = 1;
  // directory relative file references resolve against; not serialized
  io::fs::path base_dir;

  Grid grid() const { return Grid(n, L, N); }
};

io::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const io::json& j, const io::fs::path& base_dir = {});
RunConfig load_run_config(const io::fs::path& file);

SphereDensity load_density_entry(const io::json& entry, const io::fs::path& base_dir, const std::string& path);
std::vector<SphereDensity> load_densities(const RunConfig& c);

// Problem for the given densities (the configured ones when omitted).
FixedPointProblem make_problem(const RunConfig& c, const std::optional<std::vector<SphereDensity>>& dens = {});

}  // namespace nlh
