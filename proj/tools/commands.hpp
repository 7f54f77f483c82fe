#pragma once

#include "nlh/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlh::cli {

// 0 converged and certified, 2 converged with warnings, 1 infeasible or
// diverged, 3 unusable input
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitWarnings = 2;
inline constexpr int kExitBadInput = 3;

struct Globals {
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

// NLH_OUTPUT_ROOT, or the working directory
io::fs::path output_root();

struct ExponentsArgs {
  std::string config;
  std::string problem = "nlh";
  int n = 3;
  std::string s = "inf";
  double p = 3.0;
  double p_tilde = 2.0;
  double q = 0.0;
  std::vector<double> targets;
  bool json_only = false;
  std::string out;
};
int cmd_exponents(const ExponentsArgs& a, const Globals& g);

struct HerglotzArgs {
  std::string density;
  double L = 12.0;
  int N = 48;
  int quad = 0;
  std::string out = "herglotz";
};
int cmd_herglotz(const HerglotzArgs& a, const Globals& g);

struct ResolveArgs {
  std::string op = "helmholtz";
  std::string scheme = "pv_surface";
  double epsilon = 0.0;
  double lambda = 1.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  double source_radius = 0.0;
  std::string input;
  std::string output = "resolved";
};
int cmd_resolve(const ResolveArgs& a, const Globals& g);

struct SolveArgs {
  std::string config;
  std::string out;
};
int cmd_solve(const SolveArgs& a, const Globals& g);

struct FarFieldArgs {
  std::string config;
  std::string input;
  std::string out;
};
int cmd_farfield(const FarFieldArgs& a, const Globals& g);

int cmd_sweep(const SolveArgs& a, const Globals& g);

struct ReportArgs {
  std::string dir;
};
int cmd_report(const ReportArgs& a, const Globals& g);

}  // namespace nlh::cli
