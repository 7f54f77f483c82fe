#pragma once

#include "nlh/nonlinearity.hpp"

#include <string>
#include <vector>

namespace nlh {

enum class ProblemTag { nlh, nlh_radial, fourth_order, curlcurl_cyl, curlcurl_general };

std::string to_string(ProblemTag tag);
ProblemTag problem_tag_from_string(const std::string& s);

// Comparison slack for exponent arithmetic: non-strict a <= b means
// a <= b + kExpTol, strict a < b means a < b - kExpTol.
inline constexpr double kExpTol = 1e-12;

// a / r_+ : a/r for r > 0, +inf for r <= 0 (a > 0), 0 for a = 0
double over_plus(double a, double r);

// Open interval (lo, hi); hi may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi - kExpTol); }
  bool contains(double q) const { return q > lo + kExpTol && q < hi - kExpTol; }
  // midpoint, or 2 lo for an unbounded interval
  double choose() const;
};

double p_threshold(int n, double s);
double p_threshold_radial(int n, double s);
Interval xi_set(int n, double s, double p);
Interval xi_rad_set(int n, double s, double p);
// (3, 3s/(2s-3)_+)
Interval curlcurl_window(double s);
// q-range reachable upward in the general curl-curl case: (q, 3s(p-1)/(2s-3)_+)
double curlcurl_upper_reach(double s, double p);

bool lap_window(int n, double t, double q);
bool lap_window_radial(int n, double t, double q);
bool fourth_order_window(int n, double t, double q);
// the pair conditions of the curl-curl iteration, t* taken at the previous q
bool curlcurl_pair(double t, double q_new, double q_prev, double s, double p, double p_tilde);

double t_star(double q, double s_tilde, double p);
// t*(q,s) < (n+1)q/(n+1+2q) and t*(q,s) < 2n/(n+1); radial variant uses 2n^2 q/(2n^2+(3n-1)q)
bool tstar_condition(int n, double q, double s, double p, bool radial = false);

struct SchedulePair {
  double t = 0.0;
  double q = 0.0;
};

struct Schedule {
  std::vector<SchedulePair> steps;
  bool reached = true;
  std::string stall;
};

struct ExponentProblem {
  ProblemTag tag = ProblemTag::nlh;
  int n = 3;
  double s = kInf;
  double p = 4.0;
  double p_tilde = 2.0;
};

// Independent re-check of one schedule step taken from q_prev.
bool check_pair(const ExponentProblem& pr, double q_prev, const SchedulePair& pair);

// Steps from q_start toward r_target. Throws std::domain_error naming the
// violated inequality when no step at all is possible; a partial schedule
// that stops short is returned with reached = false.
Schedule bootstrap_schedule(const ExponentProblem& pr, double q_start, double r_target);

// feasible q-set for the problem
Interval q_interval(const ExponentProblem& pr);

struct ExponentReport {
  ExponentProblem problem;
  double threshold = 0.0;
  Interval interval;
  bool nonempty = false;
  double q = 0.0;
  // admissible t for the chosen q (closed on the left)
  Interval t_window;
  std::vector<double> targets;
  std::vector<Schedule> schedules;
  std::string certificate;
};

// q_override <= 0 picks the default q; it must lie in the interval otherwise.
ExponentReport exponent_report(const ExponentProblem& pr, double q_override = 0.0,
                               const std::vector<double>& targets = {});

}  // namespace nlh
