#include "nlh/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlh {

std::string to_string(ProblemTag tag) {
  switch (tag) {
    case ProblemTag::nlh: return "nlh";
    case ProblemTag::nlh_radial: return "nlh-radial";
    case ProblemTag::fourth_order: return "fourth-order";
    case ProblemTag::curlcurl_cyl: return "curlcurl-cyl";
    case ProblemTag::curlcurl_general: return "curlcurl-general";
  }
  return "nlh";
}

ProblemTag problem_tag_from_string(const std::string& s) {
  for (auto t : {ProblemTag::nlh, ProblemTag::nlh_radial, ProblemTag::fourth_order, ProblemTag::curlcurl_cyl,
                 ProblemTag::curlcurl_general})
    if (to_string(t) == s) return t;
  throw std::invalid_argument("unknown problem tag '" + s + "'");
}

double over_plus(double a, double r) {
  if (a == 0.0) return 0.0;
  if (r <= 0.0) return a > 0.0 ? kInf : -kInf;
  return a / r;
}

double Interval::choose() const {
  if (std::isinf(hi)) return 2.0 * lo;
  return 0.5 * (lo + hi);
}

namespace {

// everything is written in sigma = 1/s so that s = inf is the value 0
double inv(double s) { return std::isinf(s) ? 0.0 : 1.0 / s; }
double recip(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

bool le(double a, double b) { return a <= b + kExpTol; }
bool lt(double a, double b) { return a < b - kExpTol; }

void check_n(int n) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
}

void check_s(double s) {
  if (!(s >= 1.0)) throw std::invalid_argument("s must lie in [1, inf]");
}

}  // namespace

double p_threshold(int n, double s) {
  check_n(n);
  check_s(s);
  const double sg = inv(s);
  const double v = (2.0 * (n * n + 2.0 * n - 1.0) - 2.0 * n * (n + 1.0) * sg) / (n * n - 1.0);
  return std::max(2.0, v);
}

double p_threshold_radial(int n, double s) {
  check_n(n);
  check_s(s);
  const double sg = inv(s);
  const double v = ((2.0 * n * n + n - 1.0) - 2.0 * n * n * sg) / (n * (n - 1.0));
  return std::max(2.0, v);
}

Interval xi_set(int n, double s, double p) {
  check_n(n);
  check_s(s);
  const double sg = inv(s);
  Interval iv;
  iv.lo = 2.0 * n / (n - 1.0);
  iv.hi = std::min({over_plus(2.0 * n, n - 3.0), over_plus((n + 1.0) * (p - 2.0), 2.0 - (n + 1.0) * sg),
                    over_plus(2.0 * n * (p - 1.0), (n + 1.0) - 2.0 * n * sg)});
  return iv;
}

Interval xi_rad_set(int n, double s, double p) {
  check_n(n);
  check_s(s);
  const double sg = inv(s);
  Interval iv;
  iv.lo = 2.0 * n / (n - 1.0);
  iv.hi = std::min({over_plus(2.0 * n, n - 3.0), over_plus(2.0 * n * n * (p - 2.0), (3.0 * n - 1.0) - 2.0 * n * n * sg),
                    over_plus(2.0 * n * (p - 1.0), (n + 1.0) - 2.0 * n * sg)});
  return iv;
}

Interval curlcurl_window(double s) {
  check_s(s);
  return {3.0, over_plus(3.0, 2.0 - 3.0 * inv(s))};
}

double curlcurl_upper_reach(double s, double p) {
  check_s(s);
  return over_plus(3.0 * (p - 1.0), 2.0 - 3.0 * inv(s));
}

namespace {

// the window shared by the resolvent theorems: bounds on 1/t - 1/q
struct Window {
  double lo;
  bool lo_strict;
  double hi;
  bool hi_strict;
};

Window lap_constants(int n) { return {2.0 / (n + 1.0), false, 2.0 / n, n == 2}; }
Window radial_constants(int n) { return {(3.0 * n - 1.0) / (2.0 * n * n), true, 2.0 / n, n == 2}; }
Window fourth_constants(int n) {
  if (n >= 5) return {2.0 / (n + 1.0), false, 4.0 / n, false};
  return {2.0 / (n + 1.0), false, 1.0, n == 4};
}

bool window_check(int n, double t, double q, const Window& w) {
  check_n(n);
  if (!(t > 1.0) || !(q > 1.0)) return false;
  const double a = 1.0 / t, b = recip(q), d = a - b;
  if (!(a > (n + 1.0) / (2.0 * n) + kExpTol)) return false;
  if (!lt(b, (n - 1.0) / (2.0 * n))) return false;
  if (w.lo_strict ? !lt(w.lo, d) : !le(w.lo, d)) return false;
  if (w.hi_strict ? !lt(d, w.hi) : !le(d, w.hi)) return false;
  return true;
}

Window constants_for(const ExponentProblem& pr) {
  switch (pr.tag) {
    case ProblemTag::nlh_radial: return radial_constants(pr.n);
    case ProblemTag::fourth_order: return fourth_constants(pr.n);
    default: return lap_constants(pr.n);
  }
}

int dim_of(const ExponentProblem& pr) {
  return pr.tag == ProblemTag::curlcurl_cyl || pr.tag == ProblemTag::curlcurl_general ? 3 : pr.n;
}

}  // namespace

bool lap_window(int n, double t, double q) { return window_check(n, t, q, lap_constants(n)); }
bool lap_window_radial(int n, double t, double q) { return window_check(n, t, q, radial_constants(n)); }
bool fourth_order_window(int n, double t, double q) { return window_check(n, t, q, fourth_constants(n)); }

double t_star(double q, double s_tilde, double p) {
  check_s(s_tilde);
  return std::max(1.0, q / ((p - 1.0) + q * inv(s_tilde)));
}

bool tstar_condition(int n, double q, double s, double p, bool radial) {
  const double ts = t_star(q, s, p);
  const double first = radial ? 2.0 * n * n * q / (2.0 * n * n + (3.0 * n - 1.0) * q)
                              : (n + 1.0) * q / (n + 1.0 + 2.0 * q);
  return lt(ts, first) && lt(ts, 2.0 * n / (n + 1.0));
}

bool curlcurl_pair(double t, double q_new, double q_prev, double s, double p, double p_tilde) {
  if (!(t > 1.0 + kExpTol) || !lt(t, 1.5)) return false;
  if (!lt(3.0, q_new)) return false;
  const double d = 1.0 / t - recip(q_new);
  if (!le(0.5, d) || !le(d, 2.0 / 3.0)) return false;
  const double ts = t_star(q_prev, s, p);
  const double cap = over_plus(q_prev, p_tilde - 1.0);
  return le(ts, t) && le(ts, q_new) && le(t, cap) && le(q_new, cap);
}

bool check_pair(const ExponentProblem& pr, double q_prev, const SchedulePair& pair) {
  if (pair.q == q_prev) return false;
  if (pr.tag == ProblemTag::curlcurl_general) return curlcurl_pair(pair.t, pair.q, q_prev, pr.s, pr.p, pr.p_tilde);
  // f(., u) lies in L^t for every t >= t*(q_prev, s)
  if (!le(t_star(q_prev, pr.s, pr.p), pair.t)) return false;
  return window_check(dim_of(pr), pair.t, pair.q, constants_for(pr));
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// midpoint of the feasible 1/t range for a single step landing exactly on r
bool direct_step(const ExponentProblem& pr, double q, double r, SchedulePair& out) {
  const int n = dim_of(pr);
  const Window w = constants_for(pr);
  const double b = recip(r);
  double lo = std::max((n + 1.0) / (2.0 * n), b + w.lo);
  double hi = std::min({1.0 / t_star(q, pr.s, pr.p), 1.0, b + w.hi});
  if (!(lo < hi - 4.0 * kExpTol)) return false;
  out = {2.0 / (lo + hi), r};
  return check_pair(pr, q, out);
}

Schedule scalar_schedule(const ExponentProblem& pr, double q_start, double r) {
  Schedule sc;
  const int n = dim_of(pr);
  const Window w = constants_for(pr);
  double q = q_start;
  for (int guard = 0; guard < 64 && q != r; ++guard) {
    const double t0 = t_star(q, pr.s, pr.p);
    SchedulePair pair;
    if (r < q) {
      // the recipe of the existence proof: t = t*, q~ = max{r, (lower-window equality)}
      double qt = over_plus(1.0, 1.0 / t0 - w.lo);
      if (w.lo_strict) qt += 1e-9;
      pair = {t0, std::max(r, qt)};
      if (!(pair.q < q && check_pair(pr, q, pair)) && !direct_step(pr, q, r, pair)) {
        // largest reachable descent: smallest admissible t
        const double a = std::min({1.0 / t0, 1.0 - 1e-9, (n - 1.0) / (2.0 * n) + w.lo - 1e-9});
        double qn = over_plus(1.0, a - w.lo);
        if (w.lo_strict) qn += 1e-9;
        pair = {1.0 / a, std::max(r, qn)};
        if (!(pair.q < q && check_pair(pr, q, pair))) {
          if (sc.steps.empty())
            throw std::domain_error("no admissible t below q = " + fmt(q) + ": t*(q,s) = " + fmt(t0) +
                                    " violates 1/t > (n+1)/(2n) or the lower window bound");
          sc.reached = false;
          sc.stall = "descent stalled at q = " + fmt(q);
          return sc;
        }
      }
    } else {
      if (!direct_step(pr, q, r, pair)) {
        // climb as far as one step allows: largest 1/t, smallest 1/q~
        const double a = std::min(1.0 / t0, 1.0 - 1e-9);
        const double b = a - w.hi + (w.hi_strict ? 1e-9 : 0.0);
        pair = {1.0 / a, b > 0.0 ? 1.0 / b : kInf};
        if (!(a > (n + 1.0) / (2.0 * n) + kExpTol) || !(pair.q > q) || std::isinf(pair.q) ||
            !check_pair(pr, q, pair)) {
          if (sc.steps.empty())
            throw std::domain_error("no admissible t above q = " + fmt(q) + ": t*(q,s) = " + fmt(t0) +
                                    " leaves 1/t > (n+1)/(2n) and 1/t - 1/r <= 2/n incompatible");
          sc.reached = false;
          sc.stall = "ascent stalled at q = " + fmt(q);
          return sc;
        }
        pair.q = std::min(pair.q, r);
      }
    }
    sc.steps.push_back(pair);
    q = pair.q;
  }
  sc.reached = q == r;
  if (!sc.reached) sc.stall = "step limit reached at q = " + fmt(q);
  return sc;
}

// pick t for the pair (t, r) directly, used when the midpoint recipe overshoots r
bool curlcurl_direct(const ExponentProblem& pr, double q, double r, SchedulePair& out) {
  const double b = recip(r);
  const double lo = std::max({2.0 / 3.0, b + 0.5, 1.0 / over_plus(q, pr.p_tilde - 1.0)});
  const double hi = std::min({1.0, b + 2.0 / 3.0, 1.0 / t_star(q, pr.s, pr.p)});
  if (!(lo < hi - 4.0 * kExpTol)) return false;
  out = {2.0 / (lo + hi), r};
  return check_pair(pr, q, out);
}

Schedule curlcurl_schedule(const ExponentProblem& pr, double q_start, double r) {
  Schedule sc;
  const double s = pr.s, p = pr.p, pt = pr.p_tilde;
  const double cap_ratio = pt - 1.0;
  double q = q_start;
  for (int guard = 0; guard < 256 && q != r; ++guard) {
    SchedulePair pair;
    if (r < q) {
      if (!(r > 3.0)) throw std::domain_error("curl-curl descent needs r > 3");
      const double lo = std::max({1.0, 3.0 * r / (3.0 + 2.0 * r), t_star(q, s, p)});
      const double hi = std::min({1.5, 2.0 * q / (q + 2.0), over_plus(q, cap_ratio)});
      if (!(lo < hi - kExpTol)) {
        if (sc.steps.empty())
          throw std::domain_error("empty t-interval at q = " + fmt(q) + ": max{1, 3r/(3+2r), t*} = " + fmt(lo) +
                                  " >= min{3/2, 2q/(q+2), q/(p~-1)} = " + fmt(hi));
        sc.reached = false;
        sc.stall = "descent stalled at q = " + fmt(q);
        return sc;
      }
      const double t = 0.5 * (lo + hi);
      pair = {t, std::max(r, 2.0 * t / (2.0 - t))};
      if (!check_pair(pr, q, pair) && !curlcurl_direct(pr, q, r, pair)) {
        sc.reached = false;
        sc.stall = "midpoint pair rejected at q = " + fmt(q);
        return sc;
      }
    } else {
      if (!(pt < 2.0 && p > 2.0)) throw std::domain_error("curl-curl ascent needs p~ < 2 < p");
      if (!lt(r, curlcurl_upper_reach(s, p)))
        throw std::domain_error("target r = " + fmt(r) + " is not below 3s(p-1)/(2s-3)_+ = " +
                                fmt(curlcurl_upper_reach(s, p)));
      const double lo = std::max({1.0, 3.0 * q / (3.0 + 2.0 * q), t_star(q, s, p)});
      const double hi = std::min({1.5, 2.0 * q / (q + 2.0 * cap_ratio), over_plus(q, cap_ratio)});
      if (!(lo < hi - kExpTol)) {
        if (sc.steps.empty())
          throw std::domain_error("empty t-interval at q = " + fmt(q) + ": max{1, 3q/(3+2q), t*} = " + fmt(lo) +
                                  " >= min{3/2, 2q/(q+2(p~-1)), q/(p~-1)} = " + fmt(hi));
        sc.reached = false;
        sc.stall = "ascent stalled at q = " + fmt(q);
        return sc;
      }
      const double t = 0.5 * (lo + hi);
      pair = {t, std::min(3.0 * t / (3.0 - 2.0 * t), over_plus(q, cap_ratio))};
      if (pair.q >= r) {
        // overshoot: clamp to the target and re-pick t
        if (!curlcurl_direct(pr, q, r, pair)) pair.q = r;
      }
      if (!check_pair(pr, q, pair)) {
        sc.reached = false;
        sc.stall = "midpoint pair rejected at q = " + fmt(q);
        return sc;
      }
    }
    sc.steps.push_back(pair);
    q = pair.q;
  }
  sc.reached = q == r;
  if (!sc.reached && sc.stall.empty()) sc.stall = "step limit reached at q = " + fmt(q);
  return sc;
}

}  // namespace

Schedule bootstrap_schedule(const ExponentProblem& pr, double q_start, double r_target) {
  if (!(q_start > 1.0) || !(r_target > 1.0)) throw std::invalid_argument("exponents must exceed 1");
  if (q_start == r_target) return {};
  if (pr.tag == ProblemTag::curlcurl_general) return curlcurl_schedule(pr, q_start, r_target);
  return scalar_schedule(pr, q_start, r_target);
}

Interval q_interval(const ExponentProblem& pr) {
  switch (pr.tag) {
    case ProblemTag::nlh_radial: return xi_rad_set(pr.n, pr.s, pr.p);
    case ProblemTag::curlcurl_cyl: return xi_set(3, pr.s, pr.p);
    case ProblemTag::curlcurl_general: return curlcurl_window(pr.s);
    default: return xi_set(pr.n, pr.s, pr.p);
  }
}

ExponentReport exponent_report(const ExponentProblem& pr, double q_override, const std::vector<double>& targets) {
  ExponentReport rep;
  rep.problem = pr;
  if (pr.tag == ProblemTag::curlcurl_general) {
    if (!(pr.p >= 2.0 && pr.p_tilde <= 2.0 && pr.s >= 1.0 && pr.s <= 2.0))
      throw std::invalid_argument("curl-curl general case needs 1 <= s <= 2 <= p and p~ <= 2");
    rep.threshold = 2.0;
  } else {
    rep.threshold = pr.tag == ProblemTag::nlh_radial ? p_threshold_radial(dim_of(pr), pr.s) : p_threshold(dim_of(pr), pr.s);
  }
  rep.interval = q_interval(pr);
  rep.nonempty = !rep.interval.empty();
  if (!rep.nonempty) {
    rep.certificate = "empty q-set: upper end " + fmt(rep.interval.hi) + " <= lower end " + fmt(rep.interval.lo) +
                      " (p = " + fmt(pr.p) + " vs threshold " + fmt(rep.threshold) + ")";
    return rep;
  }
  rep.q = q_override > 0.0 ? q_override : rep.interval.choose();
  if (!rep.interval.contains(rep.q))
    throw std::invalid_argument("q = " + fmt(rep.q) + " lies outside (" + fmt(rep.interval.lo) + ", " +
                                fmt(rep.interval.hi) + ")");
  const int n = dim_of(pr);
  const double ts = t_star(rep.q, pr.s, pr.p);
  if (pr.tag == ProblemTag::curlcurl_general) {
    rep.t_window = {std::max({ts, 3.0 * rep.q / (3.0 + 2.0 * rep.q)}), std::min(1.5, 2.0 * rep.q / (rep.q + 2.0))};
  } else {
    const Window w = constants_for(pr);
    rep.t_window = {std::max(ts, 1.0 / (1.0 / rep.q + w.hi)),
                    std::min(1.0 / (1.0 / rep.q + w.lo), 2.0 * n / (n + 1.0))};
  }
  rep.certificate = "q = " + fmt(rep.q) + " in (" + fmt(rep.interval.lo) + ", " + fmt(rep.interval.hi) + ")";
  rep.targets = targets;
  for (double r : targets) {
    try {
      rep.schedules.push_back(bootstrap_schedule(pr, rep.q, r));
    } catch (const std::domain_error& e) {
      Schedule sc;
      sc.reached = false;
      sc.stall = e.what();
      rep.schedules.push_back(sc);
    }
  }
  return rep;
}

}  // namespace nlh
