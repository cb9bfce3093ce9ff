#include "scallop/synthesize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace scallop {

namespace {

constexpr double kUCap = 10.0;       // hard cruise-rate cap
constexpr double kTauFloor = 1e-2;   // minimal arc duration
constexpr double kInf = 1e18;

// Switch angles are kept this far inside the angle interval so the entry
// notch after an event has room without leaving the domain.
constexpr double kEdgeRoom = 2e-3;

double solve_lo() { return theta_min() + kEdgeRoom; }
double solve_hi() { return theta_max() - kEdgeRoom; }

double ginv(const Params& p, double y) {
  const double glo = gap(p, solve_lo());
  const double ghi = gap(p, solve_hi());
  if (!(y >= glo) || !(y <= ghi)) {
    std::ostringstream os;
    os << "gap value " << y << " outside the achievable interval [" << glo
       << ", " << ghi << "]";
    throw InfeasibleError(os.str());
  }
  double lo = solve_lo(), hi = solve_hi();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(p, mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

int sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// One constant-regime arc of a stroke between consecutive switch events.
struct Arc {
  double theta_start = 0, theta_end = 0;
  double u_start = 0, u_end = 0;
  double lo = -kInf, hi = kInf;   // open admissible band for interior u
  double slo = -kInf, shi = kInf; // safe cruise interval
  int entry_dir = 0;              // mandatory crossing direction at arc start
  double entry_threshold = 0;

  double dtheta() const { return theta_end - theta_start; }
};

Arc make_arc(double th_a, double th_b, double u_a, double u_b, double lo,
             double hi, double scale, int entry_dir, double entry_threshold) {
  Arc a;
  a.theta_start = th_a;
  a.theta_end = th_b;
  a.u_start = u_a;
  a.u_end = u_b;
  a.lo = lo;
  a.hi = hi;
  const double m = 0.1 * std::max(scale, 0.02);
  a.slo = lo <= -kUCap ? -kUCap : lo + m;
  a.shi = hi >= kUCap ? kUCap : hi - m;
  a.entry_dir = entry_dir;
  a.entry_threshold = entry_threshold;
  return a;
}

std::pair<double, double> tau_bounds(const Arc& a) {
  const double d = a.dtheta();
  double tmin = kTauFloor, tmax = kInf;
  if (d > 0) {
    if (!(a.shi > 0)) throw InfeasibleError("arc needs a positive angle rate outside its admissible band");
    tmin = std::max(tmin, d / a.shi);
    if (a.slo > 0) tmax = d / a.slo;
  } else if (d < 0) {
    if (!(a.slo < 0)) throw InfeasibleError("arc needs a negative angle rate outside its admissible band");
    tmin = std::max(tmin, d / a.slo);
    if (a.shi < 0) tmax = d / a.shi;
  } else {
    if (a.slo > 0 || a.shi < 0) {
      throw InfeasibleError("zero net angle change is impossible in a one-sided velocity band");
    }
  }
  return {tmin, tmax};
}

// Fits arc durations to the requested ones within each arc's feasible
// interval, redistributing the difference; stretches or shrinks the total
// period when the requested one cannot accommodate the angle moves.
std::vector<double> allocate_durations(const std::vector<Arc>& arcs,
                                       std::vector<double> desired, double& T) {
  const std::size_t n = arcs.size();
  std::vector<double> tmin(n), tmax(n), tau(n);
  double sum_min = 0, sum_max = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::tie(tmin[i], tmax[i]) = tau_bounds(arcs[i]);
    sum_min += tmin[i];
    sum_max += std::min(tmax[i], kInf / 8);
  }
  if (sum_min * 1.05 > T) {
    for (std::size_t i = 0; i < n; ++i) tau[i] = 1.05 * tmin[i];
    T = 0;
    for (double t : tau) T += t;
    return tau;
  }
  if (sum_max < T) {
    for (std::size_t i = 0; i < n; ++i) tau[i] = tmax[i];
    T = sum_max;
    return tau;
  }
  for (std::size_t i = 0; i < n; ++i) {
    tau[i] = std::clamp(desired[i], tmin[i] * 1.02, tmax[i] * 0.98);
  }
  for (int it = 0; it < 100; ++it) {
    double sum = 0;
    for (double t : tau) sum += t;
    const double diff = T - sum;
    if (std::abs(diff) < 1e-12 * (1 + T)) break;
    double slack_total = 0;
    std::vector<double> slack(n);
    for (std::size_t i = 0; i < n; ++i) {
      slack[i] = diff > 0 ? std::min(tmax[i] * 0.98, T * 4) - tau[i]
                          : tau[i] - tmin[i] * 1.02;
      slack[i] = std::max(slack[i], 0.0);
      slack_total += slack[i];
    }
    if (slack_total <= 0) break;
    for (std::size_t i = 0; i < n; ++i) {
      tau[i] += diff * slack[i] / slack_total;
    }
  }
  double sum = 0;
  for (double t : tau) sum += t;
  T = sum;
  return tau;
}

// ---- per-case arc layouts ----------------------------------------------

std::vector<Arc> stroke_arcs(const SwitchingRule& rule, StrokeCase c,
                             double theta0, double u0,
                             const std::vector<double>& th) {
  const double U = kUCap;
  std::vector<Arc> arcs;
  switch (c) {
    case StrokeCase::ThermostatInBandViscous: {
      const double e = rule.threshold;
      arcs.push_back(make_arc(theta0, th[0], u0, e, -U, e, e, 0, 0));
      arcs.push_back(make_arc(th[0], theta0, e, u0, -e, U, e, +1, e));
      break;
    }
    case StrokeCase::ThermostatInBandIdeal: {
      const double e = rule.threshold;
      arcs.push_back(make_arc(theta0, th[0], u0, -e, -e, U, e, 0, 0));
      arcs.push_back(make_arc(th[0], theta0, -e, u0, -U, e, e, -1, -e));
      break;
    }
    case StrokeCase::ThermostatFromAbove: {
      const double e = rule.threshold;
      arcs.push_back(make_arc(theta0, th[0], u0, -e, -e, U, e, 0, 0));
      arcs.push_back(make_arc(th[0], th[1], -e, e, -U, e, e, -1, -e));
      arcs.push_back(make_arc(th[1], theta0, e, u0, -e, U, e, +1, e));
      break;
    }
    case StrokeCase::ThermostatFromBelow: {
      const double e = rule.threshold;
      arcs.push_back(make_arc(theta0, th[0], u0, e, -U, e, e, 0, 0));
      arcs.push_back(make_arc(th[0], th[1], e, -e, -e, U, e, +1, e));
      arcs.push_back(make_arc(th[1], theta0, -e, u0, -U, e, e, -1, -e));
      break;
    }
    case StrokeCase::SignOpening: {
      arcs.push_back(make_arc(theta0, th[0], u0, 0, 0, U, 0, 0, 0));
      arcs.push_back(make_arc(th[0], th[1], 0, 0, -U, 0, 0, -1, 0));
      arcs.push_back(make_arc(th[1], theta0, 0, u0, 0, U, 0, +1, 0));
      break;
    }
    case StrokeCase::SignClosing: {
      arcs.push_back(make_arc(theta0, th[0], u0, 0, -U, 0, 0, 0, 0));
      arcs.push_back(make_arc(th[0], th[1], 0, 0, 0, U, 0, +1, 0));
      arcs.push_back(make_arc(th[1], theta0, 0, u0, -U, 0, 0, -1, 0));
      break;
    }
    case StrokeCase::MagnitudeFromIdeal: {
      const double M = rule.threshold;
      const int s = sgn(u0);
      auto ideal_lo = [&](int dir) { return dir > 0 ? M : -U; };
      auto ideal_hi = [&](int dir) { return dir > 0 ? U : -M; };
      arcs.push_back(make_arc(theta0, th[0], u0, s * M, ideal_lo(s),
                              ideal_hi(s), M, 0, 0));
      arcs.push_back(make_arc(th[0], th[1], s * M, -s * M, -M, M, M, -s, s * M));
      arcs.push_back(make_arc(th[1], th[2], -s * M, -s * M, ideal_lo(-s),
                              ideal_hi(-s), M, -s, -s * M));
      arcs.push_back(make_arc(th[2], th[3], -s * M, s * M, -M, M, M, s, -s * M));
      arcs.push_back(make_arc(th[3], theta0, s * M, u0, ideal_lo(s),
                              ideal_hi(s), M, s, s * M));
      break;
    }
    case StrokeCase::MagnitudeFromViscous: {
      const double M = rule.threshold;
      const int s1 = sgn(th[1] - th[0]);
      const int s2 = sgn(th[3] - th[2]);
      if (s1 == 0 || s2 == 0) {
        throw InfeasibleError("degenerate magnitude skeleton: an ideal arc has zero angle change");
      }
      auto ideal_lo = [&](int dir) { return dir > 0 ? M : -U; };
      auto ideal_hi = [&](int dir) { return dir > 0 ? U : -M; };
      arcs.push_back(make_arc(theta0, th[0], u0, s1 * M, -M, M, M, 0, 0));
      arcs.push_back(make_arc(th[0], th[1], s1 * M, s1 * M, ideal_lo(s1),
                              ideal_hi(s1), M, s1, s1 * M));
      arcs.push_back(make_arc(th[1], th[2], s1 * M, s2 * M, -M, M, M, -s1, s1 * M));
      arcs.push_back(make_arc(th[2], th[3], s2 * M, s2 * M, ideal_lo(s2),
                              ideal_hi(s2), M, s2, s2 * M));
      arcs.push_back(make_arc(th[3], theta0, s2 * M, u0, -M, M, M, -s2, s2 * M));
      break;
    }
  }
  return arcs;
}

// ---- realization --------------------------------------------------------

double push_level(const Arc& a) {
  return a.entry_threshold +
         a.entry_dir * std::max(std::abs(a.entry_threshold), 0.1);
}

bool in_open_band(const Arc& a, double u) {
  return u > a.lo + 1e-12 && u < a.hi - 1e-12;
}

struct Piece { double dt, ua, ub; };

// The angle excursion of a piecewise-linear velocity profile stays inside
// the clamped interval (the ramp past an entry event can overshoot the arc
// endpoints, so endpoint checks alone are not enough).
bool pieces_in_domain(double th, const std::vector<Piece>& pieces) {
  for (const Piece& pc : pieces) {
    const double nxt = th + pc.dt * (pc.ua + pc.ub) / 2;
    double mn = std::min(th, nxt), mx = std::max(th, nxt);
    if (pc.ua * pc.ub < 0) {  // interior extremum where u crosses zero
      const double ext = th + pc.ua * pc.ua * pc.dt / (2 * (pc.ua - pc.ub));
      mn = std::min(mn, ext);
      mx = std::max(mx, ext);
    }
    if (mn < theta_min() - 1e-12 || mx > theta_max() + 1e-12) return false;
    th = nxt;
  }
  return true;
}

// Appends the piecewise-linear u profile of one arc as Hermite nodes.
void append_arc_smooth(std::vector<Node>& nodes, const Arc& a, double tau) {
  const double d = a.dtheta();
  for (double f = 0.15; f > 1e-6; f *= 0.5) {
    // plain layout: ramp in, cruise, ramp out
    double c = (d / tau - f * (a.u_start + a.u_end) / 2) / (1 - f);
    bool crossing_ok =
        a.entry_dir == 0 || (c - a.u_start) * a.entry_dir > 1e-12;
    std::vector<Piece> pieces;
    if (crossing_ok && in_open_band(a, c)) {
      pieces = {{f * tau, a.u_start, c},
                {(1 - 2 * f) * tau, c, c},
                {f * tau, c, a.u_end}};
    } else if (a.entry_dir != 0) {
      // dip past the threshold right after the event, then cruise
      const double A = push_level(a);
      const double f1 = 0.25 * f, f2 = f, f4 = f, f3 = 1 - f1 - f2 - f4;
      c = (d / tau - f1 * (a.u_start + A) / 2 - f2 * A / 2 -
           f4 * a.u_end / 2) /
          (f2 / 2 + f3 + f4 / 2);
      if (in_open_band(a, c) && in_open_band(a, A)) {
        pieces = {{f1 * tau, a.u_start, A},
                  {f2 * tau, A, c},
                  {f3 * tau, c, c},
                  {f4 * tau, c, a.u_end}};
      }
    }
    if (pieces.empty() || !pieces_in_domain(nodes.back().theta, pieces)) {
      continue;
    }
    double t = nodes.back().t;
    double th = nodes.back().theta;
    for (const Piece& pc : pieces) {
      t += pc.dt;
      th += pc.dt * (pc.ua + pc.ub) / 2;
      nodes.push_back({t, th, pc.ub});
    }
    // land the arc endpoint exactly
    nodes.back().theta = a.theta_end;
    nodes.back().u = a.u_end;
    return;
  }
  throw InfeasibleError("could not fit a smooth velocity profile inside the regime band");
}

// Appends the piecewise-constant u profile of one arc (theta nodes only;
// slopes are recomputed by the builder).
void append_arc_pwc(std::vector<Node>& nodes, const Arc& a, double tau) {
  const double d = a.dtheta();
  for (double f = 0.1; f > 1e-6; f *= 0.5) {
    const double c0 = d / tau;
    const bool crossing_ok =
        a.entry_dir == 0 || (c0 - a.entry_threshold) * a.entry_dir > 1e-12;
    double t = nodes.back().t;
    double th = nodes.back().theta;
    if (crossing_ok && in_open_band(a, c0)) {
      nodes.push_back({t + tau, a.theta_end, 0});
      return;
    }
    if (a.entry_dir != 0) {
      const double A = push_level(a);
      const double c = (d - A * f * tau) / ((1 - f) * tau);
      const double th_dwell = th + A * f * tau;
      if (in_open_band(a, c) && in_open_band(a, A) &&
          th_dwell >= theta_min() - 1e-12 && th_dwell <= theta_max() + 1e-12) {
        nodes.push_back({t + f * tau, th_dwell, 0});
        nodes.push_back({t + tau, a.theta_end, 0});
        return;
      }
    }
  }
  throw InfeasibleError("could not fit a piecewise-constant velocity profile inside the regime band");
}

std::vector<double> interior_fractions(int k) {
  if (k == 1) return {0.5};
  if (k == 2) return {2.0 / 7.0, 6.0 / 7.0};
  std::vector<double> f;
  for (int i = 1; i <= k; ++i) f.push_back(double(i) / (k + 1));
  return f;
}

std::vector<double> durations_from_times(const StrokePlan& plan) {
  std::vector<double> tau;
  double prev = 0;
  for (double t : plan.switch_times) {
    tau.push_back(t - prev);
    prev = t;
  }
  tau.push_back(plan.T - prev);
  return tau;
}

// ---- capacities ---------------------------------------------------------

double capacity(const Params& p, const SwitchingRule& rule, StrokeCase c,
                double theta0, int dir) {
  (void)rule;
  const double g0 = gap(p, theta0);
  const double glo = gap(p, theta_min());
  const double ghi = gap(p, theta_max());
  switch (c) {
    case StrokeCase::ThermostatInBandViscous:
      return dir > 0 ? g0 - glo : ghi - g0;
    case StrokeCase::ThermostatInBandIdeal:
      return dir > 0 ? ghi - g0 : g0 - glo;
    case StrokeCase::ThermostatFromAbove:
    case StrokeCase::ThermostatFromBelow:
      return ghi - glo;
    case StrokeCase::SignOpening:
    case StrokeCase::SignClosing:
      return dir > 0 ? ghi - glo : 0.0;
    case StrokeCase::MagnitudeFromIdeal:
      // construction capacities, symmetric in the sign of u0
      return 0.95 * (dir > 0 ? g0 - glo : ghi - g0);
    case StrokeCase::MagnitudeFromViscous:
      return 0.95 * (dir > 0 ? ghi - g0 : g0 - glo);
  }
  return 0;
}

double offset_room(double theta0) {
  return std::min(0.05, 0.5 * std::min(theta0 - theta_min(),
                                       theta_max() - theta0));
}

std::vector<double> solve_stroke(const Params& p, const SwitchingRule& rule,
                                 StrokeCase c, double theta0, double target,
                                 double u0) {
  (void)rule;
  switch (c) {
    case StrokeCase::ThermostatInBandViscous:
      return {solve_single_angle(p, theta0, target)};
    case StrokeCase::ThermostatInBandIdeal:
      return {solve_single_angle(p, theta0, -target)};
    case StrokeCase::ThermostatFromAbove: {
      auto [a, b] = solve_symmetric_pair(p, theta0, target);
      return {a, b};
    }
    case StrokeCase::ThermostatFromBelow: {
      auto [a, b] = solve_symmetric_pair(p, theta0, target);
      return {b, a};
    }
    case StrokeCase::SignOpening:
    case StrokeCase::SignClosing: {
      if (target < 0) {
        throw InfeasibleError(
            "the sign rule only moves forward: negative displacement "
            "targets are not realizable");
      }
      auto [a, b] = solve_symmetric_pair(p, theta0, target);
      if (!(a > theta0) || !(b < theta0)) {
        throw InfeasibleError(
            "sign-rule stroke needs one switch angle on each side of theta0");
      }
      return c == StrokeCase::SignOpening ? std::vector<double>{a, b}
                                          : std::vector<double>{b, a};
    }
    case StrokeCase::MagnitudeFromIdeal: {
      auto a = solve_four_angles(p, theta0, target, sgn(u0));
      return {a.begin(), a.end()};
    }
    case StrokeCase::MagnitudeFromViscous: {
      double d = offset_room(theta0);
      double th4 = ginv(p, gap(p, theta0) + target);
      if (std::abs(th4 - (theta0 + d)) < 1e-4) d *= 0.5;
      return {theta0, theta0 + d, theta0 + d, th4};
    }
  }
  throw std::logic_error("unreachable stroke case");
}

Regime stroke_end_regime(const StrokePlan& s) {
  return case_angle_count(s.stroke_case) % 2 == 0
             ? case_initial_regime(s.stroke_case)
             : other(case_initial_regime(s.stroke_case));
}

StrokeCase flip_in_band(StrokeCase c) {
  if (c == StrokeCase::ThermostatInBandViscous)
    return StrokeCase::ThermostatInBandIdeal;
  if (c == StrokeCase::ThermostatInBandIdeal)
    return StrokeCase::ThermostatInBandViscous;
  return c;
}

}  // namespace

// ---- public solvers -----------------------------------------------------

double solve_single_angle(const Params& p, double theta0, double target) {
  p.validate();
  require_regular(p);
  check_theta_eval(theta0);
  const double g0 = gap(p, theta0);
  const double lo = g0 - gap(p, solve_hi());
  const double hi = g0 - gap(p, solve_lo());
  if (!(target >= lo) || !(target <= hi)) {
    std::ostringstream os;
    os << "single-angle target " << target << " outside the achievable interval ["
       << lo << ", " << hi << "]";
    throw InfeasibleError(os.str());
  }
  return ginv(p, g0 - target);
}

std::array<double, 2> solve_symmetric_pair(const Params& p, double theta0,
                                           double target) {
  p.validate();
  require_regular(p);
  check_theta_eval(theta0);
  if (target < 0) {
    auto [a, b] = solve_symmetric_pair(p, theta0, -target);
    return {b, a};
  }
  const double dmax = std::min(theta0 - solve_lo(), solve_hi() - theta0);
  auto g = [&](double d) { return gap(p, theta0 + d) - gap(p, theta0 - d); };
  // monotonicity spot-check of the bracket before bisecting
  for (int i = 0; i + 1 <= 8; ++i) {
    if (g(dmax * i / 8) > g(dmax * (i + 1) / 8) + 1e-12) {
      throw InfeasibleError("gap difference is not monotone: regularity violated");
    }
  }
  if (target <= g(dmax)) {
    double lo = 0, hi = dmax;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < target ? lo : hi) = mid;
    }
    const double d = 0.5 * (lo + hi);
    return {theta0 + d, theta0 - d};
  }
  const double span = gap(p, solve_hi()) - gap(p, solve_lo());
  if (target > span) {
    std::ostringstream os;
    os << "pair target " << target << " outside the achievable interval [-"
       << span << ", " << span << "]";
    throw InfeasibleError(os.str());
  }
  // pin one angle at the interval end nearer theta0
  if (theta0 - solve_lo() < solve_hi() - theta0) {
    return {ginv(p, target + gap(p, solve_lo())), solve_lo()};
  }
  return {solve_hi(), ginv(p, gap(p, solve_hi()) - target)};
}

std::optional<std::array<double, 4>> admissible_four_ordering(
    const std::array<double, 4>& a, double theta0, int s) {
  const std::array<std::array<double, 4>, 4> candidates = {{
      {a[0], a[1], a[2], a[3]},
      {a[0], a[3], a[2], a[1]},
      {a[2], a[3], a[0], a[1]},
      {a[2], a[1], a[0], a[3]},
  }};
  for (const auto& c : candidates) {
    if (s * (c[0] - theta0) > 0 && s * (c[1] - c[2]) > 0 &&
        s * (theta0 - c[3]) > 0) {
      return c;
    }
  }
  return std::nullopt;
}

std::array<double, 4> solve_four_angles(const Params& p, double theta0,
                                        double target, int s) {
  p.validate();
  require_regular(p);
  check_theta_eval(theta0);
  if (s == 0) throw std::invalid_argument("four-angle solver: s must be +-1");
  const double d = offset_room(theta0);

  // symmetric split: each gap pair contributes target/2
  {
    auto [a1, a2] = solve_symmetric_pair(p, theta0, target / 2);
    if (auto ord = admissible_four_ordering({a1, a2, a1, a2}, theta0, s)) {
      return *ord;
    }
  }
  const double th1 = theta0 + s * d;
  const double g0 = gap(p, theta0);
  // collapse the first viscous pair: theta2 = theta1, theta3 = theta0
  {
    const double y = g0 - target;
    const double glo = gap(p, solve_lo());
    const double ghi = gap(p, solve_hi());
    if (y >= glo && y <= ghi) {
      const double th4 = ginv(p, y);
      const std::array<double, 4> cand{th1, th1, theta0, th4};
      if (auto ord = admissible_four_ordering(cand, theta0, s)) return *ord;
    }
  }
  // collapse the second viscous pair: theta3 = theta4 = theta0 - s*d
  {
    const double th34 = theta0 - s * d;
    const double th2 = ginv(p, gap(p, th1) - target);
    const std::array<double, 4> cand{th1, th2, th34, th34};
    if (auto ord = admissible_four_ordering(cand, theta0, s)) return *ord;
  }
  std::ostringstream os;
  os << "four-angle target " << target
     << " admits no ordering compatible with the magnitude switching scheme "
        "(constraint s*(theta2 - theta3) > 0 failed for every candidate)";
  throw InfeasibleError(os.str());
}

ReachableRadius reachable_radius(const Params& p, const SwitchingRule& rule,
                                 StrokeCase c, double theta0) {
  p.validate();
  require_regular(p);
  check_theta_eval(theta0);
  const double fwd = capacity(p, rule, c, theta0, +1);
  const double bwd = capacity(p, rule, c, theta0, -1);
  if (c == StrokeCase::SignOpening || c == StrokeCase::SignClosing) {
    return {fwd};
  }
  return {std::min(fwd, bwd)};
}

StrokeCase classify_case(const SwitchingRule& rule, double u0,
                         std::optional<Regime> w0_hint) {
  const Regime w0 = initial_regime(rule, u0, w0_hint);
  switch (rule.kind) {
    case SwitchingRule::Kind::Thermostat:
      if (u0 > rule.threshold) return StrokeCase::ThermostatFromAbove;
      if (u0 < -rule.threshold) return StrokeCase::ThermostatFromBelow;
      return w0 == Regime::Viscous ? StrokeCase::ThermostatInBandViscous
                                   : StrokeCase::ThermostatInBandIdeal;
    case SwitchingRule::Kind::Sign:
      return w0 == Regime::Ideal ? StrokeCase::SignOpening
                                 : StrokeCase::SignClosing;
    case SwitchingRule::Kind::Magnitude:
    default:
      return w0 == Regime::Ideal ? StrokeCase::MagnitudeFromIdeal
                                 : StrokeCase::MagnitudeFromViscous;
  }
}

std::vector<StrokePlan> plan_displacement(const Params& p,
                                          const SwitchingRule& rule,
                                          std::optional<Regime> w0_hint,
                                          double u0, double theta0,
                                          double target, double T) {
  p.validate();
  require_regular(p);
  check_theta_eval(theta0);
  if (!(T > 0)) throw std::invalid_argument("stroke period must be positive");
  if (!std::isfinite(target)) throw std::invalid_argument("target must be finite");

  StrokeCase c0 = classify_case(rule, u0, w0_hint);

  if (target == 0 && rule.kind == SwitchingRule::Kind::Sign) {
    StrokePlan s;
    s.rule = rule;
    s.stroke_case = c0;
    s.w0 = case_initial_regime(c0);
    s.u0 = u0;
    s.theta0 = theta0;
    s.T = T;
    s.trivial = true;
    return {s};
  }
  if (rule.kind == SwitchingRule::Kind::Sign && target < 0) {
    throw InfeasibleError(
        "the sign rule only moves forward: negative displacement targets "
        "are not realizable");
  }

  const int dir = target >= 0 ? +1 : -1;
  double rcap = capacity(p, rule, c0, theta0, dir);
  if (c0 == StrokeCase::ThermostatInBandViscous ||
      c0 == StrokeCase::ThermostatInBandIdeal) {
    rcap = std::min(rcap, capacity(p, rule, flip_in_band(c0), theta0, dir));
  }
  int N = 1;
  if (std::abs(target) >= 0.9 * rcap) {
    if (!(rcap > 0)) {
      std::ostringstream os;
      os << "target " << target << " unreachable: per-stroke capacity is 0 in this direction";
      throw InfeasibleError(os.str());
    }
    N = static_cast<int>(std::ceil(std::abs(target) / (0.9 * rcap)));
  }

  std::vector<StrokePlan> plans;
  StrokeCase c = c0;
  for (int i = 0; i < N; ++i) {
    StrokePlan s;
    s.rule = rule;
    s.stroke_case = c;
    s.w0 = case_initial_regime(c);
    s.u0 = u0;
    s.theta0 = theta0;
    s.switch_angles = solve_stroke(p, rule, c, theta0, target / N, u0);
    s.predicted_dx = stroke_displacement(p, c, theta0, s.switch_angles);

    s.T = T / N;
    auto arcs = stroke_arcs(rule, c, theta0, u0, s.switch_angles);
    std::vector<double> desired;
    const auto fr = interior_fractions(static_cast<int>(s.switch_angles.size()));
    double prev = 0;
    for (double f : fr) {
      desired.push_back((f - prev) * s.T);
      prev = f;
    }
    desired.push_back((1 - prev) * s.T);
    const auto tau = allocate_durations(arcs, desired, s.T);
    double t = 0;
    for (std::size_t j = 0; j + 1 < tau.size(); ++j) {
      t += tau[j];
      s.switch_times.push_back(t);
    }
    plans.push_back(std::move(s));
    c = flip_in_band(c);
  }
  return plans;
}

int expected_event_count(const std::vector<StrokePlan>& plan) {
  int n = 0;
  for (const StrokePlan& s : plan) {
    if (!s.trivial) n += static_cast<int>(s.switch_angles.size());
  }
  return n;
}

int expected_event_count(const TransferPlan& plan) {
  int n = expected_event_count(plan.phase1) + expected_event_count(plan.phase3);
  if (plan.leg) n += plan.leg->wrap_events;
  return n;
}

namespace {

void append_stroke(std::vector<Node>& nodes, const Params& p,
                   const StrokePlan& s, RealizeKind kind) {
  (void)p;
  if (s.trivial) {
    const double t0 = nodes.back().t;
    nodes.push_back({t0 + s.T, s.theta0, 0});
    return;
  }
  auto arcs = stroke_arcs(s.rule, s.stroke_case, s.theta0, s.u0, s.switch_angles);
  const auto tau = durations_from_times(s);
  for (std::size_t j = 0; j < arcs.size(); ++j) {
    if (kind == RealizeKind::Smooth) {
      append_arc_smooth(nodes, arcs[j], tau[j]);
    } else {
      append_arc_pwc(nodes, arcs[j], tau[j]);
    }
  }
}

ControlSignal finish_signal(std::vector<Node> nodes, RealizeKind kind,
                            const SwitchingRule& rule, Regime w0,
                            int expected_events) {
  NodeConstraints c;
  c.nodes = std::move(nodes);
  c.periodic = false;
  ControlSignal sig = kind == RealizeKind::Smooth ? build_smooth_control(c)
                                                  : build_piecewise_constant(c);
  const auto rep = validate_against_rule(sig, rule, w0, expected_events);
  if (!rep.ok) {
    std::ostringstream os;
    os << "realized control violates the switching rule at t = "
       << rep.violations.front().t << ": " << rep.violations.front().what;
    throw CoherenceError(os.str());
  }
  return sig;
}

}  // namespace

ControlSignal realize_plan(const Params& p, const std::vector<StrokePlan>& plan,
                           RealizeKind kind) {
  if (plan.empty()) throw std::invalid_argument("empty stroke plan");
  std::vector<Node> nodes;
  const StrokePlan& first = plan.front();
  nodes.push_back({0.0, first.theta0, first.trivial ? 0.0 : first.u0});
  for (const StrokePlan& s : plan) append_stroke(nodes, p, s, kind);
  return finish_signal(std::move(nodes), kind, first.rule,
                       initial_regime(first.rule,
                                      first.trivial ? 0.0 : first.u0,
                                      first.w0),
                       expected_event_count(plan));
}

TransferPlan plan_transfer(const Params& p, const SwitchingRule& rule,
                           std::optional<Regime> w0_hint, double u0,
                           double x0, double theta0, double xf, double thetaf) {
  p.validate();
  require_regular(p);
  check_theta_eval(theta0);
  check_theta_eval(thetaf);
  if (rule.kind == SwitchingRule::Kind::Sign) {
    throw InfeasibleError(
        "the sign rule only moves forward and cannot cancel the angle-move "
        "drift: transfers need the magnitude or thermostat rule");
  }

  TransferPlan plan;
  plan.phase1 = plan_displacement(p, rule, w0_hint, u0, theta0, xf - x0, 7.0);

  Regime w = initial_regime(rule, u0, w0_hint);
  for (const StrokePlan& s : plan.phase1) {
    if (!s.trivial) w = stroke_end_regime(s);
  }

  if (thetaf != theta0) {
    TransferLeg leg;
    leg.theta_from = theta0;
    leg.theta_to = thetaf;
    leg.w = w;
    const double dth = thetaf - theta0;
    if (rule.kind == SwitchingRule::Kind::Magnitude && w == Regime::Ideal &&
        sgn(dth) != sgn(u0)) {
      // drop into the band, move slowly, and climb back out: two events
      leg.wrap_events = 2;
      const int s = sgn(u0);
      const double tha = theta0 + s * offset_room(theta0);
      const double thb = thetaf - s * offset_room(thetaf);
      leg.drift = f_primitive(p, Regime::Ideal, tha) -
                  f_primitive(p, Regime::Ideal, theta0) +
                  f_primitive(p, Regime::Viscous, thb) -
                  f_primitive(p, Regime::Viscous, tha) +
                  f_primitive(p, Regime::Ideal, thetaf) -
                  f_primitive(p, Regime::Ideal, thb);
      leg.duration = std::max(1.0, 3.0 * std::abs(dth) / rule.threshold);
    } else {
      leg.drift = f_primitive(p, w, thetaf) - f_primitive(p, w, theta0);
      // slow enough for an in-band move when the band forces one
      const double e = rule.threshold;
      const bool needs_slow =
          (rule.kind == SwitchingRule::Kind::Thermostat &&
           ((w == Regime::Ideal && dth < 0) || (w == Regime::Viscous && dth > 0)));
      leg.duration = needs_slow ? std::max(1.0, std::abs(dth) / (0.4 * e))
                                : std::max(1.0, std::abs(dth) / 1.0);
    }
    plan.leg = leg;
    plan.phase3 = plan_displacement(p, rule, w, u0, thetaf, -leg.drift, 7.0);
  } else if (std::abs(xf - x0) == 0.0) {
    // nothing else to do
  } else {
    plan.phase3 = {};
  }
  return plan;
}

namespace {

void append_leg(std::vector<Node>& nodes, const SwitchingRule& rule,
                const TransferLeg& leg) {
  const double U = kUCap;
  const double e = rule.threshold;
  std::vector<Arc> arcs;
  std::vector<double> tau;
  if (leg.wrap_events == 2) {
    // magnitude rule, ideal regime, direction against sign(u): ramp down to
    // the threshold, cross into the band, move slowly, climb back out
    const double M = e;
    const double u0 = nodes.back().u;
    const int s = sgn(u0);
    const double tha = leg.theta_from + s * offset_room(leg.theta_from);
    const double thb = leg.theta_to - s * offset_room(leg.theta_to);
    const double ilo = s > 0 ? M : -U;
    const double ihi = s > 0 ? U : -M;
    arcs.push_back(make_arc(leg.theta_from, tha, u0, s * M, ilo, ihi, M, 0, 0));
    arcs.push_back(make_arc(tha, thb, s * M, s * M, -M, M, M, -s, s * M));
    arcs.push_back(make_arc(thb, leg.theta_to, s * M, u0, ilo, ihi, M, s, s * M));
    double T = leg.duration;
    std::vector<double> desired{0.1 * T, 0.8 * T, 0.1 * T};
    tau = allocate_durations(arcs, desired, T);
  } else {
    double lo = -U, hi = U;
    if (rule.kind == SwitchingRule::Kind::Thermostat) {
      if (leg.w == Regime::Ideal) lo = -e; else hi = e;
    } else if (rule.kind == SwitchingRule::Kind::Magnitude) {
      if (leg.w == Regime::Viscous) { lo = -e; hi = e; }
      else if (nodes.back().u > 0) lo = e; else hi = -e;
    }
    arcs.push_back(make_arc(leg.theta_from, leg.theta_to, nodes.back().u,
                            nodes.back().u, lo, hi, std::max(e, 0.1), 0, 0));
    double T = leg.duration;
    std::vector<double> desired{T};
    tau = allocate_durations(arcs, desired, T);
  }
  for (std::size_t j = 0; j < arcs.size(); ++j) {
    append_arc_smooth(nodes, arcs[j], tau[j]);
  }
}

}  // namespace

ControlSignal realize_transfer(const Params& p, const TransferPlan& plan,
                               RealizeKind kind) {
  if (plan.phase1.empty()) throw std::invalid_argument("empty transfer plan");
  if (kind == RealizeKind::PiecewiseConstant && plan.leg) {
    throw std::invalid_argument(
        "transfer realization is only provided for the smooth control kind");
  }
  std::vector<Node> nodes;
  const StrokePlan& first = plan.phase1.front();
  nodes.push_back({0.0, first.theta0, first.trivial ? 0.0 : first.u0});
  for (const StrokePlan& s : plan.phase1) append_stroke(nodes, p, s, kind);
  if (plan.leg) append_leg(nodes, first.rule, *plan.leg);
  for (const StrokePlan& s : plan.phase3) append_stroke(nodes, p, s, kind);
  return finish_signal(std::move(nodes), kind, first.rule,
                       initial_regime(first.rule,
                                      first.trivial ? 0.0 : first.u0,
                                      first.w0),
                       expected_event_count(plan));
}

}  // namespace scallop
