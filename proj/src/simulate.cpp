#include "scallop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scallop {

namespace {

double u_at_start(const ControlSignal& sig) {
  return sig.has_jumps() ? sig.u_right(0.0) : sig.u(0.0);
}

void check_path_dense(const ControlSignal& sig) {
  for (int i = 0; i <= kScanGridCount; ++i) {
    const double t = sig.T * i / kScanGridCount;
    check_theta_path(sig.theta(t), t);
  }
}

struct SegmentStart {
  double t = 0;
  double theta = 0;
  double x = 0;
  Regime w = Regime::Viscous;
};

}  // namespace

Trajectory propagate_exact(const Params& p, const SwitchingRule& rule,
                           const ControlSignal& sig, double x0,
                           std::optional<Regime> w0_hint, int n_samples) {
  p.validate();
  check_path_dense(sig);
  const Regime w0 = initial_regime(rule, u_at_start(sig), w0_hint);

  Trajectory traj;
  traj.x0 = x0;
  traj.events = find_switch_times(rule, sig, w0);

  std::vector<SegmentStart> segs;
  segs.push_back({0.0, sig.theta(0.0), x0, w0});
  for (const SwitchEvent& e : traj.events) {
    const SegmentStart& s = segs.back();
    const double th = sig.theta(e.t);
    const double x = s.x + f_primitive(p, s.w, th) - f_primitive(p, s.w, s.theta);
    segs.push_back({e.t, th, x, e.to});
  }
  {
    const SegmentStart& s = segs.back();
    const double th = sig.theta(sig.T);
    traj.x_final = s.x + f_primitive(p, s.w, th) - f_primitive(p, s.w, s.theta);
    traj.theta_final = th;
    traj.w_final = s.w;
  }
  traj.delta_x = traj.x_final - x0;

  if (n_samples > 0) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(n_samples) + traj.events.size() + 1);
    for (int j = 0; j <= n_samples; ++j) times.push_back(sig.T * j / n_samples);
    for (const SwitchEvent& e : traj.events) times.push_back(e.t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::size_t si = 0;
    for (double t : times) {
      while (si + 1 < segs.size() && segs[si + 1].t <= t) ++si;
      const SegmentStart& s = segs[si];
      const auto [th, u] = sig.evaluate(t);
      const double x =
          s.x + f_primitive(p, s.w, th) - f_primitive(p, s.w, s.theta);
      traj.samples.push_back({t, x, th, u, s.w});
    }
  }
  return traj;
}

Trajectory propagate_numeric(const Params& p, const SwitchingRule& rule,
                             const ControlSignal& sig, double x0,
                             std::optional<Regime> w0_hint, double h,
                             int n_samples) {
  p.validate();
  if (!(h > 0)) throw std::invalid_argument("integrator step must be positive");
  const Regime w0 = initial_regime(rule, u_at_start(sig), w0_hint);

  Trajectory traj;
  traj.x0 = x0;
  traj.events = find_switch_times(rule, sig, w0);

  // Integration restarts at every event and breakpoint so each RK4 step sees
  // smooth data; optional uniform sample times are also made step boundaries.
  std::vector<double> bounds{0.0, sig.T};
  for (const SwitchEvent& e : traj.events) bounds.push_back(e.t);
  for (const Node& n : sig.breakpoints()) bounds.push_back(n.t);
  if (n_samples > 0) {
    for (int j = 0; j <= n_samples; ++j) bounds.push_back(sig.T * j / n_samples);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [&](double a, double b) {
                             return std::abs(a - b) < 1e-12 * (1 + sig.T);
                           }),
               bounds.end());

  double x = x0;
  double theta = sig.theta(0.0);
  traj.samples.push_back({0.0, x, theta, sig.u(0.0), w0});

  for (std::size_t bi = 0; bi + 1 < bounds.size(); ++bi) {
    const double ta = bounds[bi];
    const double tb = bounds[bi + 1];
    const Regime w = regime_at(rule, traj.events, w0, 0.5 * (ta + tb));
    auto uf = [&](double t) { return t == ta ? sig.u_right(t) : sig.u(t); };
    const int n = std::max(1, static_cast<int>(std::ceil((tb - ta) / h)));
    const double dt = (tb - ta) / n;
    for (int i = 0; i < n; ++i) {
      const double t = ta + dt * i;
      const double u1 = uf(t);
      const double u2 = uf(std::min(t + 0.5 * dt, tb));
      const double u4 = uf(std::min(t + dt, tb));
      const double k1t = u1, k1x = v_regime(p, w, theta) * u1;
      const double k2t = u2, k2x = v_regime(p, w, theta + 0.5 * dt * k1t) * u2;
      const double k3t = u2, k3x = v_regime(p, w, theta + 0.5 * dt * k2t) * u2;
      const double k4t = u4, k4x = v_regime(p, w, theta + dt * k3t) * u4;
      theta += dt / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
      x += dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
      const double t_next = i + 1 == n ? tb : t + dt;
      check_theta_path(theta, t_next);
      traj.samples.push_back({t_next, x, theta, sig.u(t_next),
                              regime_at(rule, traj.events, w0, t_next)});
    }
  }
  traj.x_final = x;
  traj.theta_final = theta;
  traj.w_final = regime_at(rule, traj.events, w0, sig.T);
  traj.delta_x = x - x0;
  return traj;
}

Regime case_initial_regime(StrokeCase c) {
  switch (c) {
    case StrokeCase::ThermostatInBandViscous:
    case StrokeCase::ThermostatFromBelow:
    case StrokeCase::SignClosing:
    case StrokeCase::MagnitudeFromViscous:
      return Regime::Viscous;
    default:
      return Regime::Ideal;
  }
}

int case_angle_count(StrokeCase c) {
  switch (c) {
    case StrokeCase::ThermostatInBandViscous:
    case StrokeCase::ThermostatInBandIdeal:
      return 1;
    case StrokeCase::MagnitudeFromIdeal:
    case StrokeCase::MagnitudeFromViscous:
      return 4;
    default:
      return 2;
  }
}

const char* case_name(StrokeCase c) {
  switch (c) {
    case StrokeCase::ThermostatInBandViscous: return "thermostat-in-band-viscous";
    case StrokeCase::ThermostatInBandIdeal: return "thermostat-in-band-ideal";
    case StrokeCase::ThermostatFromAbove: return "thermostat-from-above";
    case StrokeCase::ThermostatFromBelow: return "thermostat-from-below";
    case StrokeCase::SignOpening: return "sign-opening";
    case StrokeCase::SignClosing: return "sign-closing";
    case StrokeCase::MagnitudeFromIdeal: return "magnitude-from-ideal";
    case StrokeCase::MagnitudeFromViscous: return "magnitude-from-viscous";
  }
  return "?";
}

double stroke_displacement(const Params& p, StrokeCase c, double theta0,
                           std::span<const double> angles) {
  p.validate();
  if (static_cast<int>(angles.size()) != case_angle_count(c)) {
    std::ostringstream os;
    os << case_name(c) << " stroke takes " << case_angle_count(c)
       << " switching angles, got " << angles.size();
    throw std::invalid_argument(os.str());
  }
  check_theta_eval(theta0);
  for (double th : angles) check_theta_eval(th);

  // Telescoping sum of primitive differences over the alternating regime
  // sequence theta0 -> theta1 -> ... -> thetak -> theta0.
  double dx = 0;
  double prev = theta0;
  Regime w = case_initial_regime(c);
  for (double th : angles) {
    dx += f_primitive(p, w, th) - f_primitive(p, w, prev);
    prev = th;
    w = other(w);
  }
  dx += f_primitive(p, w, theta0) - f_primitive(p, w, prev);
  return dx;
}

}  // namespace scallop
