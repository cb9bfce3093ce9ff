#include "scallop/switching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scallop/control.hpp"

namespace scallop {

SwitchingRule SwitchingRule::magnitude(double M) {
  if (!(M > 0)) throw std::invalid_argument("magnitude rule: M must be positive");
  return {Kind::Magnitude, M};
}

SwitchingRule SwitchingRule::sign() { return {Kind::Sign, 0.0}; }

SwitchingRule SwitchingRule::thermostat(double eps) {
  if (!(eps > 0)) {
    throw std::invalid_argument("thermostat rule: epsilon must be positive");
  }
  return {Kind::Thermostat, eps};
}

std::optional<Regime> forced_regime(const SwitchingRule& rule, double u) {
  switch (rule.kind) {
    case SwitchingRule::Kind::Magnitude:
      if (std::abs(u) > rule.threshold) return Regime::Ideal;
      if (std::abs(u) < rule.threshold) return Regime::Viscous;
      return std::nullopt;
    case SwitchingRule::Kind::Sign:
      if (u > 0) return Regime::Ideal;
      if (u < 0) return Regime::Viscous;
      return std::nullopt;
    case SwitchingRule::Kind::Thermostat:
    default:
      if (u > rule.threshold) return Regime::Ideal;
      if (u < -rule.threshold) return Regime::Viscous;
      return std::nullopt;
  }
}

Regime initial_regime(const SwitchingRule& rule, double u0,
                      std::optional<Regime> hint) {
  if (auto forced = forced_regime(rule, u0)) {
    if (hint && *hint != *forced) {
      std::ostringstream os;
      os << "initial regime w0 = " << static_cast<int>(*hint)
         << " contradicts the regime forced by u(0) = " << u0;
      throw CoherenceError(os.str());
    }
    return *forced;
  }
  if (!hint) {
    std::ostringstream os;
    os << "u(0) = " << u0 << " lies in the rule's ambiguous zone and no "
          "initial regime was given";
    throw CoherenceError(os.str());
  }
  return *hint;
}

void ThermostatState::advance(double u, double eps) {
  if (w == Regime::Viscous && u > eps) {
    w = Regime::Ideal;
  } else if (w == Regime::Ideal && u < -eps) {
    w = Regime::Viscous;
  }
  last_u = u;
}

namespace {

// Signed violation function for the current regime: the regime must switch
// as soon as g becomes positive; g <= 0 means the regime may hold.
double violation(const SwitchingRule& rule, Regime w, double u) {
  switch (rule.kind) {
    case SwitchingRule::Kind::Magnitude:
      return w == Regime::Viscous ? std::abs(u) - rule.threshold
                                  : rule.threshold - std::abs(u);
    case SwitchingRule::Kind::Sign:
      return w == Regime::Viscous ? u : -u;
    case SwitchingRule::Kind::Thermostat:
    default:
      return w == Regime::Viscous ? u - rule.threshold : -rule.threshold - u;
  }
}

double threshold_value(const SwitchingRule& rule, Regime from, double u) {
  switch (rule.kind) {
    case SwitchingRule::Kind::Magnitude:
      return u >= 0 ? rule.threshold : -rule.threshold;
    case SwitchingRule::Kind::Sign:
      return 0.0;
    case SwitchingRule::Kind::Thermostat:
    default:
      return from == Regime::Viscous ? rule.threshold : -rule.threshold;
  }
}

std::vector<SwitchEvent> events_pwc(const SwitchingRule& rule,
                                    const ControlSignal& sig, Regime w0) {
  std::vector<SwitchEvent> events;
  Regime w = initial_regime(rule, sig.u_right(0.0), w0);
  const auto& nodes = sig.breakpoints();
  // Interior jumps only: within a segment u is constant, so a crossing can
  // happen only at the jump instant, and a jump landing in the ambiguous
  // zone holds the previous output.
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const double u_next = nodes[i].u;
    if (auto forced = forced_regime(rule, u_next); forced && *forced != w) {
      events.push_back({nodes[i].t, w, *forced, threshold_value(rule, w, u_next)});
      w = *forced;
    }
  }
  return events;
}

std::vector<SwitchEvent> events_continuous(const SwitchingRule& rule,
                                           const ControlSignal& sig, Regime w0) {
  // Scan grid: every breakpoint plus a uniform grid of kScanGridCount steps.
  std::vector<double> grid;
  grid.reserve(kScanGridCount + sig.breakpoints().size() + 2);
  for (int i = 0; i <= kScanGridCount; ++i) {
    grid.push_back(sig.T * i / kScanGridCount);
  }
  for (const Node& n : sig.breakpoints()) grid.push_back(n.t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) {
                           return std::abs(a - b) < 1e-13 * (1 + sig.T);
                         }),
             grid.end());

  std::vector<SwitchEvent> events;
  Regime w = initial_regime(rule, sig.u(0.0), w0);
  double t_prev = grid.front();
  double g_prev = violation(rule, w, sig.u(t_prev));
  for (std::size_t k = 1; k < grid.size(); ++k) {
    double t_cur = grid[k];
    for (int pass = 0; pass < 4; ++pass) {
      const double g_cur = violation(rule, w, sig.u(t_cur));
      if (!(g_cur > 0)) {
        g_prev = g_cur;
        break;
      }
      // Bisect the boundary of the violated set; keep an exact root when
      // the threshold is hit exactly (typically at a signal breakpoint).
      double lo = t_prev, hi = t_cur;
      double g_lo = g_prev;
      while (hi - lo > kEventTimeTol) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = violation(rule, w, sig.u(mid));
        if (g_mid > 0) {
          hi = mid;
        } else {
          lo = mid;
          g_lo = g_mid;
        }
      }
      const double t_e = g_lo == 0.0 ? lo : 0.5 * (lo + hi);
      const Regime to = other(w);
      events.push_back({t_e, w, to, threshold_value(rule, w, sig.u(t_e))});
      w = to;
      // Re-examine (t_e, t_cur] under the new regime.
      t_prev = t_e;
      g_prev = 0.0;
    }
    t_prev = t_cur;
  }
  return events;
}

}  // namespace

std::vector<SwitchEvent> find_switch_times(const SwitchingRule& rule,
                                           const ControlSignal& sig, Regime w0) {
  if (sig.has_jumps()) return events_pwc(rule, sig, w0);
  return events_continuous(rule, sig, w0);
}

Regime regime_at(const SwitchingRule& rule, const std::vector<SwitchEvent>& events,
                 Regime w0, double t) {
  (void)rule;
  std::size_t flips = 0;
  for (const SwitchEvent& e : events) {
    if (e.t <= t) {
      ++flips;
    } else {
      break;
    }
  }
  return flips % 2 == 0 ? w0 : other(w0);
}

}  // namespace scallop
