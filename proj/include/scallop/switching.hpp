#pragma once

#include <optional>
#include <vector>

#include "scallop/model.hpp"

namespace scallop {

struct ControlSignal;

/// Regime-selection law on the angular velocity u = dtheta/dt.
struct SwitchingRule {
  enum class Kind { Magnitude, Sign, Thermostat };

  Kind kind = Kind::Thermostat;
  double threshold = 0.1;  ///< M for Magnitude, epsilon for Thermostat; unused for Sign

  static SwitchingRule magnitude(double M);
  static SwitchingRule sign();
  static SwitchingRule thermostat(double eps);
};

/// A regime change located on the input signal.
struct SwitchEvent {
  double t = 0;
  Regime from = Regime::Viscous;
  Regime to = Regime::Ideal;
  double u_at_event = 0;  ///< triggering threshold value (+-M, 0 or +-eps)
};

/// Memory of the delayed relay, passed by value between evaluations.
struct ThermostatState {
  Regime w = Regime::Viscous;
  double last_u = 0;

  /// Relay update for the next input value. Transitions 1->2 only when u
  /// rises above +eps, 2->1 only when u falls below -eps; the band holds.
  void advance(double u, double eps);
};

/// Regime dictated by the rule when u lies strictly outside the ambiguous
/// zone; nullopt inside it (|u| <= M, u = 0, |u| <= eps respectively).
std::optional<Regime> forced_regime(const SwitchingRule& rule, double u);

/// Resolves the initial regime from u(0) and an optional hint.
/// Throws CoherenceError when the hint contradicts a forced regime and
/// when the zone is ambiguous but no hint was given.
Regime initial_regime(const SwitchingRule& rule, double u0,
                      std::optional<Regime> hint = {});

/// All regime changes of the signal under the rule, in increasing time.
/// Crossings are bracketed on a scan grid (step T/1e4, plus every signal
/// breakpoint) and located by bisection to kEventTimeTol; exact-threshold
/// dwell and tangential grazing produce no event. Piecewise-constant
/// signals use jump semantics: a jump straddling a threshold in the
/// mandatory direction switches at the jump instant, a jump landing
/// inside the ambiguous zone holds.
std::vector<SwitchEvent> find_switch_times(const SwitchingRule& rule,
                                           const ControlSignal& sig, Regime w0);

/// Piecewise-constant reconstruction; right-continuous at events.
Regime regime_at(const SwitchingRule& rule, const std::vector<SwitchEvent>& events,
                 Regime w0, double t);

inline constexpr double kEventTimeTol = 1e-10;
inline constexpr int kScanGridCount = 10000;

}  // namespace scallop
