#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scallop/control.hpp"

namespace scallop {

struct Sample {
  double t = 0;
  double x = 0;
  double theta = 0;
  double u = 0;
  Regime w = Regime::Viscous;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<SwitchEvent> events;
  double x0 = 0;
  double x_final = 0;
  double theta_final = 0;
  Regime w_final = Regime::Viscous;
  double delta_x = 0;
};

/// Net displacement and trajectory from the primitive identity
/// x(t) - x(s) = F_w(theta(t)) - F_w(theta(s)) on each constant-regime arc.
/// n_samples uniform output rows (plus the event instants) when positive.
Trajectory propagate_exact(const Params& p, const SwitchingRule& rule,
                           const ControlSignal& sig, double x0,
                           std::optional<Regime> w0_hint,
                           int n_samples = 0);

/// Classical RK4 on (x, theta) with steps aligned to switch events and
/// signal breakpoints, nominal step h.
Trajectory propagate_numeric(const Params& p, const SwitchingRule& rule,
                             const ControlSignal& sig, double x0,
                             std::optional<Regime> w0_hint, double h,
                             int n_samples = 0);

/// Initial-regime cases of a single periodic stroke; the names encode the
/// rule and the regime active at the start of the period.
enum class StrokeCase {
  ThermostatInBandViscous,  // |u0| <= eps, w0 = Viscous; one switch angle
  ThermostatInBandIdeal,    // |u0| <= eps, w0 = Ideal; one switch angle
  ThermostatFromAbove,      // u0 > eps; two switch angles
  ThermostatFromBelow,      // u0 < -eps; two switch angles
  SignOpening,              // u0 > 0; two switch angles
  SignClosing,              // u0 < 0; two switch angles
  MagnitudeFromIdeal,       // |u0| > M; four switch angles
  MagnitudeFromViscous,     // |u0| < M; four switch angles
};

Regime case_initial_regime(StrokeCase c);
int case_angle_count(StrokeCase c);
const char* case_name(StrokeCase c);

/// Net displacement of one periodic stroke from its switching angles alone:
/// the telescoping sum of primitive differences over the alternating regime
/// sequence starting and ending at theta0.
double stroke_displacement(const Params& p, StrokeCase c, double theta0,
                           std::span<const double> angles);

}  // namespace scallop
