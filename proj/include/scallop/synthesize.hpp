#pragma once

#include <array>
#include <optional>
#include <vector>

#include "scallop/simulate.hpp"

namespace scallop {

/// Switching-angle skeleton of one periodic stroke; together with the case
/// it determines the net displacement regardless of the control shape.
struct StrokePlan {
  SwitchingRule rule;
  StrokeCase stroke_case = StrokeCase::ThermostatInBandViscous;
  Regime w0 = Regime::Viscous;
  double u0 = 0;
  double theta0 = 0;
  std::vector<double> switch_angles;
  std::vector<double> switch_times;
  double T = 0;
  double predicted_dx = 0;
  bool trivial = false;  ///< zero-event stroke (sign rule, target 0)
};

struct ReachableRadius {
  double r = 0;
};

/// theta1 with (F1 - F2)(theta1) - (F1 - F2)(theta0) = target, i.e.
/// gap(theta1) = gap(theta0) - target; strictly decreasing in theta1, so
/// bisection on the clamped interval is certified.
double solve_single_angle(const Params& p, double theta0, double target);

/// (theta1, theta2) with gap(theta1) - gap(theta2) = target; symmetric about
/// theta0 while the bracket allows, else one angle pinned at an interval end.
std::array<double, 2> solve_symmetric_pair(const Params& p, double theta0,
                                           double target);

/// Four angles with gap(t1)+gap(t3)-gap(t2)-gap(t4) = target, already
/// permuted to an ordering realizable under the Magnitude rule with initial
/// velocity sign `s` (+1 when u0 > M, -1 when u0 < -M).
std::array<double, 4> solve_four_angles(const Params& p, double theta0,
                                        double target, int s = +1);

/// First of {identity, (t1,t4,t3,t2), (t3,t4,t1,t2), (t3,t2,t1,t4)} whose
/// ordering satisfies the magnitude switching scheme for sign `s`:
/// s(theta1-theta0) > 0, s(theta2-theta3) > 0, s(theta0-theta4) > 0.
std::optional<std::array<double, 4>> admissible_four_ordering(
    const std::array<double, 4>& angles, double theta0, int s);

/// Largest magnitude such that every |target| < r is one-stroke realizable
/// at theta0 in both directions (the minimum of the two directional caps).
ReachableRadius reachable_radius(const Params& p, const SwitchingRule& rule,
                                 StrokeCase c, double theta0);

StrokeCase classify_case(const SwitchingRule& rule, double u0,
                         std::optional<Regime> w0_hint);

/// Strokes realizing a net displacement `target` from (theta0, u0); long
/// targets are split into ceil(|target| / (0.9 r)) strokes. Stroke periods
/// default to T/N but are stretched when the rule's velocity bands make the
/// requested timing impossible (slow in-band angle moves need time).
std::vector<StrokePlan> plan_displacement(const Params& p,
                                          const SwitchingRule& rule,
                                          std::optional<Regime> w0_hint,
                                          double u0, double theta0,
                                          double target, double T);

/// Phase (ii) of a transfer: one event-free constant-regime angle move whose
/// drift is the primitive difference. Under the Magnitude rule in the Ideal
/// regime the move is bracketed by one down- and one up-crossing so the
/// angle can travel slowly inside the band (wrap_events = 2).
struct TransferLeg {
  double theta_from = 0;
  double theta_to = 0;
  Regime w = Regime::Viscous;
  double duration = 0;
  double drift = 0;
  int wrap_events = 0;
};

struct TransferPlan {
  std::vector<StrokePlan> phase1;  ///< strokes at theta0 covering xf - x0
  std::optional<TransferLeg> leg;  ///< empty when thetaf == theta0
  std::vector<StrokePlan> phase3;  ///< strokes at thetaf cancelling the drift
};

TransferPlan plan_transfer(const Params& p, const SwitchingRule& rule,
                           std::optional<Regime> w0_hint, double u0,
                           double x0, double theta0, double xf, double thetaf);

enum class RealizeKind { Smooth, PiecewiseConstant };

/// One control signal spanning all strokes back to back, validated against
/// the rule for the exact expected event count.
ControlSignal realize_plan(const Params& p, const std::vector<StrokePlan>& plan,
                           RealizeKind kind);

ControlSignal realize_transfer(const Params& p, const TransferPlan& plan,
                               RealizeKind kind);

/// Total switch events the realized signal must produce.
int expected_event_count(const std::vector<StrokePlan>& plan);
int expected_event_count(const TransferPlan& plan);

}  // namespace scallop
