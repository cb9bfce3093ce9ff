#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scallop/switching.hpp"

namespace scallop {

/// One interpolation constraint: theta(t) = theta and dtheta/dt(t) = u.
struct Node {
  double t = 0;
  double theta = 0;
  double u = 0;
};

struct NodeConstraints {
  std::vector<Node> nodes;
  bool periodic = true;  ///< enforce theta(T) = theta(0) (and u for smooth kinds)

  /// Throws std::invalid_argument / DomainError on malformed constraints.
  void validate() const;
};

/// Angular-velocity control u(t) on [0, T], stored as the theta path.
///
/// HermiteTheta: per-segment cubic Hermite interpolation of theta; u = theta'.
/// PolynomialTheta: one global polynomial of degree 2n-1 through all nodes.
/// PiecewiseConstantU: theta piecewise linear; u constant per segment with
/// jumps at breakpoints (left-continuous input convention).
struct ControlSignal {
  enum class Kind { HermiteTheta, PolynomialTheta, PiecewiseConstantU };

  Kind kind = Kind::HermiteTheta;
  std::vector<Node> nodes;   // breakpoints; for pwc, node.u is the slope leaving the node
  std::vector<double> poly;  // PolynomialTheta: monomial coefficients in s = t/T
  double T = 0;

  double duration() const { return T; }
  double theta(double t) const;
  /// Left-continuous at jump discontinuities.
  double u(double t) const;
  /// Right limit of u; differs from u() only at pwc breakpoints.
  double u_right(double t) const;
  std::pair<double, double> evaluate(double t) const;
  bool has_jumps() const { return kind == Kind::PiecewiseConstantU; }
  const std::vector<Node>& breakpoints() const { return nodes; }
};

/// Per-segment cubic Hermite interpolant of the node constraints.
ControlSignal build_smooth_control(const NodeConstraints& c);

/// Single global polynomial of degree 2n-1 matching all node constraints
/// (the one-polynomial variant of the smooth construction).
ControlSignal build_global_polynomial(const NodeConstraints& c);

/// Piecewise-constant u hitting every node angle at its node time; node u
/// values in the constraints are ignored in favor of the segment slopes.
ControlSignal build_piecewise_constant(const NodeConstraints& c);

std::pair<double, double> evaluate(const ControlSignal& sig, double t);

struct RuleViolation {
  double t = 0;
  std::string what;
};

struct ValidationReport {
  bool ok = true;
  std::vector<SwitchEvent> events;
  std::vector<RuleViolation> violations;
};

/// Checks that the signal produces exactly the intended number of switch
/// events, that the angle stays inside the admissible interval, and reports
/// spurious or missing crossings with their locations.
ValidationReport validate_against_rule(const ControlSignal& sig,
                                       const SwitchingRule& rule, Regime w0,
                                       int expected_events);

}  // namespace scallop
