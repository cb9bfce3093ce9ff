#pragma once

#include <numbers>

#include "scallop/common.hpp"

namespace scallop {

inline constexpr double kPi = std::numbers::pi;

/// Discrete fluid regime selecting which velocity coefficient applies.
enum class Regime : int { Viscous = 1, Ideal = 2 };

inline Regime other(Regime w) {
  return w == Regime::Viscous ? Regime::Ideal : Regime::Viscous;
}

/// Geometric, drag and inertial constants of the two-valve swimmer.
/// All quantities are in one self-consistent unit system (cm, g, s);
/// only ratios enter the reduced dynamics.
struct Params {
  double a = 2.0;    ///< valve half-length
  double b = 0.1;    ///< ellipse semi-minor axis, b < a
  double xi = 1.0;   ///< tangential drag coefficient
  double eta = 2.0;  ///< normal drag coefficient
  double m = 1.0;    ///< lumped mass in the ideal-regime dynamics
  double rho = 1.0;  ///< fluid density

  /// m*a*(eta-xi) + rho*pi*(xi*a^2 - eta*b^2); positive iff the gap
  /// F2 - F1 is strictly increasing and synthesis inversions are monotone.
  double regularity_margin() const {
    return m * a * (eta - xi) + rho * kPi * (xi * a * a - eta * b * b);
  }
  bool regular() const { return regularity_margin() > 0.0; }

  /// Throws std::invalid_argument on nonpositive constants or b >= a.
  void validate() const;
};

/// Throws InfeasibleError with a diagnostic if the regularity condition fails.
void require_regular(const Params& p);

/// Margin keeping the opening angle strictly inside (0, pi/2).
inline constexpr double kThetaMargin = 1e-3;

inline double theta_min() { return kThetaMargin; }
inline double theta_max() { return kPi / 2 - kThetaMargin; }

/// Throws DomainError when theta lies outside (0, pi/2) by more than the
/// margin. Evaluation functions tolerate the closed endpoints.
void check_theta_eval(double theta);

/// Throws DomainError when theta leaves the clamped trajectory interval
/// [kThetaMargin, pi/2 - kThetaMargin].
void check_theta_path(double theta, double t);

/// Viscous-regime velocity coefficient V1.
double v_viscous(const Params& p, double theta);

/// Ideal-regime velocity coefficient V2.
double v_ideal(const Params& p, double theta);

double v_regime(const Params& p, Regime w, double theta);

/// Antiderivative of V_w with the convention F_w(pi/4) = 0.
double f_primitive(const Params& p, Regime w, double theta);

/// True when f_primitive(p, w, .) falls back to adaptive quadrature
/// (viscous primitive with eta < xi has no real arctanh branch).
bool f_primitive_is_quadrature(const Params& p, Regime w);

/// (F2 - F1)(theta); strictly increasing under the regularity condition.
double gap(const Params& p, double theta);

}  // namespace scallop
