#include "scallop/model.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace scallop {

void Params::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(a > 0)) fail("params: a must be positive");
  if (!(b > 0)) fail("params: b must be positive");
  if (!(b < a)) fail("params: slenderness requires b < a");
  if (!(xi > 0)) fail("params: xi must be positive");
  if (!(eta > 0)) fail("params: eta must be positive");
  if (!(m > 0)) fail("params: m must be positive");
  if (!(rho > 0)) fail("params: rho must be positive");
}

void require_regular(const Params& p) {
  if (!p.regular()) {
    std::ostringstream os;
    os << "regularity condition violated: m*a*(eta-xi) + rho*pi*(xi*a^2 - eta*b^2) = "
       << p.regularity_margin() << " <= 0; F2 - F1 may be non-monotone and "
          "synthesis refuses this parameter set";
    throw InfeasibleError(os.str());
  }
}

void check_theta_eval(double theta) {
  if (!(theta > -kThetaMargin) || !(theta < kPi / 2 + kThetaMargin)) {
    std::ostringstream os;
    os << "theta = " << theta << " outside (0, pi/2) by more than the margin "
       << kThetaMargin;
    throw DomainError(os.str());
  }
}

void check_theta_path(double theta, double t) {
  if (!(theta >= theta_min()) || !(theta <= theta_max())) {
    std::ostringstream os;
    os << "theta(t) = " << theta << " at t = " << t
       << " leaves the admissible interval [" << theta_min() << ", "
       << theta_max() << "]";
    throw DomainError(os.str());
  }
}

double v_viscous(const Params& p, double theta) {
  check_theta_eval(theta);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return p.a * p.eta * s / (p.xi * c * c + p.eta * s * s);
}

double v_ideal(const Params& p, double theta) {
  check_theta_eval(theta);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double ma = p.rho * kPi * p.a * p.a;  // added mass along the minor axis
  const double mb = p.rho * kPi * p.b * p.b;  // added mass along the major axis
  return p.a * s * (p.m + ma) / (p.m + mb * c * c + ma * s * s);
}

double v_regime(const Params& p, Regime w, double theta) {
  return w == Regime::Viscous ? v_viscous(p, theta) : v_ideal(p, theta);
}

namespace {

double quadrature_primitive(const Params& p, Regime w, double theta) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double th) { return v_regime(p, w, th); };
  return gauss_kronrod<double, 61>::integrate(f, kPi / 4, theta, 12, 1e-14);
}

// Viscous closed form for eta > xi: d/dtheta of this is +V1.
double f1_arctanh(const Params& p, double theta) {
  const double k = std::sqrt((p.eta - p.xi) / p.eta);
  return -p.a * p.eta * std::atanh(k * std::cos(theta)) /
         std::sqrt(p.eta * (p.eta - p.xi));
}

// Ideal closed form; valid for all admissible parameters (b < a).
double f2_closed(const Params& p, double theta) {
  const double s2 = p.m + p.a * p.a * p.rho * kPi;
  const double r2 = p.rho * kPi * (p.a * p.a - p.b * p.b);
  const double s = std::sqrt(s2);
  const double r = std::sqrt(r2);
  return -p.a * s * std::atanh(r * std::cos(theta) / s) / r;
}

}  // namespace

bool f_primitive_is_quadrature(const Params& p, Regime w) {
  return w == Regime::Viscous && p.eta < p.xi;
}

double f_primitive(const Params& p, Regime w, double theta) {
  check_theta_eval(theta);
  if (w == Regime::Ideal) {
    return f2_closed(p, theta) - f2_closed(p, kPi / 4);
  }
  if (p.eta > p.xi) {
    return f1_arctanh(p, theta) - f1_arctanh(p, kPi / 4);
  }
  if (p.eta == p.xi) {
    // V1 degenerates to (a*eta/xi) sin(theta).
    const double c = p.a * p.eta / p.xi;
    return -c * std::cos(theta) + c * std::cos(kPi / 4);
  }
  return quadrature_primitive(p, Regime::Viscous, theta);
}

double gap(const Params& p, double theta) {
  return f_primitive(p, Regime::Ideal, theta) -
         f_primitive(p, Regime::Viscous, theta);
}

}  // namespace scallop
