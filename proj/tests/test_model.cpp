#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scallop/model.hpp"

using namespace scallop;

namespace {

// Composite Simpson quadrature of V_w from pi/4 to theta, independent of the
// closed forms used by f_primitive.
double simpson_primitive(const Params& p, Regime w, double theta) {
  const int n = 20000;
  const double a = kPi / 4;
  const double h = (theta - a) / n;
  double s = v_regime(p, w, a) + v_regime(p, w, theta);
  for (int i = 1; i < n; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * v_regime(p, w, a + i * h);
  }
  return s * h / 3;
}

}  // namespace

TEST_CASE("parameter validation") {
  Params p;
  CHECK_NOTHROW(p.validate());
  p.b = 3.0;  // b >= a
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = Params{};
  p.eta = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("regularity condition") {
  Params p;
  CHECK(p.regularity_margin() ==
        doctest::Approx(2.0 + kPi * (4.0 - 0.02)).epsilon(1e-15));
  CHECK(p.regular());
  CHECK_NOTHROW(require_regular(p));
  // eta < xi with heavy mass and a near-circular valve breaks it
  Params q;
  q.a = 1.0;
  q.b = 0.99;
  q.xi = 5.0;
  q.eta = 0.1;
  q.m = 10.0;
  CHECK_FALSE(q.regular());
  CHECK_THROWS_AS(require_regular(q), InfeasibleError);
}

TEST_CASE("velocity coefficients at pi/4") {
  Params p;
  CHECK(v_viscous(p, kPi / 4) == doctest::Approx(1.8856180831641267).epsilon(1e-15));
  CHECK(v_ideal(p, kPi / 4) == doctest::Approx(2.6285828007223588).epsilon(1e-15));
}

TEST_CASE("angle domain guards") {
  Params p;
  CHECK_NOTHROW(v_ideal(p, kPi / 2 - 1e-9));
  CHECK_NOTHROW(v_viscous(p, 1e-9));
  CHECK_THROWS_AS(v_ideal(p, kPi / 2 + 2e-3), DomainError);
  CHECK_THROWS_AS(v_viscous(p, -2e-3), DomainError);
  CHECK_THROWS_AS(check_theta_path(theta_max() + 1e-6, 0.0), DomainError);
  CHECK_NOTHROW(check_theta_path(theta_max(), 0.0));
}

TEST_CASE("primitive normalization and closed forms") {
  Params p;
  CHECK(f_primitive(p, Regime::Viscous, kPi / 4) == 0.0);
  CHECK(f_primitive(p, Regime::Ideal, kPi / 4) == 0.0);
  CHECK(f_primitive(p, Regime::Viscous, 1.2) ==
        doctest::Approx(0.81244171867941921).epsilon(1e-14));
  CHECK(f_primitive(p, Regime::Ideal, 1.2) ==
        doctest::Approx(0.96756390230008144).epsilon(1e-14));
  CHECK(f_primitive(p, Regime::Viscous, 0.3) ==
        doctest::Approx(-0.76800382952217554).epsilon(1e-14));
  CHECK(f_primitive(p, Regime::Ideal, 0.3) ==
        doctest::Approx(-1.5595353693926471).epsilon(1e-14));
  CHECK_FALSE(f_primitive_is_quadrature(p, Regime::Viscous));
  CHECK_FALSE(f_primitive_is_quadrature(p, Regime::Ideal));
}

TEST_CASE("primitives agree with Simpson quadrature") {
  Params p;
  for (double th : {0.1, 0.5, 1.0, 1.4, theta_max()}) {
    for (Regime w : {Regime::Viscous, Regime::Ideal}) {
      CHECK(f_primitive(p, w, th) ==
            doctest::Approx(simpson_primitive(p, w, th)).epsilon(1e-10));
    }
  }
}

TEST_CASE("equal drag coefficients degenerate branch") {
  Params p;
  p.eta = 1.0;
  p.xi = 1.0;
  // V1 reduces to a*sin(theta), so F1 = -a*cos(theta) + a*cos(pi/4)
  CHECK(f_primitive(p, Regime::Viscous, 1.2) ==
        doctest::Approx(-2 * std::cos(1.2) + 2 * std::cos(kPi / 4)).epsilon(1e-15));
  CHECK(f_primitive(p, Regime::Viscous, 1.2) ==
        doctest::Approx(simpson_primitive(p, Regime::Viscous, 1.2)).epsilon(1e-12));
}

TEST_CASE("eta < xi falls back to quadrature") {
  Params p;
  p.eta = 1.0;
  p.xi = 2.0;
  CHECK(f_primitive_is_quadrature(p, Regime::Viscous));
  CHECK_FALSE(f_primitive_is_quadrature(p, Regime::Ideal));
  CHECK(f_primitive(p, Regime::Viscous, 1.2) ==
        doctest::Approx(0.53567690215338066).epsilon(1e-13));
  CHECK(f_primitive(p, Regime::Viscous, 0.2) ==
        doctest::Approx(simpson_primitive(p, Regime::Viscous, 0.2)).epsilon(1e-10));
}

TEST_CASE("gap is strictly increasing with known derivative") {
  Params p;
  CHECK(gap(p, 1.0) == doctest::Approx(0.11124590989215404).epsilon(1e-13));
  const double h = 1e-6;
  const double fd = (gap(p, kPi / 4 + h) - gap(p, kPi / 4 - h)) / (2 * h);
  CHECK(fd == doctest::Approx(0.74296471755823211).epsilon(1e-9));
  double prev = gap(p, theta_min());
  for (int i = 1; i <= 200; ++i) {
    const double th = theta_min() + (theta_max() - theta_min()) * i / 200.0;
    const double g = gap(p, th);
    CHECK(g > prev);
    prev = g;
  }
  CHECK(gap(p, theta_max()) - gap(p, theta_min()) ==
        doctest::Approx(1.5891389925714340).epsilon(1e-13));
}
