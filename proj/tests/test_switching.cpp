#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scallop/control.hpp"

using namespace scallop;

namespace {

// Hermite signal whose u is exactly piecewise linear: theta accumulates the
// trapezoid integral of the node velocities, so each segment is a quadratic
// that the cubic interpolant reproduces.
ControlSignal linear_u_signal(double theta0, const std::vector<double>& times,
                              const std::vector<double>& us) {
  ControlSignal sig;
  sig.kind = ControlSignal::Kind::HermiteTheta;
  double th = theta0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) {
      th += 0.5 * (us[i] + us[i - 1]) * (times[i] - times[i - 1]);
    }
    sig.nodes.push_back({times[i], th, us[i]});
  }
  sig.T = times.back();
  return sig;
}

}  // namespace

TEST_CASE("rule factories validate thresholds") {
  CHECK_THROWS_AS(SwitchingRule::magnitude(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SwitchingRule::thermostat(-1.0), std::invalid_argument);
  CHECK_NOTHROW(SwitchingRule::sign());
}

TEST_CASE("forced regime per rule") {
  const auto th = SwitchingRule::thermostat(0.1);
  CHECK(forced_regime(th, 0.5) == Regime::Ideal);
  CHECK(forced_regime(th, -0.5) == Regime::Viscous);
  CHECK_FALSE(forced_regime(th, 0.05).has_value());
  CHECK_FALSE(forced_regime(th, 0.1).has_value());

  const auto mag = SwitchingRule::magnitude(1.0);
  CHECK(forced_regime(mag, -2.0) == Regime::Ideal);
  CHECK(forced_regime(mag, 0.5) == Regime::Viscous);
  CHECK_FALSE(forced_regime(mag, 1.0).has_value());

  const auto sg = SwitchingRule::sign();
  CHECK(forced_regime(sg, 0.3) == Regime::Ideal);
  CHECK(forced_regime(sg, -0.3) == Regime::Viscous);
  CHECK_FALSE(forced_regime(sg, 0.0).has_value());
}

TEST_CASE("initial regime resolution") {
  const auto th = SwitchingRule::thermostat(0.1);
  CHECK(initial_regime(th, 0.5) == Regime::Ideal);
  CHECK(initial_regime(th, 0.05, Regime::Viscous) == Regime::Viscous);
  CHECK(initial_regime(th, 0.05, Regime::Ideal) == Regime::Ideal);
  CHECK_THROWS_AS(initial_regime(th, 0.05), CoherenceError);
  CHECK_THROWS_AS(initial_regime(th, 0.5, Regime::Viscous), CoherenceError);
}

TEST_CASE("thermostat relay memory") {
  ThermostatState st;
  st.w = Regime::Viscous;
  st.advance(0.05, 0.1);
  CHECK(st.w == Regime::Viscous);
  st.advance(0.2, 0.1);
  CHECK(st.w == Regime::Ideal);
  st.advance(0.0, 0.1);
  CHECK(st.w == Regime::Ideal);
  st.advance(-0.05, 0.1);
  CHECK(st.w == Regime::Ideal);
  st.advance(-0.2, 0.1);
  CHECK(st.w == Regime::Viscous);
  st.advance(0.09, 0.1);
  CHECK(st.w == Regime::Viscous);
}

TEST_CASE("magnitude rule: linear decay produces a single exact event") {
  // u(t) = 2 - t on [0, 3]; |u| crosses M = 1 downward at t = 1 and only
  // touches -1 at the endpoint, which is not a crossing.
  const auto sig = linear_u_signal(0.1, {0, 1, 2, 3}, {2, 1, 0, -1});
  const auto ev = find_switch_times(SwitchingRule::magnitude(1.0), sig,
                                    Regime::Ideal);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].t == 1.0);  // node-exact root
  CHECK(ev[0].from == Regime::Ideal);
  CHECK(ev[0].to == Regime::Viscous);
  CHECK(ev[0].u_at_event == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermostat hysteresis skips in-band wiggles") {
  const auto sig = linear_u_signal(
      0.3, {0, 1, 2, 3, 4, 5}, {0.5, 0.0, 0.5, -0.5, 0.05, 0.5});
  const auto rule = SwitchingRule::thermostat(0.1);
  const auto ev = find_switch_times(rule, sig, Regime::Ideal);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].t == doctest::Approx(2.6).epsilon(1e-8));
  CHECK(ev[0].to == Regime::Viscous);
  CHECK(ev[0].u_at_event == doctest::Approx(-0.1).epsilon(1e-9));
  CHECK(ev[1].t == doctest::Approx(4.0 + 1.0 / 9).epsilon(1e-8));
  CHECK(ev[1].to == Regime::Ideal);
  CHECK(ev[1].u_at_event == doctest::Approx(0.1).epsilon(1e-9));

  SUBCASE("events are rate independent") {
    const auto slow = linear_u_signal(
        0.3, {0, 2, 4, 6, 8, 10}, {0.5, 0.0, 0.5, -0.5, 0.05, 0.5});
    const auto ev2 = find_switch_times(rule, slow, Regime::Ideal);
    REQUIRE(ev2.size() == 2);
    CHECK(ev2[0].t == doctest::Approx(5.2).epsilon(1e-8));
    CHECK(ev2[1].t == doctest::Approx(8.0 + 2.0 / 9).epsilon(1e-8));
  }
}

TEST_CASE("sign rule: node-exact zero crossings") {
  // piecewise-linear surrogate of cos(pi t / 2): zeros at t = 1 and t = 3
  const auto sig = linear_u_signal(0.3, {0, 1, 2, 3, 4}, {1, 0, -1, 0, 1});
  const auto ev = find_switch_times(SwitchingRule::sign(), sig, Regime::Ideal);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].t == 1.0);
  CHECK(ev[0].to == Regime::Viscous);
  CHECK(ev[1].t == 3.0);
  CHECK(ev[1].to == Regime::Ideal);
}

TEST_CASE("grazing the threshold is not an event") {
  // u rises to exactly +0.1 and returns: the thermostat band holds.
  const auto sig = linear_u_signal(0.3, {0, 1, 2}, {0.0, 0.1, 0.0});
  const auto ev =
      find_switch_times(SwitchingRule::thermostat(0.1), sig, Regime::Viscous);
  CHECK(ev.empty());
}

TEST_CASE("piecewise-constant jump semantics") {
  SUBCASE("jump across the magnitude threshold switches at the breakpoint") {
    NodeConstraints c;
    c.periodic = false;
    c.nodes = {{0, 0.2, 0}, {1, 0.7, 0}, {2, 1.4, 0}, {3, 1.5, 0}};
    const auto sig = build_piecewise_constant(c);  // slopes 0.5, 0.7, 0.1
    const auto ev =
        find_switch_times(SwitchingRule::magnitude(0.6), sig, Regime::Viscous);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].t == 1.0);  // 0.5 -> 0.7 crosses M = 0.6 upward
    CHECK(ev[0].to == Regime::Ideal);
    CHECK(ev[1].t == 2.0);  // 0.7 -> 0.2 lands back below M
    CHECK(ev[1].to == Regime::Viscous);
  }
  SUBCASE("jump landing inside the thermostat band holds") {
    NodeConstraints c;
    c.periodic = false;
    c.nodes = {{0, 0.2, 0}, {1, 1.2, 0}, {2, 1.2, 0}, {3, 0.2, 0}};
    const auto sig = build_piecewise_constant(c);  // slopes 1, 0, -1
    const auto ev =
        find_switch_times(SwitchingRule::thermostat(0.5), sig, Regime::Ideal);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].t == 2.0);  // 1 -> 0 holds, 0 -> -1 switches
    CHECK(ev[0].to == Regime::Viscous);
  }
}

TEST_CASE("regime reconstruction from events") {
  const auto rule = SwitchingRule::thermostat(0.1);
  std::vector<SwitchEvent> ev = {
      {1.0, Regime::Ideal, Regime::Viscous, -0.1},
      {3.0, Regime::Viscous, Regime::Ideal, 0.1},
  };
  CHECK(regime_at(rule, ev, Regime::Ideal, 0.0) == Regime::Ideal);
  CHECK(regime_at(rule, ev, Regime::Ideal, 0.999) == Regime::Ideal);
  CHECK(regime_at(rule, ev, Regime::Ideal, 1.0) == Regime::Viscous);
  CHECK(regime_at(rule, ev, Regime::Ideal, 2.5) == Regime::Viscous);
  CHECK(regime_at(rule, ev, Regime::Ideal, 3.5) == Regime::Ideal);
}
