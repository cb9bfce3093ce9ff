// Acceptance checks for the scallop-swimmer artifact: each check prints one
// pass/fail line and the binary exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "scallop/random_controls.hpp"
#include "scallop/synthesize.hpp"

using namespace scallop;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s — %s\n", id, ok ? "PASS" : "FAIL",
              detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double max_abs_u(const ControlSignal& sig) {
  double m = 0;
  for (int i = 0; i <= 400; ++i) {
    m = std::max(m, std::abs(sig.u(sig.T * i / 400.0)));
  }
  return m;
}

// 1. Reference synthesis: thermostat rule, w0 = 2, T = 7 with switches at
//    t = 2 and t = 6, target displacement 1; plug-back exact to 1e-9 and
//    numeric (h = 1e-3) to 1e-4, in under a second.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  Params p;
  const auto rule = SwitchingRule::thermostat(0.1);
  bool ok = true;
  std::string detail;
  try {
    const auto plan =
        plan_displacement(p, rule, Regime::Ideal, 0.5, kPi / 4, 1.0, 7.0);
    const auto sig = realize_plan(p, plan, RealizeKind::Smooth);
    const auto exact = propagate_exact(p, rule, sig, 0.0, Regime::Ideal);
    const auto numeric =
        propagate_numeric(p, rule, sig, 0.0, Regime::Ideal, 1e-3);
    const double t1 = plan.at(0).switch_times.at(0);
    const double t2 = plan.at(0).switch_times.at(1);
    const double el = seconds_since(t0);
    ok = std::abs(exact.delta_x - 1.0) <= 1e-9 &&
         std::abs(numeric.delta_x - 1.0) <= 1e-4 &&
         std::abs(t1 - 2.0) <= 1e-6 && std::abs(t2 - 6.0) <= 1e-6 &&
         el < 1.0;
    detail = fmt("dx exact err %.2e, numeric err %.2e, switches at %.6f/%.6f, %.2fs",
                 std::abs(exact.delta_x - 1.0), std::abs(numeric.delta_x - 1.0),
                 t1, t2, el);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(1, ok, detail);
}

// 2. No net motion from 100 random periodic controls in a frozen regime:
//    exact |dx| <= 1e-12, numeric (h = 1e-3) <= 1e-6, in under 10 s.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  Params p;
  double worst_exact = 0, worst_num = 0;
  bool ok = true;
  std::string detail;
  try {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto sig = build_smooth_control(random_periodic_nodes(seed, 5.0));
      const auto rule = SwitchingRule::thermostat(2 * max_abs_u(sig) + 1);
      for (Regime w : {Regime::Viscous, Regime::Ideal}) {
        const auto exact = propagate_exact(p, rule, sig, 0.0, w);
        worst_exact = std::max(worst_exact, std::abs(exact.delta_x));
        const auto num = propagate_numeric(p, rule, sig, 0.0, w, 1e-3);
        worst_num = std::max(worst_num, std::abs(num.delta_x));
      }
    }
    const double el = seconds_since(t0);
    ok = worst_exact <= 1e-12 && worst_num <= 1e-6 && el < 10.0;
    detail = fmt("worst exact %.2e, worst numeric %.2e, %.2fs", worst_exact,
                 worst_num, el);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(2, ok, detail);
}

// 3. Smooth and piecewise-constant realizations of the same thermostat stroke
//    skeleton displace identically to 1e-10 (20 random skeletons).
void criterion_3() {
  Params p;
  const auto rule = SwitchingRule::thermostat(0.1);
  struct Start {
    double u0;
    std::optional<Regime> w0;
  };
  const Start starts[] = {{0.0, Regime::Viscous},
                          {0.0, Regime::Ideal},
                          {0.5, std::nullopt},
                          {-0.5, std::nullopt}};
  double worst = 0;
  bool ok = true;
  std::string detail;
  try {
    for (int i = 0; i < 20; ++i) {
      const Start& st = starts[i % 4];
      const StrokeCase c = classify_case(rule, st.u0, st.w0);
      const double r = reachable_radius(p, rule, c, kPi / 4).r;
      const double target = 0.8 * r * std::sin(1.0 + 2.7 * i);
      const auto plan =
          plan_displacement(p, rule, st.w0, st.u0, kPi / 4, target, 9.0);
      const auto smooth = realize_plan(p, plan, RealizeKind::Smooth);
      const auto pwc = realize_plan(p, plan, RealizeKind::PiecewiseConstant);
      const Regime w0 = plan.at(0).w0;
      const auto ts = propagate_exact(p, rule, smooth, 0.0, w0);
      const auto tp = propagate_exact(p, rule, pwc, 0.0, w0);
      worst = std::max(worst, std::abs(ts.delta_x - tp.delta_x));
    }
    ok = worst <= 1e-10;
    detail = fmt("worst |dx_smooth - dx_pwc| = %.2e over 20 skeletons", worst);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(3, ok, detail);
}

// 4. Sign rule is forward-only: 200 random periodic controls give
//    dx >= -1e-12, and synthesis of a negative target is rejected.
void criterion_4() {
  Params p;
  const auto rule = SwitchingRule::sign();
  double worst = 0;
  bool ok = true;
  std::string detail;
  try {
    for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
      const auto sig = build_smooth_control(random_periodic_nodes(seed, 4.0));
      if (sig.u(0.0) == 0.0) continue;
      const auto traj = propagate_exact(p, rule, sig, 0.0, std::nullopt);
      worst = std::min(worst, traj.delta_x);
    }
    bool rejected = false;
    try {
      plan_displacement(p, rule, {}, 0.5, kPi / 4, -0.5, 7.0);
    } catch (const InfeasibleError&) {
      rejected = true;
    }
    ok = worst >= -1e-12 && rejected;
    detail = fmt("min dx = %.2e over 200 controls; negative target %s", worst,
                 rejected ? "rejected" : "NOT rejected");
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(4, ok, detail);
}

// 5. Thermostat synthesis reaches +-0.5 from all four initial cases,
//    verified by plug-back to 1e-9.
void criterion_5() {
  Params p;
  const auto rule = SwitchingRule::thermostat(0.1);
  struct Start {
    double u0;
    std::optional<Regime> w0;
  };
  const Start starts[] = {{0.0, Regime::Viscous},
                          {0.0, Regime::Ideal},
                          {0.5, std::nullopt},
                          {-0.5, std::nullopt}};
  double worst = 0;
  bool ok = true;
  std::string detail;
  try {
    for (const Start& st : starts) {
      for (double target : {0.5, -0.5}) {
        const auto plan =
            plan_displacement(p, rule, st.w0, st.u0, kPi / 4, target, 7.0);
        const auto sig = realize_plan(p, plan, RealizeKind::Smooth);
        const auto traj = propagate_exact(p, rule, sig, 0.0, plan.at(0).w0);
        worst = std::max(worst, std::abs(traj.delta_x - target));
      }
    }
    ok = worst <= 1e-9;
    detail = fmt("worst plug-back error %.2e over 8 case/direction pairs", worst);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(5, ok, detail);
}

// 6. Gap strictly increasing at 1000 sampled pairs; finite-difference
//    derivative of each primitive matches V to relative 1e-6 at 100 points.
void criterion_6() {
  Params p;
  bool mono = true;
  double worst_fd = 0;
  const double lo = theta_min(), hi = theta_max();
  for (int i = 0; i < 1000; ++i) {
    const double a = lo + (hi - lo) * i / 1000.0;
    const double b = a + (hi - lo) / 1000.0;
    mono = mono && gap(p, b) > gap(p, a);
  }
  for (int i = 1; i <= 100; ++i) {
    const double th = lo + (hi - lo) * i / 101.0;
    const double h = 1e-6;
    for (Regime w : {Regime::Viscous, Regime::Ideal}) {
      const double fd =
          (f_primitive(p, w, th + h) - f_primitive(p, w, th - h)) / (2 * h);
      const double v = v_regime(p, w, th);
      worst_fd = std::max(worst_fd, std::abs(fd - v) / std::abs(v));
    }
  }
  const bool ok = mono && worst_fd <= 1e-6;
  report(6, ok,
         fmt("gap %s increasing; worst relative derivative error %.2e",
             mono ? "strictly" : "NOT", worst_fd));
}

// 7. Numeric-vs-exact error decreases with observed order >= 3.5 across
//    h in {4e-3, 2e-3, 1e-3} on 10 scenarios.
void criterion_7() {
  Params p;
  double worst_order = 99;
  bool ok = true;
  std::string detail;
  try {
    for (int i = 0; i < 10; ++i) {
      const auto sig =
          build_smooth_control(random_periodic_nodes(101 + i, 5.0));
      const auto rule = SwitchingRule::thermostat(2 * max_abs_u(sig) + 1);
      const Regime w = i % 2 ? Regime::Ideal : Regime::Viscous;
      const auto exact = propagate_exact(p, rule, sig, 0.0, w);
      std::vector<double> errs;
      for (double h : {4e-3, 2e-3, 1e-3}) {
        const auto num = propagate_numeric(p, rule, sig, 0.0, w, h);
        errs.push_back(std::abs(num.delta_x - exact.delta_x));
      }
      if (errs[2] <= 1e-13) continue;  // at the roundoff floor already
      const double order = std::log(errs[0] / errs[2]) / std::log(4.0);
      worst_order = std::min(worst_order, order);
    }
    ok = worst_order >= 3.5;
    detail = fmt("worst observed order %.2f over 10 scenarios", worst_order);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(7, ok, detail);
}

// 8. Transfers from (x, theta) = (0, pi/4) to (2, 1.2) and to (-1.5, 0.6)
//    land on the target position to 1e-9 with the exact final angle.
void criterion_8() {
  Params p;
  const auto rule = SwitchingRule::thermostat(0.1);
  bool ok = true;
  std::string detail;
  double worst = 0;
  try {
    const double targets[][2] = {{2.0, 1.2}, {-1.5, 0.6}};
    for (const auto& tg : targets) {
      const auto plan =
          plan_transfer(p, rule, Regime::Ideal, 0.5, 0.0, kPi / 4, tg[0],
                        tg[1]);
      const auto sig = realize_transfer(p, plan, RealizeKind::Smooth);
      const auto traj = propagate_exact(p, rule, sig, 0.0, Regime::Ideal);
      worst = std::max(worst, std::abs(traj.x_final - tg[0]));
      ok = ok && traj.theta_final == tg[1];
    }
    ok = ok && worst <= 1e-9;
    detail = fmt("worst |x - xf| = %.2e, final angles exact: %s", worst,
                 ok ? "yes" : "no");
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(8, ok, detail);
}

// 9. A target of five reachable radii splits into strokes each below the
//    radius, and the concatenated simulation totals the target to 1e-9.
void criterion_9() {
  Params p;
  const auto rule = SwitchingRule::thermostat(0.1);
  bool ok = true;
  std::string detail;
  try {
    const double r =
        reachable_radius(p, rule, StrokeCase::ThermostatFromAbove, kPi / 4).r;
    const double target = 5 * r;
    const auto plan =
        plan_displacement(p, rule, {}, 0.5, kPi / 4, target, 42.0);
    bool small = plan.size() >= 2;
    for (const auto& s : plan) small = small && std::abs(s.predicted_dx) < r;
    const auto sig = realize_plan(p, plan, RealizeKind::Smooth);
    const auto traj = propagate_exact(p, rule, sig, 0.0, Regime::Ideal);
    const double err = std::abs(traj.delta_x - target);
    ok = small && err <= 1e-9;
    detail = fmt("N = %zu strokes, total error %.2e, per-stroke |dx| < r: %s",
                 plan.size(), err, small ? "yes" : "no");
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(9, ok, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
