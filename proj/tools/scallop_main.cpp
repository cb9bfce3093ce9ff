#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "scallop/random_controls.hpp"
#include "scallop/scenario.hpp"

namespace fs = std::filesystem;
using namespace scallop;

namespace {

constexpr int kExitInfeasible = 2;
constexpr int kExitDomain = 3;
constexpr int kExitParse = 4;

struct CommonOpts {
  std::string out_dir = ".";
  int samples = -1;       // -1: use the scenario's value
  double step = -1;       // -1: use the scenario's value
};

std::string out_path(const CommonOpts& opts, const std::string& name) {
  return (fs::path(opts.out_dir) / name).string();
}

void apply_overrides(Scenario& sc, const CommonOpts& opts) {
  if (opts.samples >= 0) sc.output.samples = opts.samples;
  if (opts.step > 0) sc.integrator_step = opts.step;
  fs::create_directories(opts.out_dir);
}

int run_simulate(const std::string& file, const CommonOpts& opts) {
  Scenario sc = load_scenario(file);
  if (!sc.control) {
    throw ParseError("simulate needs a scenario with an inline 'control'");
  }
  apply_overrides(sc, opts);
  const auto exact = propagate_exact(sc.params, sc.rule, *sc.control,
                                     sc.initial.x0, sc.initial.w0,
                                     sc.output.samples);
  const auto numeric = propagate_numeric(sc.params, sc.rule, *sc.control,
                                         sc.initial.x0, sc.initial.w0,
                                         sc.integrator_step);
  write_trajectory_csv(out_path(opts, sc.output.csv), exact);
  write_json(out_path(opts, sc.output.summary),
             trajectory_summary(exact, numeric));
  std::printf("delta_x = %.17g (numeric %.17g), %zu events\n", exact.delta_x,
              numeric.delta_x, exact.events.size());
  return 0;
}

int run_synthesize(const std::string& file, const CommonOpts& opts) {
  Scenario sc = load_scenario(file);
  if (!sc.synthesis) {
    throw ParseError("synthesize needs a scenario with a 'synthesis' request");
  }
  apply_overrides(sc, opts);
  const SynthesisRequest& req = *sc.synthesis;

  ControlSignal sig;
  ordered_json plan_json;
  if (req.target_dx) {
    const auto plan =
        plan_displacement(sc.params, sc.rule, sc.initial.w0, sc.initial.u0,
                          sc.initial.theta0, *req.target_dx, req.T);
    sig = realize_plan(sc.params, plan, req.kind);
    plan_json["strokes"] = plan_to_json(plan);
  } else {
    const auto plan =
        plan_transfer(sc.params, sc.rule, sc.initial.w0, sc.initial.u0,
                      sc.initial.x0, sc.initial.theta0, *req.target_x,
                      *req.target_theta);
    sig = realize_transfer(sc.params, plan, req.kind);
    plan_json = transfer_to_json(plan);
  }
  const auto exact = propagate_exact(sc.params, sc.rule, sig, sc.initial.x0,
                                     sc.initial.w0, sc.output.samples);
  plan_json["control"] = control_to_json(sig);
  plan_json["verification"] = {{"delta_x", exact.delta_x},
                               {"x_final", exact.x_final},
                               {"theta_final", exact.theta_final},
                               {"events", exact.events.size()}};
  write_trajectory_csv(out_path(opts, sc.output.csv), exact);
  write_json(out_path(opts, sc.output.summary), plan_json);
  std::printf("synthesized %s control: delta_x = %.17g, x_final = %.17g\n",
              req.kind == RealizeKind::Smooth ? "smooth" : "piecewise-constant",
              exact.delta_x, exact.x_final);
  return 0;
}

struct Suite {
  const char* name;
  bool ok;
  double residual;
};

int run_verify(std::uint64_t seed) {
  Params p;
  std::vector<Suite> suites;

  {  // Scallop theorem under each frozen regime
    double worst = 0;
    for (int i = 0; i < 25; ++i) {
      const auto nodes = random_periodic_nodes(seed + i, 5.0);
      const auto sig = build_smooth_control(nodes);
      for (Regime w : {Regime::Viscous, Regime::Ideal}) {
        // a thermostat band wider than any |u| freezes the regime
        double umax = 0;
        for (const Node& n : sig.nodes) umax = std::max(umax, std::abs(n.u));
        const auto rule = SwitchingRule::thermostat(2 * umax + 1);
        const auto traj = propagate_exact(p, rule, sig, 0.0, w);
        worst = std::max(worst, std::abs(traj.delta_x));
      }
    }
    suites.push_back({"scallop-theorem", worst <= 1e-12, worst});
  }
  {  // closed-form primitives against quadrature-free differences
    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
      const double a = theta_min() + (theta_max() - theta_min()) * i / 200;
      const double h = 1e-6;
      if (a - h < theta_min() || a + h > theta_max()) continue;
      for (Regime w : {Regime::Viscous, Regime::Ideal}) {
        const double fd =
            (f_primitive(p, w, a + h) - f_primitive(p, w, a - h)) / (2 * h);
        const double rel = std::abs(fd - v_regime(p, w, a)) /
                           std::max(1.0, std::abs(v_regime(p, w, a)));
        worst = std::max(worst, rel);
      }
    }
    suites.push_back({"primitive-derivative", worst <= 1e-6, worst});
  }
  {  // gap monotonicity
    double worst = 1;
    bool ok = true;
    try {
      require_regular(p);
      for (int i = 0; i < 1000; ++i) {
        const double a = theta_min() + (theta_max() - theta_min()) * i / 1000.0;
        const double b = a + (theta_max() - theta_min()) / 1000.0;
        const double d = gap(p, b) - gap(p, a);
        worst = std::min(worst, d);
        ok = ok && d > 0;
      }
    } catch (const InfeasibleError& e) {
      std::printf("gap-monotonicity: %s\n", e.what());
      ok = false;
    }
    suites.push_back({"gap-monotonicity", ok, worst});
  }

  bool all = true;
  for (const Suite& s : suites) {
    std::printf("%-22s %s (worst residual %.3g)\n", s.name,
                s.ok ? "pass" : "FAIL", s.residual);
    all = all && s.ok;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scallop-swimmer simulation and control synthesis"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand
  CommonOpts opts;
  app.add_option("--out-dir", opts.out_dir, "directory for output files");
  app.add_option("--samples", opts.samples, "trajectory sample count");
  app.add_option("--integrator-step", opts.step, "RK4 step size");

  std::string sim_file, syn_file;
  auto* sim = app.add_subcommand("simulate", "simulate an inline control");
  sim->add_option("file", sim_file, "scenario JSON")->required();
  auto* syn = app.add_subcommand("synthesize", "synthesize a control");
  syn->add_option("file", syn_file, "scenario JSON")->required();
  auto* ver = app.add_subcommand("verify", "run built-in property suites");
  std::uint64_t seed = 20240815;
  ver->add_option("--seed", seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return run_simulate(sim_file, opts);
    if (syn->parsed()) return run_synthesize(syn_file, opts);
    return run_verify(seed);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitDomain;
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
