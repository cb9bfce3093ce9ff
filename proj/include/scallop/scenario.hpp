#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "scallop/synthesize.hpp"

namespace scallop {

using ordered_json = nlohmann::ordered_json;

struct InitialState {
  double x0 = 0;
  double theta0 = kPi / 4;
  double u0 = 0.5;
  std::optional<Regime> w0;
};

struct SynthesisRequest {
  // exactly one of target_dx / (target_x, target_theta)
  std::optional<double> target_dx;
  std::optional<double> target_x;
  std::optional<double> target_theta;
  double T = 7.0;
  RealizeKind kind = RealizeKind::Smooth;
};

struct OutputSpec {
  int samples = 1000;
  std::string csv = "trajectory.csv";
  std::string summary = "summary.json";
};

struct Scenario {
  Params params;
  SwitchingRule rule = SwitchingRule::thermostat(0.1);
  InitialState initial;
  std::optional<ControlSignal> control;      // inline control
  std::optional<SynthesisRequest> synthesis; // or a synthesis request
  OutputSpec output;
  double integrator_step = 1e-3;
};

/// Parses a scenario file; throws ParseError with a field diagnostic.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const ordered_json& j);

ordered_json control_to_json(const ControlSignal& sig);
ControlSignal control_from_json(const ordered_json& j);

/// CSV with header t,x,theta,u,w; %.17g numbers, one row per sample.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

ordered_json trajectory_summary(const Trajectory& exact,
                                const Trajectory& numeric);
ordered_json plan_to_json(const std::vector<StrokePlan>& plan);
ordered_json transfer_to_json(const TransferPlan& plan);

void write_json(const std::string& path, const ordered_json& j);

}  // namespace scallop
