#include "scallop/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace scallop {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw ParseError("scenario: " + what);
}

double get_num(const ordered_json& j, const char* key, double fallback,
               bool required = false) {
  if (!j.contains(key)) {
    if (required) parse_fail(std::string("missing required field '") + key + "'");
    return fallback;
  }
  if (!j[key].is_number()) {
    parse_fail(std::string("field '") + key + "' must be a number");
  }
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) {
    parse_fail(std::string("field '") + key + "' must be finite");
  }
  return v;
}

SwitchingRule rule_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    parse_fail("rule needs a 'kind' of magnitude, sign, or thermostat");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "sign") return SwitchingRule::sign();
  const double th = get_num(j, "threshold", 0.1);
  if (kind == "magnitude") return SwitchingRule::magnitude(th);
  if (kind == "thermostat") return SwitchingRule::thermostat(th);
  parse_fail("unknown rule kind '" + kind + "'");
}

ordered_json rule_to_json(const SwitchingRule& r) {
  ordered_json j;
  switch (r.kind) {
    case SwitchingRule::Kind::Magnitude: j["kind"] = "magnitude"; break;
    case SwitchingRule::Kind::Sign: j["kind"] = "sign"; break;
    case SwitchingRule::Kind::Thermostat: j["kind"] = "thermostat"; break;
  }
  if (r.kind != SwitchingRule::Kind::Sign) j["threshold"] = r.threshold;
  return j;
}

}  // namespace

ControlSignal control_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("nodes")) {
    parse_fail("control needs 'kind' and 'nodes'");
  }
  const std::string kind = j["kind"].get<std::string>();
  NodeConstraints c;
  c.periodic = j.value("periodic", false);
  for (const auto& nj : j["nodes"]) {
    Node n;
    n.t = get_num(nj, "t", 0, true);
    n.theta = get_num(nj, "theta", 0, true);
    n.u = get_num(nj, "u", 0, kind != "pwc");
    c.nodes.push_back(n);
  }
  try {
    if (kind == "hermite") return build_smooth_control(c);
    if (kind == "polynomial") return build_global_polynomial(c);
    if (kind == "pwc") return build_piecewise_constant(c);
  } catch (const DomainError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    parse_fail(e.what());
  }
  parse_fail("unknown control kind '" + kind + "' (hermite, polynomial, pwc)");
}

ordered_json control_to_json(const ControlSignal& sig) {
  ordered_json j;
  switch (sig.kind) {
    case ControlSignal::Kind::HermiteTheta: j["kind"] = "hermite"; break;
    case ControlSignal::Kind::PolynomialTheta: j["kind"] = "polynomial"; break;
    case ControlSignal::Kind::PiecewiseConstantU: j["kind"] = "pwc"; break;
  }
  j["nodes"] = ordered_json::array();
  for (const Node& n : sig.nodes) {
    j["nodes"].push_back({{"t", n.t}, {"theta", n.theta}, {"u", n.u}});
  }
  return j;
}

Scenario parse_scenario(const ordered_json& j) {
  if (!j.is_object()) parse_fail("top level must be a JSON object");
  Scenario sc;
  if (j.contains("params")) {
    const auto& pj = j["params"];
    sc.params.a = get_num(pj, "a", sc.params.a);
    sc.params.b = get_num(pj, "b", sc.params.b);
    sc.params.xi = get_num(pj, "xi", sc.params.xi);
    sc.params.eta = get_num(pj, "eta", sc.params.eta);
    sc.params.m = get_num(pj, "m", sc.params.m);
    sc.params.rho = get_num(pj, "rho", sc.params.rho);
  }
  try {
    sc.params.validate();
  } catch (const std::invalid_argument& e) {
    parse_fail(e.what());
  }
  if (j.contains("rule")) sc.rule = rule_from_json(j["rule"]);
  if (j.contains("initial")) {
    const auto& ij = j["initial"];
    sc.initial.x0 = get_num(ij, "x0", sc.initial.x0);
    sc.initial.theta0 = get_num(ij, "theta0", sc.initial.theta0);
    sc.initial.u0 = get_num(ij, "u0", sc.initial.u0);
    if (ij.contains("w0")) {
      const int w = ij["w0"].get<int>();
      if (w != 1 && w != 2) parse_fail("initial.w0 must be 1 or 2");
      sc.initial.w0 = static_cast<Regime>(w);
    }
  }
  if (j.contains("control") && j.contains("synthesis")) {
    parse_fail("exactly one of 'control' and 'synthesis' may be present");
  }
  if (j.contains("control")) sc.control = control_from_json(j["control"]);
  if (j.contains("synthesis")) {
    const auto& yj = j["synthesis"];
    SynthesisRequest req;
    if (yj.contains("target_dx")) req.target_dx = get_num(yj, "target_dx", 0, true);
    if (yj.contains("target_x")) req.target_x = get_num(yj, "target_x", 0, true);
    if (yj.contains("target_theta")) {
      req.target_theta = get_num(yj, "target_theta", 0, true);
    }
    const bool has_dx = req.target_dx.has_value();
    const bool has_xt = req.target_x && req.target_theta;
    if (has_dx == has_xt) {
      parse_fail("synthesis needs either 'target_dx' or both 'target_x' and 'target_theta'");
    }
    req.T = get_num(yj, "T", req.T);
    const std::string kind = yj.value("kind", "smooth");
    if (kind == "smooth") req.kind = RealizeKind::Smooth;
    else if (kind == "pwc") req.kind = RealizeKind::PiecewiseConstant;
    else parse_fail("synthesis kind must be 'smooth' or 'pwc'");
    sc.synthesis = req;
  }
  if (!sc.control && !sc.synthesis) {
    parse_fail("one of 'control' or 'synthesis' is required");
  }
  if (j.contains("output")) {
    const auto& oj = j["output"];
    sc.output.samples = static_cast<int>(get_num(oj, "samples", sc.output.samples));
    sc.output.csv = oj.value("csv", sc.output.csv);
    sc.output.summary = oj.value("summary", sc.output.summary);
  }
  sc.integrator_step = get_num(j, "integrator_step", sc.integrator_step);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return parse_scenario(j);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fputs("t,x,theta,u,w\n", f);
  for (const Sample& s : traj.samples) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%d\n", s.t, s.x, s.theta, s.u,
                 static_cast<int>(s.w));
  }
  std::fclose(f);
}

namespace {

ordered_json events_to_json(const std::vector<SwitchEvent>& events) {
  ordered_json arr = ordered_json::array();
  for (const SwitchEvent& e : events) {
    arr.push_back({{"t", e.t},
                   {"from", static_cast<int>(e.from)},
                   {"to", static_cast<int>(e.to)},
                   {"u", e.u_at_event}});
  }
  return arr;
}

}  // namespace

ordered_json trajectory_summary(const Trajectory& exact,
                                const Trajectory& numeric) {
  ordered_json j;
  j["delta_x"] = exact.delta_x;
  j["delta_x_numeric"] = numeric.delta_x;
  j["discrepancy"] = std::abs(exact.delta_x - numeric.delta_x);
  j["x_final"] = exact.x_final;
  j["theta_final"] = exact.theta_final;
  j["w_final"] = static_cast<int>(exact.w_final);
  j["events"] = events_to_json(exact.events);
  return j;
}

ordered_json plan_to_json(const std::vector<StrokePlan>& plan) {
  ordered_json arr = ordered_json::array();
  for (const StrokePlan& s : plan) {
    ordered_json sj;
    sj["case"] = case_name(s.stroke_case);
    sj["w0"] = static_cast<int>(s.w0);
    sj["u0"] = s.u0;
    sj["theta0"] = s.theta0;
    sj["switch_angles"] = s.switch_angles;
    sj["switch_times"] = s.switch_times;
    sj["T"] = s.T;
    sj["predicted_dx"] = s.predicted_dx;
    sj["trivial"] = s.trivial;
    arr.push_back(std::move(sj));
  }
  return arr;
}

ordered_json transfer_to_json(const TransferPlan& plan) {
  ordered_json j;
  j["phase1"] = plan_to_json(plan.phase1);
  if (plan.leg) {
    j["leg"] = {{"theta_from", plan.leg->theta_from},
                {"theta_to", plan.leg->theta_to},
                {"w", static_cast<int>(plan.leg->w)},
                {"duration", plan.leg->duration},
                {"drift", plan.leg->drift},
                {"wrap_events", plan.leg->wrap_events}};
  }
  j["phase3"] = plan_to_json(plan.phase3);
  return j;
}

void write_json(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace scallop
