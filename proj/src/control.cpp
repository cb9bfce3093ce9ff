#include "scallop/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace scallop {

void NodeConstraints::validate() const {
  if (nodes.size() < 2) {
    throw std::invalid_argument("node constraints: need at least two nodes");
  }
  if (nodes.front().t != 0.0) {
    throw std::invalid_argument("node constraints: first node must be at t = 0");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i].t > nodes[i - 1].t)) {
      std::ostringstream os;
      os << "node constraints: times must be strictly increasing (node " << i
         << " at t = " << nodes[i].t << ")";
      throw std::invalid_argument(os.str());
    }
  }
  for (const Node& n : nodes) {
    if (!(n.theta >= theta_min()) || !(n.theta <= theta_max())) {
      std::ostringstream os;
      os << "node constraints: theta = " << n.theta << " at t = " << n.t
         << " outside the admissible angle interval";
      throw DomainError(os.str());
    }
  }
  if (periodic) {
    if (std::abs(nodes.back().theta - nodes.front().theta) > 1e-9) {
      throw std::invalid_argument(
          "node constraints: periodic flag requires theta(T) = theta(0)");
    }
  }
}

namespace {

// Index of the segment containing t; segments are [t_i, t_{i+1}].
std::size_t segment_index(const std::vector<Node>& nodes, double t) {
  if (t <= nodes.front().t) return 0;
  if (t >= nodes.back().t) return nodes.size() - 2;
  auto it = std::upper_bound(
      nodes.begin(), nodes.end(), t,
      [](double v, const Node& n) { return v < n.t; });
  return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

void check_range(const ControlSignal& sig, double t) {
  if (t < -1e-12 || t > sig.T + 1e-12) {
    std::ostringstream os;
    os << "evaluation time t = " << t << " outside [0, " << sig.T << "]";
    throw std::out_of_range(os.str());
  }
}

std::pair<double, double> hermite_eval(const Node& n0, const Node& n1, double t) {
  if (t == n0.t) return {n0.theta, n0.u};
  if (t == n1.t) return {n1.theta, n1.u};
  const double h = n1.t - n0.t;
  const double s = (t - n0.t) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double theta = n0.theta * (2 * s3 - 3 * s2 + 1) +
                       h * n0.u * (s3 - 2 * s2 + s) +
                       n1.theta * (-2 * s3 + 3 * s2) + h * n1.u * (s3 - s2);
  const double dtheta_ds = n0.theta * (6 * s2 - 6 * s) +
                           h * n0.u * (3 * s2 - 4 * s + 1) +
                           n1.theta * (-6 * s2 + 6 * s) +
                           h * n1.u * (3 * s2 - 2 * s);
  return {theta, dtheta_ds / h};
}

std::pair<double, double> poly_eval(const ControlSignal& sig, double t) {
  // Exact node values take precedence over the solved coefficients.
  for (const Node& n : sig.nodes) {
    if (t == n.t) return {n.theta, n.u};
  }
  const double s = t / sig.T;
  double theta = 0, dtheta_ds = 0;
  for (std::size_t k = sig.poly.size(); k-- > 0;) {
    dtheta_ds = dtheta_ds * s + theta;
    theta = theta * s + sig.poly[k];
  }
  return {theta, dtheta_ds / sig.T};
}

}  // namespace

std::pair<double, double> ControlSignal::evaluate(double t) const {
  check_range(*this, t);
  switch (kind) {
    case Kind::PolynomialTheta:
      return poly_eval(*this, t);
    case Kind::PiecewiseConstantU: {
      // theta linear; u left-continuous: the slope of the segment ending at t.
      std::size_t i = segment_index(nodes, t);
      if (t == nodes[i].t && i > 0) {
        return {nodes[i].theta, nodes[i - 1].u};
      }
      const Node& n0 = nodes[i];
      const Node& n1 = nodes[i + 1];
      if (t == n1.t) return {n1.theta, n0.u};
      return {n0.theta + n0.u * (t - n0.t), n0.u};
    }
    case Kind::HermiteTheta:
    default: {
      std::size_t i = segment_index(nodes, t);
      return hermite_eval(nodes[i], nodes[i + 1], t);
    }
  }
}

double ControlSignal::theta(double t) const { return evaluate(t).first; }
double ControlSignal::u(double t) const { return evaluate(t).second; }

double ControlSignal::u_right(double t) const {
  if (kind != Kind::PiecewiseConstantU) return u(t);
  check_range(*this, t);
  std::size_t i = segment_index(nodes, t);
  if (t == nodes[i + 1].t && i + 2 < nodes.size()) return nodes[i + 1].u;
  return nodes[i].u;
}

std::pair<double, double> evaluate(const ControlSignal& sig, double t) {
  return sig.evaluate(t);
}

ControlSignal build_smooth_control(const NodeConstraints& c) {
  c.validate();
  ControlSignal sig;
  sig.kind = ControlSignal::Kind::HermiteTheta;
  sig.nodes = c.nodes;
  sig.T = c.nodes.back().t;
  return sig;
}

ControlSignal build_global_polynomial(const NodeConstraints& c) {
  c.validate();
  const std::size_t n = c.nodes.size();
  const std::size_t dim = 2 * n;
  const double T = c.nodes.back().t;

  Eigen::MatrixXd A(dim, dim);
  Eigen::VectorXd rhs(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = c.nodes[i].t / T;
    for (std::size_t k = 0; k < dim; ++k) {
      A(2 * i, k) = std::pow(s, static_cast<double>(k));
      A(2 * i + 1, k) =
          k == 0 ? 0.0 : static_cast<double>(k) * std::pow(s, static_cast<double>(k - 1)) / T;
    }
    rhs(2 * i) = c.nodes[i].theta;
    rhs(2 * i + 1) = c.nodes[i].u;
  }
  Eigen::VectorXd coef = A.fullPivLu().solve(rhs);

  ControlSignal sig;
  sig.kind = ControlSignal::Kind::PolynomialTheta;
  sig.nodes = c.nodes;
  sig.poly.assign(coef.data(), coef.data() + coef.size());
  sig.T = T;
  return sig;
}

ControlSignal build_piecewise_constant(const NodeConstraints& c) {
  c.validate();
  ControlSignal sig;
  sig.kind = ControlSignal::Kind::PiecewiseConstantU;
  sig.nodes = c.nodes;
  sig.T = c.nodes.back().t;
  for (std::size_t i = 0; i + 1 < sig.nodes.size(); ++i) {
    sig.nodes[i].u = (sig.nodes[i + 1].theta - sig.nodes[i].theta) /
                     (sig.nodes[i + 1].t - sig.nodes[i].t);
  }
  sig.nodes.back().u = sig.nodes[sig.nodes.size() - 2].u;
  return sig;
}

ValidationReport validate_against_rule(const ControlSignal& sig,
                                       const SwitchingRule& rule, Regime w0,
                                       int expected_events) {
  ValidationReport rep;
  rep.events = find_switch_times(rule, sig, w0);
  if (static_cast<int>(rep.events.size()) != expected_events) {
    std::ostringstream os;
    os << "expected " << expected_events << " switch events, found "
       << rep.events.size();
    double t_flag = rep.events.empty() ? 0.0 : rep.events.back().t;
    if (static_cast<int>(rep.events.size()) > expected_events) {
      t_flag = rep.events[static_cast<std::size_t>(expected_events)].t;
      os << "; first unexpected crossing at t = " << t_flag;
    }
    rep.violations.push_back({t_flag, os.str()});
  }
  // Angle-domain and relay-coherence sweep.
  const int n_check = 2 * kScanGridCount;
  for (int i = 0; i <= n_check; ++i) {
    const double t = sig.T * i / n_check;
    const auto [theta, u] = sig.evaluate(t);
    if (!(theta >= theta_min()) || !(theta <= theta_max())) {
      std::ostringstream os;
      os << "theta = " << theta << " outside the admissible interval";
      rep.violations.push_back({t, os.str()});
      break;
    }
    if (auto forced = forced_regime(rule, u)) {
      if (regime_at(rule, rep.events, w0, t) != *forced) {
        std::ostringstream os;
        os << "regime incoherent with forced value at u = " << u;
        rep.violations.push_back({t, os.str()});
        break;
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace scallop
