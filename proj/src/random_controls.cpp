#include "scallop/random_controls.hpp"

#include <cmath>
#include <random>

namespace scallop {

NodeConstraints random_periodic_nodes(std::uint64_t seed, double T,
                                      int n_nodes) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };

  constexpr int kHarmonics = 3;
  double A[kHarmonics], B[kHarmonics];
  for (int k = 0; k < kHarmonics; ++k) {
    A[k] = 2 * unit() - 1;
    B[k] = 2 * unit() - 1;
  }
  const double om = 2 * kPi / T;
  auto raw = [&](double t) {
    double v = 0;
    for (int k = 0; k < kHarmonics; ++k) {
      v += A[k] * std::sin(om * (k + 1) * t) + B[k] * std::cos(om * (k + 1) * t);
    }
    return v;
  };
  auto raw_d = [&](double t) {
    double v = 0;
    for (int k = 0; k < kHarmonics; ++k) {
      v += om * (k + 1) *
           (A[k] * std::cos(om * (k + 1) * t) - B[k] * std::sin(om * (k + 1) * t));
    }
    return v;
  };

  double rmin = raw(0), rmax = raw(0);
  for (int i = 1; i <= 2000; ++i) {
    const double v = raw(T * i / 2000);
    rmin = std::min(rmin, v);
    rmax = std::max(rmax, v);
  }
  const double lo = theta_min() + 0.05;
  const double hi = theta_max() - 0.05;
  double alpha = 0, beta = 0.5 * (lo + hi);
  if (rmax - rmin > 1e-6) {
    alpha = (hi - lo) / (rmax - rmin);
    beta = lo - alpha * rmin;
  }

  NodeConstraints c;
  c.periodic = true;
  for (int j = 0; j < n_nodes; ++j) {
    const double t = T * j / n_nodes;
    c.nodes.push_back({t, alpha * raw(t) + beta, alpha * raw_d(t)});
  }
  c.nodes.push_back({T, c.nodes.front().theta, c.nodes.front().u});
  return c;
}

}  // namespace scallop
