#pragma once

#include <cstdint>

#include "scallop/control.hpp"

namespace scallop {

/// Deterministic pseudo-random smooth periodic angle profile: a low-order
/// Fourier series rescaled into the clamped angle interval and sampled into
/// Hermite node constraints whose endpoint values match exactly.
NodeConstraints random_periodic_nodes(std::uint64_t seed, double T,
                                      int n_nodes = 24);

}  // namespace scallop
