#pragma once

// Exponential-cost reference constructions used to cross-check the
// contraction engine. full_state and partial_trace never call into mps_engine.

#include <cstdint>

#include "rmps/ensembles.hpp"

namespace rmps::oracle {

/// The full d^n x d^n state sum_{i,j} tr(L A_i1..A_in R A_jn^dagger..A_j1^dagger) |i><j|,
/// site 1 most significant. Guarded to d^n <= 256.
ComplexMatrix full_state(const MpsSample& sample, int n);

/// Reduced state of sites [first, first + l) (0-based) of an n-site state.
ComplexMatrix partial_trace(const ComplexMatrix& state, int d, int n, int first, int l);

struct EquivalenceReport {
  std::size_t instances = 0;
  std::size_t windows = 0;
  double max_error = 0.0;  // largest entrywise |engine - oracle|
  double tolerance = 1e-9;
  bool passed = false;
};

/// Compares the contraction engine with full_state + partial_trace on random
/// instances at d = 2, D in {1, 2, 3}, n in {2, 4, 6}, over every window
/// (t_left, l) of each chain.
EquivalenceReport engine_equivalence(std::size_t instances, std::uint64_t seed);

}  // namespace rmps::oracle
