#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qam/patterns.hpp"

namespace qam::classical {

struct ClassicalState {
  std::vector<int> spins;
  std::size_t step = 0;

  static ClassicalState from(const Pattern& p) {
    return {std::vector<int>(p.spins().begin(), p.spins().end()), 0};
  }
};

enum class UpdateMode { Sequential, Parallel };

/// h_i = sum_j w_ij s_j.
double synaptic_potential(const WeightMatrix& weights, const ClassicalState& state, std::size_t i);

/// One sweep of sign updates in the given order, each using the partially
/// updated state. A zero potential leaves the spin unchanged.
ClassicalState update_sequential(const WeightMatrix& weights, const ClassicalState& state,
                                 std::span<const std::size_t> order);

/// Synchronous update of all spins from the previous state (same tie rule).
ClassicalState update_parallel(const WeightMatrix& weights, const ClassicalState& state);

struct RetrievalResult {
  ClassicalState state;
  bool converged = false;
  std::size_t sweeps_used = 0;
  // trace[k] is the state after k sweeps; trace[0] is the initial state.
  std::vector<std::vector<int>> trace;
};

/// Repeats sweeps until nothing changes or max_sweeps is exhausted. An empty
/// order means 0..n-1.
RetrievalResult retrieve(const WeightMatrix& weights, const ClassicalState& initial,
                         std::size_t max_sweeps, std::span<const std::size_t> order = {},
                         UpdateMode mode = UpdateMode::Sequential);

}  // namespace qam::classical
