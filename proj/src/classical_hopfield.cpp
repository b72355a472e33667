#include "qam/classical_hopfield.hpp"

#include <numeric>

namespace qam::classical {

namespace {

void check_state(const WeightMatrix& w, const ClassicalState& s) {
  require(s.spins.size() == w.n(), "state length does not match weight matrix");
  for (int v : s.spins) require(v == 1 || v == -1, "state entries must be -1 or +1");
}

int sign_or_keep(double h, int current) {
  if (h > 0.0) return 1;
  if (h < 0.0) return -1;
  return current;
}

}  // namespace

double synaptic_potential(const WeightMatrix& weights, const ClassicalState& state, std::size_t i) {
  require(i < weights.n(), "synaptic_potential: index out of range");
  require(state.spins.size() == weights.n(), "state length does not match weight matrix");
  double h = 0.0;
  for (std::size_t j = 0; j < weights.n(); ++j) h += weights(i, j) * state.spins[j];
  return h;
}

ClassicalState update_sequential(const WeightMatrix& weights, const ClassicalState& state,
                                 std::span<const std::size_t> order) {
  check_state(weights, state);
  const std::size_t n = weights.n();
  require(order.size() == n, "update order must be a permutation of 0..n-1");
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    require(i < n && !seen[i], "update order must be a permutation of 0..n-1");
    seen[i] = true;
  }
  ClassicalState next = state;
  for (std::size_t i : order)
    next.spins[i] = sign_or_keep(synaptic_potential(weights, next, i), next.spins[i]);
  ++next.step;
  return next;
}

ClassicalState update_parallel(const WeightMatrix& weights, const ClassicalState& state) {
  check_state(weights, state);
  ClassicalState next = state;
  for (std::size_t i = 0; i < weights.n(); ++i)
    next.spins[i] = sign_or_keep(synaptic_potential(weights, state, i), state.spins[i]);
  ++next.step;
  return next;
}

RetrievalResult retrieve(const WeightMatrix& weights, const ClassicalState& initial,
                         std::size_t max_sweeps, std::span<const std::size_t> order,
                         UpdateMode mode) {
  require(max_sweeps >= 1, "max_sweeps must be at least 1");
  check_state(weights, initial);
  std::vector<std::size_t> identity;
  if (order.empty()) {
    identity.resize(weights.n());
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    order = identity;
  }
  RetrievalResult result;
  result.state = initial;
  result.trace.push_back(initial.spins);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    ClassicalState next = mode == UpdateMode::Sequential
                              ? update_sequential(weights, result.state, order)
                              : update_parallel(weights, result.state);
    const bool unchanged = next.spins == result.state.spins;
    result.state = std::move(next);
    result.trace.push_back(result.state.spins);
    ++result.sweeps_used;
    if (unchanged) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace qam::classical
