#include <doctest.h>

#include <numeric>

#include "qam/classical_hopfield.hpp"

using namespace qam;
using namespace qam::classical;

namespace {

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

TEST_CASE("synaptic potential") {
  const auto set = generate_random_patterns(9, 1, 4);
  const auto& xi = set[0];
  const auto w = hebb_weights(set, Normalization::OverNMinus1);
  const auto s = ClassicalState::from(xi);
  const auto neg = ClassicalState::from(xi.negated());
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(synaptic_potential(w, s, i) == doctest::Approx(xi[i]).epsilon(1e-14));
    CHECK(synaptic_potential(w, neg, i) == doctest::Approx(-xi[i]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(synaptic_potential(w, s, 9), ValidationError);

  const auto w8 = hebb_weights(generate_random_patterns(8, 3, 2), Normalization::OverN);
  const auto state = ClassicalState::from(generate_random_patterns(8, 1, 77)[0]);
  for (std::size_t i = 0; i < 8; ++i) {
    double ref = 0.0;
    for (std::size_t j = 0; j < 8; ++j) ref += w8(i, j) * state.spins[j];
    CHECK(synaptic_potential(w8, state, i) == doctest::Approx(ref).epsilon(1e-15));
  }
}

TEST_CASE("sequential update fixed points and repair") {
  const auto set = generate_random_patterns(20, 1, 1);
  const auto w = hebb_weights(set, Normalization::OverNMinus1);
  const auto order = identity_order(20);
  const auto s = ClassicalState::from(set[0]);
  CHECK(update_sequential(w, s, order).spins == s.spins);

  const std::size_t flip[] = {6};
  const auto one_off = ClassicalState::from(set[0].with_flips(flip));
  CHECK(update_sequential(w, one_off, order).spins == s.spins);

  const std::vector<std::size_t> bad{0, 0, 2};
  CHECK_THROWS_AS(update_sequential(hebb_weights(generate_random_patterns(3, 1, 0), Normalization::OverN),
                                    ClassicalState::from(Pattern({1, 1, 1})), bad),
                  ValidationError);
}

TEST_CASE("orthogonal patterns are fixed points") {
  const PatternSet set({Pattern({1, 1, 1, 1, 1, 1, 1, 1, 1, 1}), Pattern({1, -1, 1, -1, 1, -1, 1, -1, 1, -1})});
  const auto w = hebb_weights(set, Normalization::OverNMinus1);
  for (const auto& xi : set.patterns()) {
    const auto s = ClassicalState::from(xi);
    CHECK(update_sequential(w, s, identity_order(10)).spins == s.spins);
  }
}

TEST_CASE("zero potential keeps the spin") {
  // Two orthogonal patterns cancel on every pair where they disagree.
  const PatternSet set({Pattern({1, 1}), Pattern({1, -1})});
  const auto w = hebb_weights(set, Normalization::OverNMinus1);
  const auto s = ClassicalState::from(Pattern({-1, 1}));
  CHECK(update_sequential(w, s, identity_order(2)).spins == s.spins);
  CHECK(update_parallel(w, s).spins == s.spins);
}

TEST_CASE("retrieve fixed points and convergence flags") {
  const auto set = generate_random_patterns(30, 1, 5);
  const auto w = hebb_weights(set, Normalization::OverNMinus1);
  for (const auto& start : {set[0], set[0].negated()}) {
    const auto r = retrieve(w, ClassicalState::from(start), 10);
    CHECK(r.converged);
    CHECK(r.sweeps_used == 1);
    CHECK(r.state.spins == ClassicalState::from(start).spins);
    CHECK(r.trace.size() == 2);
  }
  CHECK_THROWS_AS(retrieve(w, ClassicalState::from(set[0]), 0), ValidationError);
}

TEST_CASE("single-pattern disagreements never increase (exhaustive n <= 12)") {
  for (std::size_t n : {3u, 6u, 12u}) {
    const auto set = generate_random_patterns(n, 1, n);
    const auto& xi = set[0];
    const auto w = hebb_weights(set, Normalization::OverNMinus1);
    const auto order = identity_order(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<int> spins(n);
      for (std::size_t i = 0; i < n; ++i) spins[i] = (mask >> i) & 1 ? -xi[i] : xi[i];
      auto dist = [&](const std::vector<int>& v) {
        std::size_t d = 0;
        for (std::size_t i = 0; i < n; ++i) d += v[i] != xi[i];
        return std::min(d, n - d);
      };
      const auto next = update_sequential(w, ClassicalState{spins, 0}, order);
      REQUIRE(dist(next.spins) <= dist(spins));
    }
  }
}

TEST_CASE("retrieve is deterministic; parallel mode works") {
  const auto set = generate_random_patterns(40, 3, 8);
  const auto w = hebb_weights(set, Normalization::OverNMinus1);
  const std::size_t flips[] = {1, 5, 9, 13};
  const auto init = ClassicalState::from(set[0].with_flips(flips));
  const auto a = retrieve(w, init, 20);
  const auto b = retrieve(w, init, 20);
  CHECK(a.state.spins == b.state.spins);
  CHECK(a.trace == b.trace);
  const auto par = retrieve(w, init, 20, {}, UpdateMode::Parallel);
  CHECK(par.sweeps_used >= 1);
  CHECK(overlap(par.state.spins, set[0]) > 0.9);
}

TEST_CASE("classical retrieval at low load") {
  int p1_ok = 0, p5_ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 1000);
    const auto one = generate_random_patterns(100, 1, seed);
    const auto r1 = retrieve(hebb_weights(one, Normalization::OverNMinus1),
                             ClassicalState::from(one[0].with_flips(random_positions(100, 10, rng))), 50);
    p1_ok += r1.state.spins == ClassicalState::from(one[0]).spins;
    const auto five = generate_random_patterns(100, 5, seed);
    const auto r5 = retrieve(hebb_weights(five, Normalization::OverNMinus1),
                             ClassicalState::from(five[0].with_flips(random_positions(100, 10, rng))), 50);
    p5_ok += overlap(r5.state.spins, five[0]) > 0.95;
  }
  CHECK(p1_ok == 100);
  CHECK(p5_ok >= 90);
}
