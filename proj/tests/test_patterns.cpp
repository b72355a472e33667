#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "qam/patterns.hpp"

using namespace qam;

TEST_CASE("pattern construction validates entries") {
  CHECK_NOTHROW(Pattern({1, -1, 1}));
  CHECK_THROWS_AS(Pattern({1, 0, 1}), ValidationError);
  CHECK_THROWS_AS(Pattern({1}), ValidationError);
  CHECK_THROWS_AS(PatternSet({}), ValidationError);
  CHECK_THROWS_AS(PatternSet({Pattern({1, 1}), Pattern({1, 1, 1})}), ValidationError);
}

TEST_CASE("hebb weights for small hand-checked sets") {
  const PatternSet one({Pattern({1, 1, 1})});
  const auto w = hebb_weights(one, Normalization::OverNMinus1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(w(i, j) == (i == j ? 0.0 : 0.5));

  const PatternSet orth({Pattern({1, 1}), Pattern({1, -1})});
  CHECK(hebb_weights(orth, Normalization::OverNMinus1)(0, 1) == 0.0);

  const PatternSet single({Pattern({1, -1, 1, 1, -1})});
  const auto w1 = hebb_weights(single, Normalization::OverNMinus1);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) CHECK(std::abs(std::abs(w1(i, j)) - 0.25) < 1e-15);
}

TEST_CASE("hebb weights match the brute-force sum") {
  std::uint64_t seed = 0;
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t p = 1; p <= 6; ++p) {
      const auto set = generate_random_patterns(n, p, seed++);
      std::vector<std::vector<int>> raw;
      for (const auto& pat : set.patterns()) raw.emplace_back(pat.spins().begin(), pat.spins().end());
      for (auto norm : {Normalization::OverNMinus1, Normalization::OverN}) {
        const double d = norm == Normalization::OverN ? double(n) : double(n - 1);
        const auto w = hebb_weights(set, norm);
        const Eigen::MatrixXd ref = oracle::hebb_brute_force(raw, d);
        CHECK((w.entries() - ref).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(w.entries() == w.entries().transpose());
        CHECK(w.entries().diagonal().isZero(0.0));
      }
    }
  }
}

TEST_CASE("weight matrix rejects broken invariants") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(WeightMatrix(m, Normalization::OverN), ValidationError);
  m(1, 0) = 1.0;
  CHECK_NOTHROW(WeightMatrix(m, Normalization::OverN));
  m(2, 2) = 0.5;
  CHECK_THROWS_AS(WeightMatrix(m, Normalization::OverN), ValidationError);
}

TEST_CASE("overlap") {
  const Pattern a({1, 1, -1, -1});
  CHECK(overlap(a.spins(), a) == 1.0);
  CHECK(overlap(a.spins(), a.negated()) == -1.0);
  CHECK(overlap(Pattern({1, -1, -1, -1}).spins(), a) == 0.5);
  const std::vector<int> short_state{1, 1};
  CHECK_THROWS_AS(overlap(short_state, a), ValidationError);

  const auto set = generate_random_patterns(16, 2, 99);
  const auto& x = set[0];
  const auto& y = set[1];
  CHECK(overlap(x.spins(), y) == overlap(y.spins(), x));
  CHECK(overlap(x.spins(), y.negated()) == -overlap(x.spins(), y));
}

TEST_CASE("random patterns are deterministic and balanced") {
  CHECK(generate_random_patterns(4, 2, 7) == generate_random_patterns(4, 2, 7));
  CHECK_FALSE(generate_random_patterns(64, 2, 7) == generate_random_patterns(64, 2, 8));
  const auto big = generate_random_patterns(1000, 1, 3);
  double mean = 0.0;
  for (int s : big[0].spins()) mean += s;
  CHECK(std::abs(mean / 1000.0) < 0.1);
  CHECK_THROWS_AS(generate_random_patterns(4, 0, 1), ValidationError);
  CHECK_THROWS_AS(generate_random_patterns(1, 1, 1), ValidationError);
}

TEST_CASE("random positions are distinct and seeded") {
  Rng a(5), b(5);
  const auto p = random_positions(20, 10, a);
  CHECK(p == random_positions(20, 10, b));
  std::vector<bool> seen(20, false);
  for (auto i : p) {
    CHECK(i < 20);
    CHECK_FALSE(seen[i]);
    seen[i] = true;
  }
  Rng c(1);
  CHECK_THROWS_AS(random_positions(3, 4, c), ValidationError);
}

TEST_CASE("pattern file round trip and errors") {
  const auto set = generate_random_patterns(7, 3, 11);
  std::stringstream ss;
  write_patterns(ss, set);
  CHECK(ss.str().rfind("n=7 p=3\n", 0) == 0);
  CHECK(read_patterns(ss) == set);

  std::istringstream bad_entry("n=2 p=1\n+1 0\n");
  CHECK_THROWS_WITH_AS(read_patterns(bad_entry), doctest::Contains("line 2"), ValidationError);
  std::istringstream bad_header("n=2\n+1 -1\n");
  CHECK_THROWS_AS(read_patterns(bad_header), ValidationError);
  std::istringstream short_line("n=3 p=1\n+1 -1\n");
  CHECK_THROWS_AS(read_patterns(short_line), ValidationError);
}
