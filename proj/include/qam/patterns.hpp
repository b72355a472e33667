#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qam/errors.hpp"
#include "qam/rng.hpp"

namespace qam {

/// A binary memory vector. Entries are stored as signed integers in {-1, +1}.
class Pattern {
 public:
  explicit Pattern(std::vector<int> spins);

  std::size_t size() const { return spins_.size(); }
  int operator[](std::size_t i) const { return spins_[i]; }
  std::span<const int> spins() const { return spins_; }

  Pattern negated() const;
  /// Copy with the listed positions flipped.
  Pattern with_flips(std::span<const std::size_t> positions) const;

  bool operator==(const Pattern&) const = default;

 private:
  std::vector<int> spins_;
};

class PatternSet {
 public:
  explicit PatternSet(std::vector<Pattern> patterns);

  std::size_t n() const { return n_; }
  std::size_t p() const { return patterns_.size(); }
  double alpha() const { return static_cast<double>(p()) / static_cast<double>(n_); }

  const Pattern& operator[](std::size_t mu) const { return patterns_[mu]; }
  const std::vector<Pattern>& patterns() const { return patterns_; }

  bool operator==(const PatternSet&) const = default;

 private:
  std::vector<Pattern> patterns_;
  std::size_t n_ = 0;
};

enum class Normalization { OverNMinus1, OverN };

/// Symmetric, zero-diagonal Hebb couplings.
class WeightMatrix {
 public:
  WeightMatrix(Eigen::MatrixXd entries, Normalization normalization);

  std::size_t n() const { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& entries() const { return entries_; }
  Normalization normalization() const { return normalization_; }

 private:
  Eigen::MatrixXd entries_;
  Normalization normalization_;
};

/// w_ij = (1/d) sum_mu xi_i^mu xi_j^mu for i != j, d = n-1 or n; w_ii = 0.
WeightMatrix hebb_weights(const PatternSet& patterns, Normalization normalization);

/// (1/n) sum_i a_i b_i.
double overlap(std::span<const int> state, const Pattern& pattern);

/// k distinct indices from [0, n), drawn by a partial Fisher-Yates shuffle.
std::vector<std::size_t> random_positions(std::size_t n, std::size_t k, Rng& rng);

/// p patterns of n fair +-1 entries. Deterministic in `seed` (see qam::Rng).
PatternSet generate_random_patterns(std::size_t n, std::size_t p, std::uint64_t seed);

/// Plain-text pattern file: header "n=<n> p=<p>", then one line per pattern
/// with entries "+1"/"-1" separated by single spaces.
void write_patterns(std::ostream& out, const PatternSet& patterns);
PatternSet read_patterns(std::istream& in);
void save_patterns(const std::string& path, const PatternSet& patterns);
PatternSet load_patterns(const std::string& path);

}  // namespace qam
