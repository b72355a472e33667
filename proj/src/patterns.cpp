#include "qam/patterns.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qam/rng.hpp"

namespace qam {

Pattern::Pattern(std::vector<int> spins) : spins_(std::move(spins)) {
  require(spins_.size() >= 2, "pattern length must be at least 2");
  for (int s : spins_) require(s == 1 || s == -1, "pattern entries must be -1 or +1");
}

Pattern Pattern::negated() const {
  std::vector<int> out(spins_);
  for (int& s : out) s = -s;
  return Pattern(std::move(out));
}

Pattern Pattern::with_flips(std::span<const std::size_t> positions) const {
  std::vector<int> out(spins_);
  for (std::size_t i : positions) {
    require(i < out.size(), "flip position out of range");
    out[i] = -out[i];
  }
  return Pattern(std::move(out));
}

PatternSet::PatternSet(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {
  require(!patterns_.empty(), "pattern set is empty");
  n_ = patterns_.front().size();
  for (const auto& p : patterns_) require(p.size() == n_, "patterns have mismatched lengths");
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd entries, Normalization normalization)
    : entries_(std::move(entries)), normalization_(normalization) {
  require(entries_.rows() == entries_.cols(), "weight matrix must be square");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    require(entries_(i, i) == 0.0, "weight matrix must have zero diagonal");
    for (Eigen::Index j = 0; j < i; ++j)
      require(entries_(i, j) == entries_(j, i), "weight matrix must be symmetric");
  }
}

WeightMatrix hebb_weights(const PatternSet& patterns, Normalization normalization) {
  const auto n = static_cast<Eigen::Index>(patterns.n());
  Eigen::MatrixXd xi(n, static_cast<Eigen::Index>(patterns.p()));
  for (std::size_t mu = 0; mu < patterns.p(); ++mu)
    for (Eigen::Index i = 0; i < n; ++i)
      xi(i, static_cast<Eigen::Index>(mu)) = patterns[mu][static_cast<std::size_t>(i)];
  const double denom = normalization == Normalization::OverNMinus1 ? double(n - 1) : double(n);
  // Integer-valued sums are exact in double, so the product is symmetric bit for bit.
  Eigen::MatrixXd w = (xi * xi.transpose()) / denom;
  w.diagonal().setZero();
  return WeightMatrix(std::move(w), normalization);
}

double overlap(std::span<const int> state, const Pattern& pattern) {
  require(state.size() == pattern.size(), "overlap: length mismatch");
  long sum = 0;
  for (std::size_t i = 0; i < state.size(); ++i) sum += state[i] * pattern[i];
  return static_cast<double>(sum) / static_cast<double>(state.size());
}

std::vector<std::size_t> random_positions(std::size_t n, std::size_t k, Rng& rng) {
  require(k <= n, "cannot choose " + std::to_string(k) + " of " + std::to_string(n) + " positions");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  return idx;
}

PatternSet generate_random_patterns(std::size_t n, std::size_t p, std::uint64_t seed) {
  require(n >= 2, "n must be at least 2");
  require(p >= 1, "p must be at least 1");
  Rng rng(seed);
  std::vector<Pattern> out;
  out.reserve(p);
  for (std::size_t mu = 0; mu < p; ++mu) {
    std::vector<int> spins(n);
    for (auto& s : spins) s = rng.spin();
    out.emplace_back(std::move(spins));
  }
  return PatternSet(std::move(out));
}

void write_patterns(std::ostream& out, const PatternSet& patterns) {
  out << "n=" << patterns.n() << " p=" << patterns.p() << '\n';
  for (const auto& pat : patterns.patterns()) {
    for (std::size_t i = 0; i < pat.size(); ++i) {
      if (i) out << ' ';
      out << (pat[i] > 0 ? "+1" : "-1");
    }
    out << '\n';
  }
}

PatternSet read_patterns(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "pattern file: missing header");
  std::size_t n = 0, p = 0;
  {
    std::istringstream hs(line);
    std::string a, b;
    hs >> a >> b;
    require(a.rfind("n=", 0) == 0 && b.rfind("p=", 0) == 0,
            "pattern file: header must read 'n=<n> p=<p>'");
    try {
      n = std::stoul(a.substr(2));
      p = std::stoul(b.substr(2));
    } catch (const std::exception&) {
      throw ValidationError("pattern file: malformed header '" + line + "'");
    }
  }
  std::vector<Pattern> out;
  int lineno = 1;
  while (out.size() < p && std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<int> spins;
    std::string tok;
    while (ls >> tok) {
      if (tok == "+1") spins.push_back(1);
      else if (tok == "-1") spins.push_back(-1);
      else throw ValidationError("pattern file line " + std::to_string(lineno) + ": bad entry '" + tok + "'");
    }
    require(spins.size() == n, "pattern file line " + std::to_string(lineno) + ": expected " +
                                   std::to_string(n) + " entries");
    out.emplace_back(std::move(spins));
  }
  require(out.size() == p, "pattern file: expected " + std::to_string(p) + " patterns");
  return PatternSet(std::move(out));
}

void save_patterns(const std::string& path, const PatternSet& patterns) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot write " + path);
  write_patterns(f, patterns);
}

PatternSet load_patterns(const std::string& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), "cannot read " + path);
  return read_patterns(f);
}

}  // namespace qam
