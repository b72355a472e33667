#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qam/patterns.hpp"

namespace qam::quantum {

using Complex = std::complex<double>;

// Basis convention: qubit i is the i-th tensor factor from the left, so it
// lives in bit (n-1-i) of the basis index. |0> carries sigma^z = +1 (spin +1),
// |1> carries sigma^z = -1.
inline std::uint64_t qubit_mask(std::size_t n, std::size_t i) {
  return std::uint64_t{1} << (n - 1 - i);
}

inline constexpr std::size_t kDefaultMaxQubits = 14;

class StateVector {
 public:
  StateVector(std::size_t n, Eigen::VectorXcd amplitudes);

  std::size_t n() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

  /// Computational basis state whose spins equal the pattern (|0> <-> +1).
  static StateVector basis(const Pattern& pattern);
  static StateVector basis(std::size_t n, std::uint64_t index);

 private:
  std::size_t n_;
  Eigen::VectorXcd amplitudes_;
};

/// Basis index of the computational state matching `pattern`.
std::uint64_t basis_index(const Pattern& pattern);
/// Spins of basis index `x` as a Pattern.
Pattern basis_spins(std::size_t n, std::uint64_t x);

struct HamiltonianSpec {
  WeightMatrix weights;
  double J = 1.0;
  double g = 0.0;
  std::optional<Pattern> external;
};

/// Approximate bytes for a dense 2^n x 2^n complex matrix.
std::uint64_t dense_operator_bytes(std::size_t n);

/// H = J sum_{i != j} w_ij Y_i Z_j + g sum_i h_i Y_i with h_i = sum_j w_ij xi_j^ext.
/// Every term flips exactly one qubit, so H = sum_i Y_i D_i with D_i diagonal.
/// The structure is stored as the per-qubit diagonal D_i(x).
class TransverseHamiltonian {
 public:
  explicit TransverseHamiltonian(const HamiltonianSpec& spec,
                                 std::size_t max_qubits = kDefaultMaxQubits);

  std::size_t n() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }

  /// D_i(x) = J sum_{j != i} w_ij z_j(x) + g h_i.
  double field(std::size_t i, std::uint64_t x) const { return field_[i * dim() + x]; }

  /// H applied to a state, without materialising the matrix.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
  /// Real antisymmetric A with H = iA, applied to a real vector.
  Eigen::VectorXd apply_generator(const Eigen::VectorXd& v) const;

  Eigen::MatrixXcd dense() const;

 private:
  std::size_t n_;
  std::vector<double> field_;
};

/// Dense operator of the given spec.
Eigen::MatrixXcd build_hamiltonian(const HamiltonianSpec& spec,
                                   std::size_t max_qubits = kDefaultMaxQubits);

StateVector uniform_state(std::size_t n);

/// exp(+iHt) psi0 for an arbitrary dense Hermitian H, via H = U diag(lambda) U^H.
/// Throws ValidationError when max |H - H^H| exceeds 1e-12.
StateVector evolve(const Eigen::MatrixXcd& H, const StateVector& psi0, double t);

/// Reusable spectral propagator for exp(+iHt) psi0 with fixed psi0.
///
/// Since H = iA with A real antisymmetric, H^2 = A^T A is real symmetric and,
/// because each term of H flips one qubit, block diagonal in the parity of the
/// basis index popcount. With S = H^2 = V diag(s) V^T,
///   exp(iHt) = exp(-At) = cos(t sqrt(S)) - A sin(t sqrt(S)) / sqrt(S),
/// so one eigendecomposition per parity block serves every t. A real psi0
/// stays real for all t.
class Propagator {
 public:
  Propagator(const TransverseHamiltonian& H, const StateVector& psi0);

  StateVector at(double t) const;
  /// Eigenvalues of H^2 (both parity sectors, ascending within each).
  const std::vector<double>& squared_spectrum() const { return squared_spectrum_; }

 private:
  struct Sector {
    std::vector<std::uint64_t> states;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;  // eigenvalues of S, clamped at 0
    // V^T restricted to the sector, one column per real input component.
    Eigen::MatrixXd coeffs;
  };

  const TransverseHamiltonian* hamiltonian_;
  std::size_t n_;
  // Real and (if present) imaginary part of psi0, propagated separately.
  std::size_t components_ = 1;
  Sector sectors_[2];
  std::vector<double> squared_spectrum_;
};

/// <psi|O|psi> for a dense operator.
double expectation(const Eigen::MatrixXcd& op, const StateVector& psi);
/// <psi|H|psi> using the structured action.
double energy(const TransverseHamiltonian& H, const StateVector& psi);

/// <sigma^y_i> and <sigma^z_i> by amplitude-pair summation.
double expect_sigma_y(const StateVector& psi, std::size_t i);
double expect_sigma_z(const StateVector& psi, std::size_t i);
double expect_sigma_x(const StateVector& psi, std::size_t i);

/// Dense single-qubit Pauli embedded at qubit i (test support; O(4^n) memory).
Eigen::MatrixXcd pauli_operator(std::size_t n, std::size_t i, char axis);

struct Overlaps {
  double m_y = 0.0;
  double m_z = 0.0;
};

/// m_k = (1/n) sum_i xi_i <sigma^k_i>.
Overlaps measure_overlaps(const StateVector& psi, const Pattern& pattern);

/// Basis-state counts from `shots` draws with probabilities |amplitude|^2.
std::map<std::uint64_t, std::uint64_t> sample_measurement(const StateVector& psi,
                                                          std::uint64_t shots,
                                                          std::uint64_t seed);

struct ObservableTrace {
  std::vector<double> times;
  std::vector<double> m_y;
  std::vector<double> m_z;
  std::vector<double> norm;
  std::vector<double> energy;
};

struct RetrievalRun {
  ObservableTrace trace;
  StateVector final_state;
};

/// Evolves the uniform state under H built from the Hebb weights of
/// `patterns` (plus the external field for `external`) and records overlaps
/// with pattern 1 at each grid time.
RetrievalRun retrieval_run(const PatternSet& patterns, const Pattern& external, double J, double g,
                           std::span<const double> t_grid,
                           Normalization normalization = Normalization::OverN,
                           std::size_t max_qubits = kDefaultMaxQubits);

}  // namespace qam::quantum
