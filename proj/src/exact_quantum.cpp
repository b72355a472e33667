#include "qam/exact_quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qam/rng.hpp"

namespace qam::quantum {

namespace {

constexpr Complex kI{0.0, 1.0};

inline int z_of(std::uint64_t x, std::uint64_t mask) { return (x & mask) ? -1 : +1; }

void check_qubits(std::size_t n, std::size_t max_qubits) {
  require(n >= 1, "need at least one qubit");
  if (n > max_qubits) {
    throw ValidationError("n=" + std::to_string(n) + " exceeds the qubit cap of " +
                          std::to_string(max_qubits) + " (a dense operator would need ~" +
                          std::to_string(dense_operator_bytes(n) >> 20) + " MiB)");
  }
}

}  // namespace

StateVector::StateVector(std::size_t n, Eigen::VectorXcd amplitudes)
    : n_(n), amplitudes_(std::move(amplitudes)) {
  require(n_ >= 1 && n_ < 63, "qubit count out of range");
  require(static_cast<std::size_t>(amplitudes_.size()) == (std::size_t{1} << n_),
          "state vector must have 2^n amplitudes");
}

std::uint64_t basis_index(const Pattern& pattern) {
  const std::size_t n = pattern.size();
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (pattern[i] < 0) x |= qubit_mask(n, i);
  return x;
}

Pattern basis_spins(std::size_t n, std::uint64_t x) {
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = z_of(x, qubit_mask(n, i));
  return Pattern(std::move(s));
}

StateVector StateVector::basis(std::size_t n, std::uint64_t index) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  require(index < (std::uint64_t{1} << n), "basis index out of range");
  a(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(n, std::move(a));
}

StateVector StateVector::basis(const Pattern& pattern) {
  return basis(pattern.size(), basis_index(pattern));
}

std::uint64_t dense_operator_bytes(std::size_t n) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  return dim * dim * sizeof(Complex);
}

TransverseHamiltonian::TransverseHamiltonian(const HamiltonianSpec& spec, std::size_t max_qubits)
    : n_(spec.weights.n()) {
  check_qubits(n_, max_qubits);
  std::vector<double> h_ext(n_, 0.0);
  if (spec.external) {
    require(spec.external->size() == n_, "external pattern length does not match weights");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) h_ext[i] += spec.weights(i, j) * (*spec.external)[j];
  }
  const std::size_t N = dim();
  field_.assign(n_ * N, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::uint64_t x = 0; x < N; ++x) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != i) acc += spec.weights(i, j) * z_of(x, qubit_mask(n_, j));
      }
      field_[i * N + x] = spec.J * acc + spec.g * h_ext[i];
    }
  }
}

// Y|0> = i|1>, Y|1> = -i|0>: (H psi)[x ^ m_i] += (bit_i(x) ? -i : i) D_i(x) psi[x].
Eigen::VectorXcd TransverseHamiltonian::apply(const Eigen::VectorXcd& psi) const {
  const std::size_t N = dim();
  require(static_cast<std::size_t>(psi.size()) == N, "dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (std::size_t i = 0; i < n_; ++i) {
    const std::uint64_t m = qubit_mask(n_, i);
    for (std::uint64_t x = 0; x < N; ++x) {
      const Complex c = (x & m) ? -kI : kI;
      out(static_cast<Eigen::Index>(x ^ m)) += c * field(i, x) * psi(static_cast<Eigen::Index>(x));
    }
  }
  return out;
}

// A = -iH: A[x ^ m_i, x] = (bit_i(x) ? -1 : +1) D_i(x).
Eigen::VectorXd TransverseHamiltonian::apply_generator(const Eigen::VectorXd& v) const {
  const std::size_t N = dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (std::size_t i = 0; i < n_; ++i) {
    const std::uint64_t m = qubit_mask(n_, i);
    for (std::uint64_t x = 0; x < N; ++x) {
      const double s = (x & m) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(x ^ m)) += s * field(i, x) * v(static_cast<Eigen::Index>(x));
    }
  }
  return out;
}

Eigen::MatrixXcd TransverseHamiltonian::dense() const {
  const std::size_t N = dim();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(Eigen::Index(N), Eigen::Index(N));
  for (std::size_t i = 0; i < n_; ++i) {
    const std::uint64_t m = qubit_mask(n_, i);
    for (std::uint64_t x = 0; x < N; ++x) {
      const Complex c = (x & m) ? -kI : kI;
      H(Eigen::Index(x ^ m), Eigen::Index(x)) += c * field(i, x);
    }
  }
  return H;
}

Eigen::MatrixXcd build_hamiltonian(const HamiltonianSpec& spec, std::size_t max_qubits) {
  return TransverseHamiltonian(spec, max_qubits).dense();
}

StateVector uniform_state(std::size_t n) {
  require(n >= 1, "need at least one qubit");
  const auto N = Eigen::Index{1} << n;
  return StateVector(n, Eigen::VectorXcd::Constant(N, Complex(std::pow(2.0, -0.5 * double(n)), 0.0)));
}

StateVector evolve(const Eigen::MatrixXcd& H, const StateVector& psi0, double t) {
  require(H.rows() == H.cols(), "Hamiltonian must be square");
  require(static_cast<std::size_t>(H.rows()) == psi0.dim(), "dimension mismatch");
  require(std::isfinite(t), "time must be finite");
  const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
  require(asym < 1e-12, "Hamiltonian is not Hermitian (max |H - H^H| = " + std::to_string(asym) + ")");
  if (t == 0.0) return psi0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const auto& U = es.eigenvectors();
  Eigen::VectorXcd c = U.adjoint() * psi0.amplitudes();
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(kI * es.eigenvalues()(k) * t);
  return StateVector(psi0.n(), U * c);
}

Propagator::Propagator(const TransverseHamiltonian& H, const StateVector& psi0)
    : hamiltonian_(&H), n_(H.n()) {
  require(psi0.n() == n_, "dimension mismatch");
  const std::size_t N = H.dim();
  const Eigen::VectorXd re = psi0.amplitudes().real();
  const Eigen::VectorXd im = psi0.amplitudes().imag();
  components_ = im.cwiseAbs().maxCoeff() > 0.0 ? 2 : 1;

  for (int parity = 0; parity < 2; ++parity) {
    auto& sec = sectors_[parity];
    for (std::uint64_t x = 0; x < N; ++x)
      if ((std::popcount(x) & 1) == parity) sec.states.push_back(x);
  }
  std::vector<std::size_t> local(N);
  for (auto& sec : sectors_)
    for (std::size_t k = 0; k < sec.states.size(); ++k) local[sec.states[k]] = k;

  // A column x: A[x ^ m_i, x] = s_i(x) D_i(x). S = A^T A, so
  // S[y, x] = sum_z A[z, y] A[z, x] with z = x ^ m_i and y = z ^ m_k.
  auto a_entry = [&](std::uint64_t col, std::size_t i) {
    return ((col & qubit_mask(n_, i)) ? -1.0 : 1.0) * H.field(i, col);
  };
  for (auto& sec : sectors_) {
    const auto d = static_cast<Eigen::Index>(sec.states.size());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
      const std::uint64_t x = sec.states[static_cast<std::size_t>(col)];
      for (std::size_t i = 0; i < n_; ++i) {
        const std::uint64_t z = x ^ qubit_mask(n_, i);
        const double azx = a_entry(x, i);
        for (std::size_t k = 0; k < n_; ++k) {
          const std::uint64_t y = z ^ qubit_mask(n_, k);
          S(static_cast<Eigen::Index>(local[y]), col) += a_entry(y, k) * azx;
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of H^2 failed");
    sec.vectors = es.eigenvectors();
    sec.values = es.eigenvalues().cwiseMax(0.0);
    for (Eigen::Index k = 0; k < d; ++k) squared_spectrum_.push_back(sec.values(k));

    sec.coeffs.resize(d, static_cast<Eigen::Index>(components_));
    Eigen::VectorXd local_in(d);
    for (std::size_t c = 0; c < components_; ++c) {
      const Eigen::VectorXd& src = c == 0 ? re : im;
      for (Eigen::Index k = 0; k < d; ++k)
        local_in(k) = src(static_cast<Eigen::Index>(sec.states[static_cast<std::size_t>(k)]));
      sec.coeffs.col(static_cast<Eigen::Index>(c)) = sec.vectors.transpose() * local_in;
    }
  }
}

StateVector Propagator::at(double t) const {
  require(std::isfinite(t), "time must be finite");
  const auto N = static_cast<Eigen::Index>(hamiltonian_->dim());
  Eigen::VectorXcd out(N);
  for (std::size_t c = 0; c < components_; ++c) {
    Eigen::VectorXd cos_part = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd sin_part = Eigen::VectorXd::Zero(N);
    for (const auto& sec : sectors_) {
      const auto d = sec.values.size();
      Eigen::VectorXd a(d), b(d);
      for (Eigen::Index k = 0; k < d; ++k) {
        const double w = std::sqrt(sec.values(k));
        const double ck = sec.coeffs(k, static_cast<Eigen::Index>(c));
        a(k) = std::cos(w * t) * ck;
        // sin(wt)/w, continuous at w = 0
        b(k) = (w * std::abs(t) < 1e-8 ? t * (1.0 - w * w * t * t / 6.0) : std::sin(w * t) / w) * ck;
      }
      const Eigen::VectorXd ua = sec.vectors * a;
      const Eigen::VectorXd ub = sec.vectors * b;
      for (Eigen::Index k = 0; k < d; ++k) {
        const auto x = static_cast<Eigen::Index>(sec.states[static_cast<std::size_t>(k)]);
        cos_part(x) = ua(k);
        sin_part(x) = ub(k);
      }
    }
    const Eigen::VectorXd v = cos_part - hamiltonian_->apply_generator(sin_part);
    if (c == 0) {
      out = v.cast<Complex>();
    } else {
      out += kI * v.cast<Complex>();
    }
  }
  return StateVector(n_, std::move(out));
}

double expectation(const Eigen::MatrixXcd& op, const StateVector& psi) {
  return psi.amplitudes().dot(op * psi.amplitudes()).real();
}

double energy(const TransverseHamiltonian& H, const StateVector& psi) {
  return psi.amplitudes().dot(H.apply(psi.amplitudes())).real();
}

double expect_sigma_z(const StateVector& psi, std::size_t i) {
  require(i < psi.n(), "qubit index out of range");
  const std::uint64_t m = qubit_mask(psi.n(), i);
  double acc = 0.0;
  for (std::uint64_t x = 0; x < psi.dim(); ++x)
    acc += z_of(x, m) * std::norm(psi.amplitudes()(static_cast<Eigen::Index>(x)));
  return acc;
}

// <psi| Y_i |psi> = sum_x conj(psi[x ^ m]) c(x) psi[x], c = i on |0>, -i on |1>.
double expect_sigma_y(const StateVector& psi, std::size_t i) {
  require(i < psi.n(), "qubit index out of range");
  const std::uint64_t m = qubit_mask(psi.n(), i);
  const auto& a = psi.amplitudes();
  Complex acc = 0.0;
  for (std::uint64_t x = 0; x < psi.dim(); ++x) {
    const Complex c = (x & m) ? -kI : kI;
    acc += std::conj(a(static_cast<Eigen::Index>(x ^ m))) * c * a(static_cast<Eigen::Index>(x));
  }
  return acc.real();
}

double expect_sigma_x(const StateVector& psi, std::size_t i) {
  require(i < psi.n(), "qubit index out of range");
  const std::uint64_t m = qubit_mask(psi.n(), i);
  const auto& a = psi.amplitudes();
  Complex acc = 0.0;
  for (std::uint64_t x = 0; x < psi.dim(); ++x)
    acc += std::conj(a(static_cast<Eigen::Index>(x ^ m))) * a(static_cast<Eigen::Index>(x));
  return acc.real();
}

Eigen::MatrixXcd pauli_operator(std::size_t n, std::size_t i, char axis) {
  require(i < n, "qubit index out of range");
  Eigen::Matrix2cd p;
  switch (axis) {
    case 'x': p << 0, 1, 1, 0; break;
    case 'y': p << 0, -kI, kI, 0; break;
    case 'z': p << 1, 0, 0, -1; break;
    default: throw ValidationError("axis must be x, y or z");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    const Eigen::MatrixXcd f = q == i ? Eigen::MatrixXcd(p) : Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
    out = std::move(next);
  }
  return out;
}

Overlaps measure_overlaps(const StateVector& psi, const Pattern& pattern) {
  require(pattern.size() == psi.n(), "pattern length does not match qubit count");
  Overlaps o;
  for (std::size_t i = 0; i < psi.n(); ++i) {
    o.m_y += pattern[i] * expect_sigma_y(psi, i);
    o.m_z += pattern[i] * expect_sigma_z(psi, i);
  }
  o.m_y /= double(psi.n());
  o.m_z /= double(psi.n());
  return o;
}

std::map<std::uint64_t, std::uint64_t> sample_measurement(const StateVector& psi,
                                                          std::uint64_t shots,
                                                          std::uint64_t seed) {
  require(shots >= 1, "shots must be at least 1");
  std::vector<double> cdf(psi.dim());
  double acc = 0.0;
  for (std::size_t x = 0; x < psi.dim(); ++x) {
    acc += std::norm(psi.amplitudes()(static_cast<Eigen::Index>(x)));
    cdf[x] = acc;
  }
  Rng rng(seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // upper_bound never lands on a zero-probability entry; the end case is rounding.
    if (it == cdf.end()) --it;
    ++counts[static_cast<std::uint64_t>(it - cdf.begin())];
  }
  return counts;
}

RetrievalRun retrieval_run(const PatternSet& patterns, const Pattern& external, double J, double g,
                           std::span<const double> t_grid, Normalization normalization,
                           std::size_t max_qubits) {
  require(!t_grid.empty(), "time grid is empty");
  require(external.size() == patterns.n(), "external pattern length does not match n");
  check_qubits(patterns.n(), max_qubits);
  const HamiltonianSpec spec{hebb_weights(patterns, normalization), J, g, external};
  const TransverseHamiltonian H(spec, max_qubits);
  const StateVector psi0 = uniform_state(patterns.n());
  const Propagator prop(H, psi0);

  RetrievalRun run{{}, psi0};
  for (double t : t_grid) {
    StateVector psi = prop.at(t);
    const auto o = measure_overlaps(psi, patterns[0]);
    run.trace.times.push_back(t);
    run.trace.m_y.push_back(o.m_y);
    run.trace.m_z.push_back(o.m_z);
    run.trace.norm.push_back(psi.norm());
    run.trace.energy.push_back(energy(H, psi));
    run.final_state = std::move(psi);
  }
  return run;
}

}  // namespace qam::quantum
