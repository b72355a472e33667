#pragma once
// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

/// w_ij = (1/d) sum_mu xi_i^mu xi_j^mu by explicit triple loop, zero diagonal.
inline Eigen::MatrixXd hebb_brute_force(const std::vector<std::vector<int>>& patterns, double d) {
  const std::size_t n = patterns.front().size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double sum = 0.0;
      for (const auto& xi : patterns) sum += xi[i] * xi[j];
      w(i, j) = sum / d;
    }
  }
  return w;
}

inline Eigen::Matrix2cd pauli(char axis) {
  const Complex I(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -I, I, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Tensor product with `ops[i]` on factor i (leftmost factor is qubit 0).
inline Eigen::MatrixXcd tensor(const std::vector<char>& ops) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : ops) out = kron(out, pauli(c));
  return out;
}

/// J sum_{i != j} w_ij Y_i Z_j + g sum_i h_i Y_i, term by term.
inline Eigen::MatrixXcd hamiltonian_kron(const Eigen::MatrixXd& w, double J, double g,
                                         const std::vector<double>& h) {
  const std::size_t n = static_cast<std::size_t>(w.rows());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<char> ops(n, '1');
      ops[i] = 'y';
      ops[j] = 'z';
      H += J * w(i, j) * tensor(ops);
    }
    if (!h.empty()) {
      std::vector<char> ops(n, '1');
      ops[i] = 'y';
      H += g * h[i] * tensor(ops);
    }
  }
  return H;
}

/// exp(iHt) psi by a Taylor series truncated at `order`, on `substeps` slices.
inline Eigen::VectorXcd taylor_evolve(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& psi, double t,
                                      int order, int substeps = 1) {
  const Complex I(0.0, 1.0);
  const double dt = t / substeps;
  Eigen::VectorXcd v = psi;
  for (int s = 0; s < substeps; ++s) {
    Eigen::VectorXcd term = v;
    Eigen::VectorXcd sum = v;
    for (int k = 1; k <= order; ++k) {
      term = (I * dt / double(k)) * (H * term);
      sum += term;
    }
    v = sum;
  }
  return v;
}

/// Nodes and weights for the integral of exp(-x^2) f(x) (Golub-Welsch).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Quadrature gauss_hermite(int n) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  for (int k = 0; k < n; ++k) {
    q.nodes.push_back(es.eigenvalues()(k));
    const double v0 = es.eigenvectors()(0, k);
    q.weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
  }
  return q;
}

/// E[f(z)] for z ~ N(0, 1) by Gauss-Hermite quadrature.
inline double normal_expectation(const Quadrature& q, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) sum += q.weights[k] * f(std::sqrt(2.0) * q.nodes[k]);
  return sum / std::sqrt(std::numbers::pi);
}

/// E[exp(i c z)] for z ~ N(0, 1). A single 64-node rule only resolves
/// frequencies up to about 10, so z is written as a sum of K independent
/// N(0, 1/K) variables and the rule is applied to each factor, keeping every
/// per-factor frequency at or below `c_max`.
inline Complex normal_characteristic(const Quadrature& q, double c, double c_max = 6.0) {
  const double ratio = std::abs(c) / c_max;
  const int K = std::max(1, static_cast<int>(std::ceil(ratio * ratio)));
  const double ck = c / std::sqrt(double(K));
  Complex one = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k)
    one += q.weights[k] * std::exp(Complex(0.0, ck * std::sqrt(2.0) * q.nodes[k]));
  one /= std::sqrt(std::numbers::pi);
  return std::pow(one, K);
}

/// E[sin(a + b z)], E[cos(a + b z)] and E[sin^2(a + b z)], by direct
/// quadrature of the integrand when b is small enough, otherwise through the
/// split characteristic function above.
struct NoisyMoments {
  double sin_avg;
  double cos_avg;
  double sin2_avg;
};

inline NoisyMoments noisy_moments(const Quadrature& q, double a, double b, double c_max = 6.0) {
  NoisyMoments out{};
  if (2.0 * b <= c_max) {
    out.sin_avg = normal_expectation(q, [&](double z) { return std::sin(a + b * z); });
    out.cos_avg = normal_expectation(q, [&](double z) { return std::cos(a + b * z); });
    out.sin2_avg = normal_expectation(q, [&](double z) {
      const double s = std::sin(a + b * z);
      return s * s;
    });
    return out;
  }
  const Complex e1 = std::exp(Complex(0.0, a)) * normal_characteristic(q, b, c_max);
  const Complex e2 = std::exp(Complex(0.0, 2.0 * a)) * normal_characteristic(q, 2.0 * b, c_max);
  out.sin_avg = e1.imag();
  out.cos_avg = e1.real();
  out.sin2_avg = 0.5 * (1.0 - e2.real());
  return out;
}

/// Root of f in [a, b] with a sign change, to absolute tolerance `tol`.
inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  double fa = f(a);
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
