#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's algorithms beyond basic matrix storage.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline M kron(const M& a, const M& b) {
  M out = M::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline M matmul(const M& a, const M& b) {
  M out = M::Zero(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      for (int k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

/// Truncated power series exp(x) = Σ_{k<terms} x^k/k!.
inline M exp_series(const M& x, int terms) {
  M out = M::Identity(x.rows(), x.cols());
  M term = M::Identity(x.rows(), x.cols());
  for (int k = 1; k < terms; ++k) {
    term = matmul(term, x) / double(k);
    out += term;
  }
  return out;
}

/// Rank of the span of a list of operators via full-pivot LU of the stacked vectors.
inline int span_rank(const std::vector<M>& ops, double tol = 1e-9) {
  if (ops.empty()) return 0;
  const int n = static_cast<int>(ops[0].size());
  M stack(n, static_cast<int>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k)
    for (int i = 0; i < n; ++i) stack(i, int(k)) = ops[k](i % ops[k].rows(), i / ops[k].rows());
  Eigen::FullPivLU<M> lu(stack);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

/// All words of length ≤ len in the generators and their adjoints, plus the identity.
inline std::vector<M> words(const std::vector<M>& gens, int dim, int len) {
  std::vector<M> letters;
  for (const auto& g : gens) {
    letters.push_back(g);
    letters.push_back(g.adjoint());
  }
  std::vector<M> all{M::Identity(dim, dim)};
  std::vector<M> frontier{M::Identity(dim, dim)};
  for (int l = 0; l < len; ++l) {
    std::vector<M> next;
    for (const auto& w : frontier)
      for (const auto& a : letters) next.push_back(matmul(w, a));
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return all;
}

/// Dimension of {x : x b = b x ∀ b} via dense null space of the stacked system.
inline int commutant_dimension(const std::vector<M>& ops, int d) {
  const int n = d * d;
  M sys = M::Zero(n * static_cast<int>(ops.size()), n);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    for (int col = 0; col < n; ++col) {
      M e = M::Zero(d, d);
      e(col % d, col / d) = 1.0;
      const M r = matmul(e, ops[k]) - matmul(ops[k], e);
      for (int i = 0; i < n; ++i) sys(int(k) * n + i, col) = r(i % d, i / d);
    }
  }
  Eigen::JacobiSVD<M> svd(sys);
  int null = 0;
  const auto& s = svd.singularValues();
  const double scale = s.size() ? std::max(1.0, s(0)) : 1.0;
  for (int i = 0; i < n; ++i)
    if (i >= s.size() || s(i) < 1e-9 * scale) ++null;
  return null;
}

inline M random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  M m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = C(n01(rng), n01(rng));
  return m;
}

inline M random_hermitian(int d, std::mt19937_64& rng) {
  const M a = random_matrix(d, d, rng);
  return (a + a.adjoint()) / 2.0;
}

inline M random_density(int d, std::mt19937_64& rng) {
  const M a = random_matrix(d, d, rng);
  M rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// Composite trapezoid rule on [a,b] with n panels.
template <class F>
double trapezoid(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

}  // namespace oracle
