#include "qrf/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrf {

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator zeros(int dim) { return Operator::Zero(dim, dim); }

Operator pauli_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator pauli_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Operator pauli_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator ket_bra(int dim, int row, int col) {
  Operator m = Operator::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

Operator diag(const std::vector<Complex>& entries) {
  const int n = static_cast<int>(entries.size());
  Operator m = Operator::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = entries[i];
  return m;
}

Operator diag_real(const std::vector<double>& entries) {
  std::vector<Complex> c(entries.begin(), entries.end());
  return diag(c);
}

Vector basis_vector(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

Operator dagger(const Operator& x) { return x.adjoint(); }

Complex hs_inner(const Operator& a, const Operator& b) {
  // tr(a† b) = Σ conj(a_ij) b_ij
  return (a.conjugate().cwiseProduct(b)).sum();
}

double frobenius(const Operator& x) { return x.norm(); }

double operator_norm(const Operator& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Operator> svd(x);
  return svd.singularValues()(0);
}

bool all_finite(const Operator& x) { return x.allFinite(); }

bool is_square(const Operator& x) { return x.rows() == x.cols() && x.rows() >= 1; }

bool is_hermitian(const Operator& x, double tol) {
  if (!is_square(x)) return false;
  return (x - x.adjoint()).norm() <= tol * std::max(1.0, x.norm());
}

bool is_unitary(const Operator& x, double tol) {
  if (!is_square(x)) return false;
  const auto n = x.rows();
  return (x * x.adjoint() - Operator::Identity(n, n)).norm() <= tol * std::sqrt(double(n)) &&
         (x.adjoint() * x - Operator::Identity(n, n)).norm() <= tol * std::sqrt(double(n));
}

bool is_projection(const Operator& x, double tol) {
  if (!is_hermitian(x, tol)) return false;
  return (x * x - x).norm() <= tol * std::max(1.0, x.norm());
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double relative_distance(const Operator& a, const Operator& b) {
  const double scale = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() / scale;
}

void require_operator(const Operator& x, const std::string& what) {
  if (!is_square(x)) throw Error(what + ": operator must be square with dim >= 1");
  if (!all_finite(x)) throw Error(what + ": operator has non-finite entries");
}

Operator tensor_product(const Operator& a, const Operator& b) {
  const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Operator out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Operator tensor_product(const std::vector<Operator>& factors) {
  if (factors.empty()) return Operator::Identity(1, 1);
  Operator out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k]);
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Operator partial_trace(const Operator& x, int d1, int d2, Side side) {
  if (d1 < 1 || d2 < 1 || x.rows() != Eigen::Index(d1) * d2 || x.cols() != x.rows())
    throw Error("partial_trace: incompatible factor dimensions");
  if (side == Side::second) {
    Operator out = Operator::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) out(i, j) = x.block(i * d2, j * d2, d2, d2).trace();
    return out;
  }
  Operator out = Operator::Zero(d2, d2);
  for (int i = 0; i < d1; ++i) out += x.block(i * d2, i * d2, d2, d2);
  return out;
}

Operator swap_operator(int d1, int d2) {
  const int n = d1 * d2;
  Operator p = Operator::Zero(n, n);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) p(j * d1 + i, i * d2 + j) = 1.0;
  return p;
}

Operator swap_factors(const Operator& x, int d1, int d2) {
  const Operator p = swap_operator(d1, d2);
  return p * x * p.adjoint();
}

HermitianEig hermitian_eig(const Operator& x, double herm_tol) {
  if (!is_square(x)) throw Error("hermitian_eig: operator must be square");
  if (!is_hermitian(x, herm_tol)) throw Error("hermitian_eig: operator is not Hermitian");
  const Operator h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");

  RealVector values = solver.eigenvalues();
  Operator vectors = solver.eigenvectors();
  const auto n = values.size();

  // Phase-normalise: first component with modulus > 1e-12 becomes real positive.
  std::vector<double> lead(n, 0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex c = vectors(i, k);
      if (std::abs(c) > 1e-12) {
        vectors.col(k) *= std::conj(c) / std::abs(c);
        lead[k] = std::real(vectors(i, k));
        break;
      }
    }
  }

  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Solver output is ascending; reorder inside clusters of equal eigenvalues.
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && values(stop) - values(start) <= 1e-10 * scale) ++stop;
    std::stable_sort(order.begin() + start, order.begin() + stop,
                     [&](Eigen::Index a, Eigen::Index b) { return lead[a] < lead[b]; });
    start = stop;
  }

  HermitianEig out{RealVector(n), Operator(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = values(order[k]);
    out.vectors.col(k) = vectors.col(order[k]);
  }
  return out;
}

Operator apply_spectral_function(const Operator& x, const SpectralFunction& f) {
  const HermitianEig eig = hermitian_eig(x);
  const auto n = eig.values.size();
  Vector fv(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    fv(k) = f(eig.values(k));
    if (!std::isfinite(fv(k).real()) || !std::isfinite(fv(k).imag()))
      throw Error("apply_spectral_function: function is not finite at eigenvalue " +
                  std::to_string(eig.values(k)));
  }
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

Operator sqrtm_psd(const Operator& x) {
  return apply_spectral_function(x, [](double v) { return Complex(std::sqrt(std::max(v, 0.0)), 0.0); });
}

Operator expm_hermitian(const Operator& h, Complex scale) {
  return apply_spectral_function(h, [scale](double v) { return std::exp(scale * v); });
}

Vector vec(const Operator& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Operator unvec(const Vector& v, int dim) { return Eigen::Map<const Operator>(v.data(), dim, dim); }

// ---------------------------------------------------------------------------

DensityState::DensityState(Operator op, double tol) : op_(std::move(op)) {
  require_operator(op_, "DensityState");
  if (!is_hermitian(op_, tol)) throw Error("DensityState: operator is not Hermitian");
  const HermitianEig eig = hermitian_eig(op_, tol);
  if (eig.values(0) < -tol) throw Error("DensityState: operator is not positive semidefinite");
  if (std::abs(op_.trace() - Complex(1.0, 0.0)) > tol) throw Error("DensityState: trace is not 1");
}

DensityState DensityState::pure(const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error("DensityState::pure: zero vector");
  const Vector u = psi / n;
  return DensityState(u * u.adjoint());
}

DensityState DensityState::maximally_mixed(int dim) {
  return DensityState(Operator::Identity(dim, dim) / double(dim));
}

DensityState DensityState::basis_state(int dim, int index) { return pure(basis_vector(dim, index)); }

Complex DensityState::expectation(const Operator& x) const {
  if (x.rows() != op_.rows() || x.cols() != op_.cols())
    throw Error("DensityState::expectation: dimension mismatch");
  return (op_ * x).trace();
}

}  // namespace qrf
