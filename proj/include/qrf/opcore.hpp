#pragma once

// Dense complex linear algebra used by every other module: operators,
// tensor products, partial traces and Hermitian spectral calculus.

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrf {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default relative tolerance (Frobenius norm) for arithmetic identities.
inline constexpr double kDefaultTol = 1e-9;

enum class Side { first, second };

// ---------------------------------------------------------------------------
// Small constructors
// ---------------------------------------------------------------------------

Operator identity(int dim);
Operator zeros(int dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator ket_bra(int dim, int row, int col);
Operator diag(const std::vector<Complex>& entries);
Operator diag_real(const std::vector<double>& entries);
Vector basis_vector(int dim, int index);

// ---------------------------------------------------------------------------
// Norms and predicates
// ---------------------------------------------------------------------------

Operator dagger(const Operator& x);
Complex hs_inner(const Operator& a, const Operator& b);  // tr(a† b)
double frobenius(const Operator& x);
double operator_norm(const Operator& x);  // largest singular value
bool all_finite(const Operator& x);
bool is_square(const Operator& x);
bool is_hermitian(const Operator& x, double tol = 1e-10);
bool is_unitary(const Operator& x, double tol = kDefaultTol);
bool is_projection(const Operator& x, double tol = 1e-8);
Operator commutator(const Operator& a, const Operator& b);

/// Relative distance ‖a − b‖_F / max(1, ‖a‖_F, ‖b‖_F).
double relative_distance(const Operator& a, const Operator& b);

/// Throws unless x is square, finite and non-empty.
void require_operator(const Operator& x, const std::string& what);

// ---------------------------------------------------------------------------
// Tensor structure
// ---------------------------------------------------------------------------

/// Kronecker product a ⊗ b, index (i·dim(b) + j).
Operator tensor_product(const Operator& a, const Operator& b);
Operator tensor_product(const std::vector<Operator>& factors);
Vector tensor_product(const Vector& a, const Vector& b);

/// Traces out one factor of x acting on ℂ^{d1} ⊗ ℂ^{d2}.
Operator partial_trace(const Operator& x, int d1, int d2, Side side);

/// Exchanges the factors: result acts on ℂ^{d2} ⊗ ℂ^{d1}.
Operator swap_factors(const Operator& x, int d1, int d2);

/// Permutation unitary mapping ℂ^{d1}⊗ℂ^{d2} → ℂ^{d2}⊗ℂ^{d1}.
Operator swap_operator(int d1, int d2);

// ---------------------------------------------------------------------------
// Spectral calculus
// ---------------------------------------------------------------------------

struct HermitianEig {
  RealVector values;  // ascending
  Operator vectors;   // columns, unitary
};

/// Eigendecomposition of a Hermitian operator. Eigenvectors are phase
/// normalised (first component with |v_i| > 1e-12 made real positive) and
/// ties inside a degenerate cluster are ordered by that real part.
HermitianEig hermitian_eig(const Operator& x, double herm_tol = 1e-10);

using SpectralFunction = std::function<Complex(double)>;

/// f(x) = V diag(f(λ)) V†. Throws if f is non-finite on the spectrum.
Operator apply_spectral_function(const Operator& x, const SpectralFunction& f);

Operator sqrtm_psd(const Operator& x);
Operator expm_hermitian(const Operator& h, Complex scale);  // exp(scale·h)

// ---------------------------------------------------------------------------
// Vectorisation helpers
// ---------------------------------------------------------------------------

/// Column-major flattening of an operator into a d²-vector.
Vector vec(const Operator& x);
Operator unvec(const Vector& v, int dim);

// ---------------------------------------------------------------------------
// Density states
// ---------------------------------------------------------------------------

/// Positive, unit-trace operator. Construction validates the invariants.
class DensityState {
 public:
  explicit DensityState(Operator op, double tol = 1e-10);

  static DensityState pure(const Vector& psi);
  static DensityState maximally_mixed(int dim);
  static DensityState basis_state(int dim, int index);

  const Operator& op() const { return op_; }
  int dim() const { return static_cast<int>(op_.rows()); }
  Complex expectation(const Operator& x) const;  // tr(ρ x)

 private:
  Operator op_;
};

}  // namespace qrf
