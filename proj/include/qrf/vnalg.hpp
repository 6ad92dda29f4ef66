#pragma once

// Finite-dimensional von Neumann algebras represented by Hilbert–Schmidt
// orthonormal bases: closure, commutant, centre, block decomposition.

#include <cstdint>
#include <vector>

#include "qrf/opcore.hpp"

namespace qrf {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Incremental HS Gram–Schmidt. Candidates whose residual after projection
/// falls below drop·max(1, ‖x‖_F) are ignored.
class SpanBuilder {
 public:
  explicit SpanBuilder(int ambient_dim, double drop_threshold = 1e-9);

  /// Returns true if x contributed a new direction.
  bool add(const Operator& x);
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<Operator>& basis() const { return basis_; }
  int ambient_dim() const { return dim_; }

 private:
  int dim_;
  double drop_;
  std::vector<Operator> basis_;
};

class OperatorAlgebra {
 public:
  OperatorAlgebra() = default;
  OperatorAlgebra(int ambient_dim, std::vector<Operator> orthonormal_basis, bool unital);

  /// Orthonormalises an arbitrary spanning list (no closure is performed).
  static OperatorAlgebra from_span(int ambient_dim, const std::vector<Operator>& ops);
  static OperatorAlgebra scalars(int ambient_dim);
  static OperatorAlgebra full(int ambient_dim);

  int ambient_dim() const { return dim_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<Operator>& basis() const { return basis_; }
  bool unital() const { return unital_; }

  /// Columns are vec(b_k); orthonormal.
  const Eigen::MatrixXcd& frame() const { return frame_; }

  Operator project(const Operator& x) const;
  /// ‖x − P(x)‖_F / max(1, ‖x‖_F).
  double distance_to_span(const Operator& x) const;
  bool contains(const Operator& x, double tol = 1e-8) const;

 private:
  int dim_ = 0;
  std::vector<Operator> basis_;
  bool unital_ = false;
  Eigen::MatrixXcd frame_;
};

/// Defects of the OperatorAlgebra invariants (all should be ~0).
struct AlgebraDefects {
  double orthonormality = 0.0;
  double adjoint_closure = 0.0;
  double product_closure = 0.0;
  double identity = 0.0;  // 0 when the algebra is not flagged unital
};
AlgebraDefects algebra_defects(const OperatorAlgebra& alg);

/// Smallest unital *-algebra containing the generators.
OperatorAlgebra generate_algebra(const std::vector<Operator>& generators, int ambient_dim);

OperatorAlgebra commutant(const OperatorAlgebra& alg);
/// Commutant of an arbitrary set of operators (not necessarily an algebra).
OperatorAlgebra commutant_of(const std::vector<Operator>& ops, int ambient_dim);

OperatorAlgebra centre(const OperatorAlgebra& alg);
bool is_factor(const OperatorAlgebra& alg);

/// Intersection of the spans of a and b.
OperatorAlgebra span_intersection(const OperatorAlgebra& a, const OperatorAlgebra& b, double tol = 1e-8);

/// sup over the basis of `from` of the distance to span(to).
double one_sided_span_distance(const OperatorAlgebra& from, const OperatorAlgebra& to);
/// Symmetric span distance; "same algebra" iff ≤ 1e-7.
double span_distance(const OperatorAlgebra& a, const OperatorAlgebra& b);

struct Block {
  int size = 0;          // n_i: matrix block size
  int multiplicity = 0;  // m_i: commutant multiplicity
  friend bool operator==(const Block&, const Block&) = default;
};

struct BlockStructure {
  std::vector<Block> blocks;  // sorted by (n, m) ascending
  Operator change_of_basis;   // unitary; columns block-ordered
  std::uint64_t seed = kDefaultSeed;
  int retries = 0;
};

/// Decomposition ⊕ M_{n_i} ⊗ 1_{m_i} of a unital algebra.
BlockStructure decompose(const OperatorAlgebra& alg, std::uint64_t seed = kDefaultSeed);

/// max over basis elements of the distance of C† b C from ⊕ M_n ⊗ 1_m form.
double block_structure_defect(const OperatorAlgebra& alg, const BlockStructure& bs);

/// Algebra generated by {a ⊗ b}: basis is the Kronecker product of the bases.
OperatorAlgebra tensor_algebra(const OperatorAlgebra& a, const OperatorAlgebra& b);

/// tr(x)/dim, the normalised ambient trace.
Complex normalised_trace(const Operator& x);

/// Random element of the algebra with standard complex Gaussian coordinates.
template <class Rng>
Operator random_element(const OperatorAlgebra& alg, Rng& rng);

}  // namespace qrf

#include <random>

namespace qrf {
template <class Rng>
Operator random_element(const OperatorAlgebra& alg, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Operator x = Operator::Zero(alg.ambient_dim(), alg.ambient_dim());
  for (const auto& b : alg.basis()) {
    const double re = n01(rng);
    const double im = n01(rng);
    x += Complex(re, im) * b;
  }
  return x;
}
}  // namespace qrf
