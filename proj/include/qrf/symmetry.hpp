#pragma once

#include <string>
#include <vector>

#include "qrf/opcore.hpp"
#include "qrf/vnalg.hpp"

namespace qrf {

enum class GroupKind { finite, circle };

/// A finite group given by its Cayley table, or the circle group U(1)
/// restricted to representations of bounded frequency.
class SymmetryGroup {
 public:
  /// table[a][b] = index of a·b. Validated: identity, inverses and (for
  /// |G| ≤ 64) associativity are checked exhaustively.
  static SymmetryGroup from_cayley(std::vector<std::vector<int>> table, std::vector<std::string> names = {});
  static SymmetryGroup cyclic(int n);
  static SymmetryGroup dihedral(int n);  // order 2n
  static SymmetryGroup symmetric(int n);  // permutations in lexicographic order
  static SymmetryGroup trivial() { return cyclic(1); }
  static SymmetryGroup circle(int bandwidth);
  static SymmetryGroup direct_product(const SymmetryGroup& a, const SymmetryGroup& b);

  GroupKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == GroupKind::finite; }
  int order() const;  // throws for the circle
  int bandwidth() const { return bandwidth_; }
  int identity_index() const { return identity_; }
  int multiply(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::vector<std::vector<int>>& cayley_table() const { return table_; }
  const std::vector<std::string>& names() const { return names_; }
  /// Haar weight of a single element (1/|G|).
  double haar_weight() const { return 1.0 / order(); }
  /// Modular function; identically 1 for every group representable here.
  double modular_function(int) const { return 1.0; }

  /// Same finite table, or both circles.
  bool compatible_with(const SymmetryGroup& other) const;

 private:
  GroupKind kind_ = GroupKind::finite;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::string> names_;
  int identity_ = 0;
  int bandwidth_ = 0;
};

/// Unitary representation. Finite groups: one matrix per element. Circle:
/// Hermitian generator N with integer spectrum, U(θ) = exp(iθN).
class UnitaryRep {
 public:
  UnitaryRep(SymmetryGroup group, std::vector<Operator> matrices);
  UnitaryRep(SymmetryGroup circle, Operator generator);

  static UnitaryRep trivial(const SymmetryGroup& group, int dim);

  const SymmetryGroup& group() const { return group_; }
  int dim() const { return dim_; }
  const Operator& at(int g) const;       // finite groups
  Operator at_angle(double theta) const;  // circle
  const Operator& generator() const { return generator_; }
  const std::vector<Operator>& matrices() const { return matrices_; }
  /// Largest |frequency| carried (circle only).
  int max_frequency() const { return max_frequency_; }

 private:
  SymmetryGroup group_;
  int dim_ = 0;
  std::vector<Operator> matrices_;
  Operator generator_;
  HermitianEig generator_eig_;
  int max_frequency_ = 0;
};

/// g ↦ U(g) ⊗ V(g).
UnitaryRep tensor_rep(const UnitaryRep& u, const UnitaryRep& v);

/// Left regular λ(g)|h⟩ = |gh⟩ on ℓ²(G) in the element-index basis.
UnitaryRep regular_representation(const SymmetryGroup& group);
/// Right regular ρ(g)|h⟩ = |hg⁻¹⟩.
UnitaryRep right_regular_representation(const SymmetryGroup& group);

/// Equispaced nodes used for exact circle averaging of conjugation by u, v.
int circle_quadrature_nodes(const UnitaryRep& u, const UnitaryRep& v);

/// Haar average of g ↦ u(g) x v(g)†.
Operator average_over_group(const UnitaryRep& u, const UnitaryRep& v, const Operator& x);
inline Operator average_over_group(const UnitaryRep& u, const Operator& x) { return average_over_group(u, u, x); }

/// Image of the averaging map on all of B(ℂ^d), orthonormalised.
OperatorAlgebra fixed_point_basis(const UnitaryRep& u, const UnitaryRep& v, int ambient_dim);
inline OperatorAlgebra fixed_point_basis(const UnitaryRep& u, int ambient_dim) {
  return fixed_point_basis(u, u, ambient_dim);
}
/// Fixed points of Ad u inside an invariant algebra.
OperatorAlgebra fixed_points_in(const OperatorAlgebra& alg, const UnitaryRep& u);

/// Left coset space G/H with the induced left action. For the circle only the
/// principal space (H trivial, the circle itself) exists.
class HomogeneousSpace {
 public:
  HomogeneousSpace(SymmetryGroup group, std::vector<int> subgroup);
  static HomogeneousSpace principal(const SymmetryGroup& group);

  const SymmetryGroup& group() const { return group_; }
  const std::vector<int>& subgroup() const { return subgroup_; }
  bool is_principal() const { return !group_.is_finite() || subgroup_.size() == 1; }
  int size() const { return static_cast<int>(representatives_.size()); }  // 0 for the circle
  int representative(int coset) const { return representatives_[coset]; }
  int coset_of(int g) const { return coset_of_[g]; }
  int act(int g, int coset) const { return action_[g][coset]; }

 private:
  SymmetryGroup group_;
  std::vector<int> subgroup_;
  std::vector<int> representatives_;
  std::vector<int> coset_of_;
  std::vector<std::vector<int>> action_;
};

}  // namespace qrf
