#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qrf/frames.hpp"
#include "qrf/relativise.hpp"
#include "qrf/vnalg.hpp"

namespace qrf {

// Block conventions. ℓ²(G) is ordered by group element index, and
// H ⊗ ℓ²(G) uses the index s·|G| + g. Auxiliary spaces sit between the
// system and ℓ²(G): H_S ⊗ K ⊗ ℓ²(G), matching the dilations of the frames
// module, whose ambient space is K ⊗ ℓ²(G) with K = H_R.

/// π(a) = Σ_g α(g, a) ⊗ |g⟩⟨g|.
Operator crossed_pi(const GroupAction& action, const Operator& a);
/// ρ̃(g) = 1 ⊗ ρ(g) with ρ(g)|h⟩ = |hg⁻¹⟩.
Operator crossed_translation(const GroupAction& action, int g);
/// V = Σ_g U(g) ⊗ |g⟩⟨g|, so that V(a ⊗ 1)V† = π(a).
Operator crossed_intertwiner(const GroupAction& action);

struct CrossedProductAlgebra {
  GroupAction base;
  int ambient_dim = 0;
  OperatorAlgebra algebra;
  std::vector<std::pair<std::string, Operator>> tagged_generators;
};

/// M ⋊_α G generated by π(M) ∪ ρ̃(G). Finite groups only.
CrossedProductAlgebra build_crossed_product(const GroupAction& action);

/// (M_S ⊗ B(H_R)) fixed by α_S ⊗ Ad U_R.
OperatorAlgebra invariant_algebra(const GroupAction& action, const QuantumReferenceFrame& frame);

struct CommutationReport {
  int crossed_dimension = 0;
  int fixed_point_dimension = 0;
  double span_distance = 0.0;     // M ⋊ G against (M ⊗ B(ℓ²(G)))^{α⊗Ad λ}
  double covariance = 0.0;        // max ‖ρ̃(h)π(a)ρ̃(h)† − π(α(h, a))‖
  double homomorphism = 0.0;      // max ‖π(ab) − π(a)π(b)‖, ‖π(a†) − π(a)†‖
  double v_pi = 0.0;              // max ‖V(a ⊗ 1)V† − π(a)‖
  double v_translation = 0.0;     // max ‖V(U(g) ⊗ ρ(g))V† − ρ̃(g)‖
  bool passed() const;
};
CommutationReport verify_commutation_theorem(const GroupAction& action);

/// Embedding W: H_R → K ⊗ ℓ²(G) with WU_R(g) = (1 ⊗ λ(g))W for a finite frame
/// over G/H. Principal frames use covariant_dilate; otherwise E is pulled back
/// to the principal POVM F({g}) = E({gH})/|H| first, and the ambient PVM is
/// P(c) = Σ_{g ∈ c} 1 ⊗ |g⟩⟨g|.
Dilation frame_embedding(const QuantumReferenceFrame& frame);

/// (M ⋊ G) ⊗ B(K) carried to H_S ⊗ K ⊗ ℓ²(G).
OperatorAlgebra crossed_with_auxiliary(const CrossedProductAlgebra& crossed, int aux_dim);

/// (1 ⊗ p) X (1 ⊗ p) over the algebra. p must be a projection commuting with
/// probe_rep (the representation 1 ⊗ λ on K ⊗ ℓ²(G)).
OperatorAlgebra compress_by_frame(const OperatorAlgebra& invariants, const Operator& p, const UnitaryRep& probe_rep);

struct CompressionReport {
  int compressed_dimension = 0;
  int invariant_dimension = 0;
  double span_distance = 0.0;    // W̃†(compression)W̃ against the invariant algebra
  double product_closure = 0.0;  // algebra defect of the transported compression
  bool passed() const;
};
CompressionReport verify_compression(const GroupAction& action, const QuantumReferenceFrame& frame);

/// ζ(x) = W̃† x W̃ with W̃ = (V† ⊗ 1)(1 ⊗ W), x on H_S ⊗ K ⊗ ℓ²(G).
Operator extended_relativize(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame);

}  // namespace qrf
