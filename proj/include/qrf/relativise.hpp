#pragma once

#include <random>
#include <string>
#include <vector>

#include "qrf/frames.hpp"
#include "qrf/symmetry.hpp"
#include "qrf/vnalg.hpp"

namespace qrf {

/// α(g, x) = U(g) x U(g)† on an algebra that the action leaves invariant.
class GroupAction {
 public:
  GroupAction(OperatorAlgebra algebra, UnitaryRep rep);

  const OperatorAlgebra& algebra() const { return algebra_; }
  const UnitaryRep& rep() const { return rep_; }
  int dim() const { return rep_.dim(); }

  Operator apply(int g, const Operator& x) const;
  Operator apply_angle(double theta, const Operator& x) const;

 private:
  OperatorAlgebra algebra_;
  UnitaryRep rep_;
};

/// max_{h∈H} ‖U(h) x U(h)† − x‖_F / max(1, ‖x‖_F) for the frame's stabiliser H.
double stabiliser_defect(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame);

/// ¥(x) on H_S ⊗ H_R: Σ_s α(g_s, x) ⊗ E({s}) over value-space cells, or the
/// exact Fourier-mode contraction for phase-POVM circle frames.
Operator relativize(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame);

/// η_σ(X) = tr₂(X (1 ⊗ σ)).
Operator restrict_to_system(const Operator& x, const DensityState& sigma);

struct ExpectedOutcome {
  Complex via_relativisation;  // (ω_S ⊗ ω_R)(¥(x))
  Complex via_sum;             // Σ_s ω_S(α(g_s, x)) ω_R(E({s})), or its circle integral
  double discrepancy() const { return std::abs(via_relativisation - via_sum); }
};
ExpectedOutcome expected_relative_outcome(const Operator& x, const GroupAction& action,
                                          const QuantumReferenceFrame& frame, const DensityState& omega_s,
                                          const DensityState& omega_r);

/// ‖η_{σ_n}(¥(x)) − x‖ (operator norm) for each state.
std::vector<double> localization_limit(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame,
                                       const std::vector<DensityState>& states);

struct RelativisationReport {
  double unitality = 0.0;         // ‖¥(1) − 1‖
  double adjoint = 0.0;           // max ‖¥(x†) − ¥(x)†‖
  double min_eigenvalue = 0.0;    // min over positive inputs of λ_min(¥(x)); ≥ −1e-9 expected
  double cp_min_eigenvalue = 0.0; // same for id_k ⊗ ¥ on positive block inputs
  double invariance = 0.0;        // max ‖[¥(x), U_S(g) ⊗ U_R(g)]‖
  double multiplicativity = 0.0;  // max ‖¥(x)¥(y) − ¥(xy)‖ (operator norm)
};

/// Property checks on `samples` random H-invariant inputs (plus the basis of the algebra).
RelativisationReport check_relativisation(const GroupAction& action, const QuantumReferenceFrame& frame, int samples,
                                          std::mt19937_64& rng, int cp_order = 2);

/// Random element of the algebra averaged over the frame's stabiliser.
Operator random_invariant_element(const GroupAction& action, const QuantumReferenceFrame& frame, std::mt19937_64& rng);

/// Measurement assignment 𝔣(s, [m]) = α(g_s, A_[m]) from per-class anchors.
class FrameAssignment {
 public:
  FrameAssignment(GroupAction action, HomogeneousSpace space, std::vector<std::string> classes,
                  std::vector<Operator> anchors);

  const std::vector<std::string>& classes() const { return classes_; }
  const Operator& anchor(int cls) const { return anchors_.at(cls); }
  Operator table(int coset, int cls) const;
  /// max ‖table(g.s, m) − α(g, table(s, m))‖_F.
  double equivariance_defect() const;
  /// Σ_s 𝔣(s, [m]) ⊗ E({s}).
  Operator measured_observable(int cls, const QuantumReferenceFrame& frame) const;

 private:
  GroupAction action_;
  HomogeneousSpace space_;
  std::vector<std::string> classes_;
  std::vector<Operator> anchors_;
};

}  // namespace qrf
