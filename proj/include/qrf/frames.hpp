#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qrf/opcore.hpp"
#include "qrf/symmetry.hpp"

namespace qrf {

/// Outcome cells: bare labels, the cosets of a homogeneous space, or a
/// partition of [0, 2π) into half-open arcs.
class ValueSpace {
 public:
  enum class Kind { outcomes, points, arcs };

  static ValueSpace outcomes(int count);
  static ValueSpace points(HomogeneousSpace space);
  /// Breakpoints 0 = b₀ < b₁ < … < b_k = 2π; cell i is [b_i, b_{i+1}).
  static ValueSpace arcs(std::vector<double> breakpoints);
  static ValueSpace uniform_arcs(int count);

  Kind kind() const { return kind_; }
  int cells() const;
  const HomogeneousSpace& space() const;  // points only
  const std::vector<double>& breakpoints() const { return breaks_; }
  std::pair<double, double> arc(int cell) const { return {breaks_[cell], breaks_[cell + 1]}; }

 private:
  Kind kind_ = Kind::outcomes;
  int count_ = 0;
  std::optional<HomogeneousSpace> space_;
  std::vector<double> breaks_;
};

class Povm {
 public:
  /// Validates 0 ≤ E ≤ 1 (±1e-9) and Σ E = 1 (1e-9).
  Povm(ValueSpace space, std::vector<Operator> effects);

  const ValueSpace& space() const { return space_; }
  const std::vector<Operator>& effects() const { return effects_; }
  const Operator& effect(int cell) const { return effects_.at(cell); }
  int dim() const { return dim_; }
  int cells() const { return static_cast<int>(effects_.size()); }

  /// E(X)E(Y) = δ_{XY} E(X) within tol for all cells.
  bool is_sharp(double tol = 1e-8) const;

  /// Phase POVMs keep their density so effects on arbitrary arcs are exact.
  const std::optional<Operator>& phase_density() const { return density_; }
  Operator effect_on_arc(double a, double b) const;

 private:
  friend Povm phase_povm(int, const Operator&, const ValueSpace&);
  ValueSpace space_;
  std::vector<Operator> effects_;
  int dim_ = 0;
  std::optional<Operator> density_;
};

/// Effects E(X)_{nm} = c_{nm}·(1/2π)∫_X e^{i(n−m)θ}dθ on arc cells.
Povm phase_povm(int dim, const Operator& c, const ValueSpace& arcs);
/// (1/2π)∫_a^b e^{ikθ} dθ in closed form.
Complex arc_fourier_integral(int k, double a, double b);

/// Largest eigenvalue of each effect (0 for a zero effect).
std::vector<double> norm1_scores(const Povm& povm);
/// max over the trial states of tr(ρ E(X)), per cell.
std::vector<double> norm1_trial_scores(const Povm& povm, const std::vector<DensityState>& trial_states);

class MarkovKernel {
 public:
  /// rows(x, y) = probability of reporting y given x; rows sum to 1 within 1e-12.
  explicit MarkovKernel(Eigen::MatrixXd rows);
  static MarkovKernel identity(int n);
  const Eigen::MatrixXd& rows() const { return rows_; }

 private:
  Eigen::MatrixXd rows_;
};

/// E′(Y) = Σ_x p(x, Y) E({x}). The result lives on `target` (bare outcomes by default).
Povm smear(const Povm& povm, const MarkovKernel& kernel, std::optional<ValueSpace> target = std::nullopt);

class QuantumReferenceFrame {
 public:
  /// Validates covariance U(g)E(X)U(g)† = E(g.X) within 1e-8.
  QuantumReferenceFrame(UnitaryRep rep, Povm povm);

  const UnitaryRep& rep() const { return rep_; }
  const Povm& povm() const { return povm_; }
  int dim() const { return rep_.dim(); }

  bool sharp() const { return povm_.is_sharp(); }
  bool principal() const;
  /// min over nonzero effects of the norm-1 score; 1 iff every effect has norm 1.
  double localisable_score() const;
  /// Finite groups: no nontrivial element acts trivially on every effect.
  /// Circle frames: not evaluated.
  std::optional<bool> complete() const;
  /// Largest covariance violation found (0 for an exactly covariant frame).
  double covariance_defect() const;

 private:
  UnitaryRep rep_;
  Povm povm_;
};

struct Dilation {
  Operator isometry;  // D × d
  Povm ambient_pvm;
  int aux_dim = 0;  // D = d_K · aux_dim
  std::optional<UnitaryRep> ambient_rep;
  bool covariant() const { return ambient_rep.has_value(); }
};

/// W = Σ_x √E({x}) ⊗ |x⟩ into ℂ^d ⊗ ℂ^k, P({x}) = 1 ⊗ |x⟩⟨x|.
Dilation naimark_dilate(const Povm& povm);

/// Finite principal frames: W = Σ_g E({e})^{1/2} U(g⁻¹) ⊗ |g⟩ into H_R ⊗ ℓ²(G),
/// intertwining U with 1 ⊗ λ.
Dilation covariant_dilate(const QuantumReferenceFrame& frame);

struct DilationDefects {
  double isometry = 0.0;        // ‖W†W − 1‖_F
  double projections = 0.0;     // max ‖P² − P‖_F
  double reconstruction = 0.0;  // max ‖W†P(X)W − E(X)‖_F
  double intertwining = 0.0;    // max ‖W U(g) − U_amb(g) W‖_F (covariant only)
};
DilationDefects dilation_defects(const Dilation& dil, const Povm& povm,
                                 const std::optional<UnitaryRep>& rep = std::nullopt);

}  // namespace qrf
