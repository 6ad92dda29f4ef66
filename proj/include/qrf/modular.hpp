#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrf/vnalg.hpp"

namespace qrf {

// Antilinear maps are stored as a matrix M acting after entrywise complex
// conjugation: ψ ↦ M·conj(ψ). Composition: (A∘C)(B∘C) = A·conj(B) (linear).

/// Direction of the modular flow. paper: σ_t(x) = Δ^{it} x Δ^{−it}, which for
/// a KMS state at β with respect to α is α(−βt). physics: the reverse flow
/// Δ^{−it} x Δ^{it} = α(βt).
enum class KmsSign { paper, physics };
const char* to_string(KmsSign sign);

struct ModularData {
  OperatorAlgebra algebra;
  Vector omega;
  Operator s_matrix;  // S ψ = s_matrix · conj(ψ)
  Operator j_matrix;  // J ψ = j_matrix · conj(ψ)
  Operator delta;     // Δ = S*S, positive
};

/// Tomita data for a cyclic and separating unit vector. The algebra must
/// have dimension equal to the ambient dimension for both to hold.
ModularData modular_data(const OperatorAlgebra& algebra, const Vector& omega);

/// σ_t(x) for x in the algebra span.
Operator modular_flow(const ModularData& md, const Operator& x, double t, KmsSign sign = KmsSign::paper);

/// J x J as a linear map: j_matrix · conj(x) · conj(j_matrix).
Operator modular_conjugate(const ModularData& md, const Operator& x);

struct ModularDefects {
  double s_on_basis = 0.0;         // max ‖S xΩ − x†Ω‖
  double polar = 0.0;              // ‖S − JΔ^{1/2}‖
  double j_involution = 0.0;       // ‖J·conj(J) − 1‖
  double j_unitary = 0.0;          // ‖J†J − 1‖
  double delta_min_eigenvalue = 0.0;
  double flow_invariance = 0.0;    // max_t span distance of Δ^{it}AΔ^{−it} from A
  double commutant = 0.0;          // span distance of JAJ from A′
  double j_omega = 0.0;            // ‖JΩ − Ω‖
  double delta_omega = 0.0;        // ‖ΔΩ − Ω‖
};
/// Default t grid {±0.3, ±1, ±2.7}.
ModularDefects modular_defects(const ModularData& md, const std::vector<double>& t_grid = {});

/// A = M_d ⊗ 1 on ℂ^d ⊗ ℂ^d with Ω the row-major vector of ρ^{1/2}, so that
/// ⟨Ω, (x ⊗ 1)Ω⟩ = tr(ρx). ρ must be faithful (λ_min ≥ 1e-12·λ_max).
std::pair<OperatorAlgebra, Vector> gns_doubling(const DensityState& rho);

/// e^{−βH}/tr e^{−βH}.
DensityState gibbs_state(const Operator& h, double beta);

struct KmsPairResidual {
  std::string label;
  double residual = 0.0;  // max over the grid of |F(t + iβ) − ω(α(t, x) y)|
};

struct KmsReport {
  std::vector<KmsPairResidual> pairs;
  double residual = 0.0;
  std::optional<double> geometric_flow_defect;  // max ‖σ_t(x ⊗ 1) − α(∓βt, x) ⊗ 1‖
  KmsSign sign = KmsSign::paper;
  bool passed(double tol = 1e-9) const;
};

struct KmsPair {
  std::string label;
  Operator x, y;
};

/// Default grid includes 0, π/2 and π.
std::vector<double> default_kms_grid();

/// KMS boundary residuals for α_t = Ad e^{iHt}. F is continued exactly in the
/// eigenbasis of H. When geometric_check is set and ω is faithful, the modular
/// flow of the GNS doubling is compared with α.
KmsReport kms_check(const DensityState& omega, const Operator& h, double beta, const std::vector<KmsPair>& pairs,
                    const std::vector<double>& t_grid, bool geometric_check = false, KmsSign sign = KmsSign::paper);

}  // namespace qrf
