#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qrf/opcore.hpp"
#include "qrf/symmetry.hpp"

namespace qrf {

/// Probe-based measurement of a system observable: couple through the
/// scattering unitary, then measure B on the probe prepared in σ.
class MeasurementScheme {
 public:
  MeasurementScheme(int system_dim, int probe_dim, Operator scattering, DensityState probe_prep, Operator probe_obs);

  int system_dim() const { return system_dim_; }
  int probe_dim() const { return probe_dim_; }
  const Operator& scattering() const { return scattering_; }
  const DensityState& probe_prep() const { return probe_prep_; }
  const Operator& probe_obs() const { return probe_obs_; }

  MeasurementScheme with_observable(Operator b) const;

 private:
  int system_dim_;
  int probe_dim_;
  Operator scattering_;
  DensityState probe_prep_;
  Operator probe_obs_;
};

/// ε_σ(B) = η_σ(S (1 ⊗ B) S†).
Operator induced_observable(const MeasurementScheme& s);

/// Scheme seen after acting with (U_S, U_P): S' = (U_S⊗U_P) S (U_S⊗U_P)†,
/// σ' = U_P σ U_P†, B' = U_P B U_P†.
MeasurementScheme transform_scheme(const MeasurementScheme& s, const Operator& us, const Operator& up);
MeasurementScheme transform_scheme(const MeasurementScheme& s, int g, const UnitaryRep& system_rep,
                                   const UnitaryRep& probe_rep);
MeasurementScheme transform_scheme_angle(const MeasurementScheme& s, double theta, const UnitaryRep& system_rep,
                                         const UnitaryRep& probe_rep);

/// Replaces transform_scheme inside verify_equivariance (regression fixtures).
using SchemeTransform = std::function<MeasurementScheme(const MeasurementScheme&, const Operator& us, const Operator& up)>;

struct EquivarianceReport {
  double defect = 0.0;  // max_g ‖ε'(g) − U_S(g) ε U_S(g)†‖ (operator norm)
  int worst_element = 0;
  int elements_checked = 0;
  bool passed(double tol = 1e-9) const { return defect <= tol; }
};

/// Every element of a finite group; circle groups on 16 equally spaced angles.
EquivarianceReport verify_equivariance(const MeasurementScheme& s, const UnitaryRep& system_rep,
                                       const UnitaryRep& probe_rep, const SchemeTransform& transform = {});

/// max ‖[S, ζ ⊗ ξ]‖ over supplied gauge pairs (ζ on the system, ξ on the probe).
double gauge_defect(const MeasurementScheme& s, const std::vector<std::pair<Operator, Operator>>& gauge);

/// Named two-qubit couplings with the system as the first factor.
Operator cnot_system_control();

}  // namespace qrf
