#include "qrf/scheme.hpp"

#include <numbers>

#include "qrf/relativise.hpp"

namespace qrf {

MeasurementScheme::MeasurementScheme(int system_dim, int probe_dim, Operator scattering, DensityState probe_prep,
                                     Operator probe_obs)
    : system_dim_(system_dim),
      probe_dim_(probe_dim),
      scattering_(std::move(scattering)),
      probe_prep_(std::move(probe_prep)),
      probe_obs_(std::move(probe_obs)) {
  if (system_dim_ < 1 || probe_dim_ < 1) throw Error("measurement scheme: dimensions must be positive");
  const int n = system_dim_ * probe_dim_;
  if (scattering_.rows() != n || scattering_.cols() != n)
    throw Error("measurement scheme: scattering must act on the system ⊗ probe space");
  if (!is_unitary(scattering_, 1e-9)) throw Error("measurement scheme: scattering is not unitary");
  if (probe_prep_.dim() != probe_dim_) throw Error("measurement scheme: probe state has the wrong dimension");
  if (probe_obs_.rows() != probe_dim_ || probe_obs_.cols() != probe_dim_)
    throw Error("measurement scheme: probe observable has the wrong dimension");
  if (!is_hermitian(probe_obs_, 1e-9)) throw Error("measurement scheme: probe observable is not Hermitian");
}

MeasurementScheme MeasurementScheme::with_observable(Operator b) const {
  return MeasurementScheme(system_dim_, probe_dim_, scattering_, probe_prep_, std::move(b));
}

Operator induced_observable(const MeasurementScheme& s) {
  const Operator lifted = tensor_product(identity(s.system_dim()), s.probe_obs());
  const Operator e = restrict_to_system(s.scattering() * lifted * s.scattering().adjoint(), s.probe_prep());
  return 0.5 * (e + e.adjoint());
}

MeasurementScheme transform_scheme(const MeasurementScheme& s, const Operator& us, const Operator& up) {
  if (us.rows() != s.system_dim() || up.rows() != s.probe_dim())
    throw Error("transform_scheme: representation dimensions do not match the scheme");
  const Operator v = tensor_product(us, up);
  const Operator sigma = up * s.probe_prep().op() * up.adjoint();
  return MeasurementScheme(s.system_dim(), s.probe_dim(), v * s.scattering() * v.adjoint(),
                           DensityState(0.5 * (sigma + sigma.adjoint())), up * s.probe_obs() * up.adjoint());
}

namespace {

void require_matching(const UnitaryRep& system_rep, const UnitaryRep& probe_rep) {
  if (!system_rep.group().compatible_with(probe_rep.group()))
    throw Error("transform_scheme: system and probe representations belong to different groups");
}

}  // namespace

MeasurementScheme transform_scheme(const MeasurementScheme& s, int g, const UnitaryRep& system_rep,
                                   const UnitaryRep& probe_rep) {
  require_matching(system_rep, probe_rep);
  return transform_scheme(s, system_rep.at(g), probe_rep.at(g));
}

MeasurementScheme transform_scheme_angle(const MeasurementScheme& s, double theta, const UnitaryRep& system_rep,
                                         const UnitaryRep& probe_rep) {
  require_matching(system_rep, probe_rep);
  return transform_scheme(s, system_rep.at_angle(theta), probe_rep.at_angle(theta));
}

EquivarianceReport verify_equivariance(const MeasurementScheme& s, const UnitaryRep& system_rep,
                                       const UnitaryRep& probe_rep, const SchemeTransform& transform) {
  require_matching(system_rep, probe_rep);
  const SchemeTransform apply = transform ? transform : SchemeTransform([](const MeasurementScheme& x, const Operator& us,
                                                                           const Operator& up) {
    return transform_scheme(x, us, up);
  });
  const Operator base = induced_observable(s);
  EquivarianceReport r;
  const bool finite = system_rep.group().is_finite();
  const int count = finite ? system_rep.group().order() : 16;
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / count;
    const Operator us = finite ? system_rep.at(k) : system_rep.at_angle(theta);
    const Operator up = finite ? probe_rep.at(k) : probe_rep.at_angle(theta);
    const double d = operator_norm(induced_observable(apply(s, us, up)) - us * base * us.adjoint());
    if (d > r.defect) {
      r.defect = d;
      r.worst_element = k;
    }
  }
  r.elements_checked = count;
  return r;
}

double gauge_defect(const MeasurementScheme& s, const std::vector<std::pair<Operator, Operator>>& gauge) {
  double worst = 0.0;
  for (const auto& [zeta, xi] : gauge) {
    if (zeta.rows() != s.system_dim() || xi.rows() != s.probe_dim())
      throw Error("gauge_defect: gauge unitary has the wrong dimension");
    worst = std::max(worst, operator_norm(commutator(s.scattering(), tensor_product(zeta, xi))));
  }
  return worst;
}

Operator cnot_system_control() {
  return tensor_product(ket_bra(2, 0, 0), identity(2)) + tensor_product(ket_bra(2, 1, 1), pauli_x());
}

}  // namespace qrf
