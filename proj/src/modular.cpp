#include "qrf/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

namespace qrf {

namespace {

int numerical_rank(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * s(0)) ++r;
  return r;
}

Operator delta_power(const Operator& delta, Complex exponent) {
  return apply_spectral_function(delta, [exponent](double l) { return std::exp(exponent * std::log(l)); });
}

void require_faithful(const DensityState& rho, const char* who) {
  const HermitianEig e = hermitian_eig(rho.op(), 1e-9);
  if (e.values.minCoeff() < 1e-12 * e.values.maxCoeff())
    throw Error(std::string(who) + ": state is not faithful (min eigenvalue below 1e-12·max)");
}

}  // namespace

const char* to_string(KmsSign sign) { return sign == KmsSign::paper ? "paper" : "physics"; }

ModularData modular_data(const OperatorAlgebra& algebra, const Vector& omega) {
  const int n = algebra.ambient_dim();
  if (omega.size() != n) throw Error("modular data: vector dimension does not match the algebra");
  if (std::abs(omega.norm() - 1.0) > 1e-9) throw Error("modular data: Ω must be a unit vector");
  const int k = algebra.dimension();
  Eigen::MatrixXcd v(n, k), w(n, k);
  for (int i = 0; i < k; ++i) {
    v.col(i) = algebra.basis()[i] * omega;
    w.col(i) = algebra.basis()[i].adjoint() * omega;
  }
  const int rank = numerical_rank(v);
  if (rank < n) throw Error("modular data: Ω is not cyclic for the algebra");
  if (rank < k) throw Error("modular data: Ω is not separating for the algebra");

  ModularData md{algebra, omega, {}, {}, {}};
  // S(Σ c_k b_kΩ) = Σ conj(c_k) b_k†Ω.
  md.s_matrix = w * v.conjugate().inverse();
  const Operator d = md.s_matrix.transpose() * md.s_matrix.conjugate();
  md.delta = 0.5 * (d + d.adjoint());
  const HermitianEig de = hermitian_eig(md.delta, 1e-8);
  if (de.values.minCoeff() <= 0.0) throw Error("modular data: Δ is not positive definite");
  md.j_matrix = md.s_matrix * delta_power(md.delta, -0.5).conjugate();
  return md;
}

Operator modular_flow(const ModularData& md, const Operator& x, double t, KmsSign sign) {
  if (x.rows() != md.algebra.ambient_dim() || x.cols() != md.algebra.ambient_dim())
    throw Error("modular_flow: dimension mismatch");
  if (md.algebra.distance_to_span(x) > 1e-8 * std::max(1.0, x.norm()))
    throw Error("modular_flow: operator outside the algebra");
  const double s = sign == KmsSign::paper ? t : -t;
  const Operator u = delta_power(md.delta, Complex(0.0, s));
  return u * x * u.adjoint();
}

Operator modular_conjugate(const ModularData& md, const Operator& x) {
  return md.j_matrix * x.conjugate() * md.j_matrix.conjugate();
}

ModularDefects modular_defects(const ModularData& md, const std::vector<double>& t_grid) {
  ModularDefects d;
  const int n = md.algebra.ambient_dim();
  const Operator& s = md.s_matrix;
  const Operator& j = md.j_matrix;
  for (const auto& b : md.algebra.basis())
    d.s_on_basis = std::max(d.s_on_basis, (s * (b * md.omega).conjugate() - b.adjoint() * md.omega).norm());
  d.polar = (s - j * delta_power(md.delta, 0.5).conjugate()).norm();
  d.j_involution = (j * j.conjugate() - identity(n)).norm();
  d.j_unitary = (j.adjoint() * j - identity(n)).norm();
  d.delta_min_eigenvalue = hermitian_eig(md.delta, 1e-8).values.minCoeff();

  const std::vector<double> grid = t_grid.empty() ? std::vector<double>{-2.7, -1.0, -0.3, 0.3, 1.0, 2.7} : t_grid;
  for (double t : grid) {
    const Operator u = delta_power(md.delta, Complex(0.0, t));
    std::vector<Operator> moved;
    for (const auto& b : md.algebra.basis()) moved.push_back(u * b * u.adjoint());
    d.flow_invariance = std::max(d.flow_invariance, span_distance(OperatorAlgebra::from_span(n, moved), md.algebra));
  }
  std::vector<Operator> flipped;
  for (const auto& b : md.algebra.basis()) flipped.push_back(modular_conjugate(md, b));
  d.commutant = span_distance(OperatorAlgebra::from_span(n, flipped), commutant(md.algebra));
  d.j_omega = (j * md.omega.conjugate() - md.omega).norm();
  d.delta_omega = (md.delta * md.omega - md.omega).norm();
  return d;
}

std::pair<OperatorAlgebra, Vector> gns_doubling(const DensityState& rho) {
  require_faithful(rho, "gns_doubling");
  const int d = rho.dim();
  const Operator root = sqrtm_psd(rho.op());
  Vector omega(Eigen::Index(d) * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) omega(Eigen::Index(i) * d + k) = root(i, k);
  return {tensor_algebra(OperatorAlgebra::full(d), OperatorAlgebra::scalars(d)), omega};
}

DensityState gibbs_state(const Operator& h, double beta) {
  if (!(beta > 0.0)) throw Error("gibbs_state: β must be positive");
  const HermitianEig e = hermitian_eig(h, 1e-9);
  const double lo = e.values.minCoeff(), hi = e.values.maxCoeff();
  // Weights are shifted by the ground energy, so the only failure is the
  // smallest weight underflowing to zero.
  if (beta * (hi - lo) > 700.0)
    throw Error("gibbs_state: β·(E_max − E_min) = " + std::to_string(beta * (hi - lo)) +
                " leaves the double range; rescale H or β");
  Eigen::VectorXd w(e.values.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * (e.values(i) - lo));
  w /= w.sum();
  const Operator rho = e.vectors * w.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  return DensityState(0.5 * (rho + rho.adjoint()));
}

std::vector<double> default_kms_grid() {
  const double pi = std::numbers::pi;
  return {0.0, 0.25, 0.5, 1.0, pi / 2, 2.0, 2.5, pi};
}

bool KmsReport::passed(double tol) const {
  return residual <= tol && (!geometric_flow_defect || *geometric_flow_defect <= 1e-8);
}

KmsReport kms_check(const DensityState& omega, const Operator& h, double beta, const std::vector<KmsPair>& pairs,
                    const std::vector<double>& t_grid, bool geometric_check, KmsSign sign) {
  if (h.rows() != omega.dim()) throw Error("kms_check: state and Hamiltonian dimensions differ");
  KmsReport r;
  r.sign = sign;
  const HermitianEig e = hermitian_eig(h, 1e-9);
  const Operator& q = e.vectors;
  const Operator rho = q.adjoint() * omega.op() * q;
  const int d = omega.dim();
  for (const auto& p : pairs) {
    if (p.x.rows() != d || p.y.rows() != d) throw Error("kms_check: pair '" + p.label + "' has the wrong dimension");
    const Operator x = q.adjoint() * p.x * q;
    const Operator ry = rho * (q.adjoint() * p.y * q);
    KmsPairResidual pr{p.label, 0.0};
    for (double t : t_grid) {
      Complex f = 0.0;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const double gap = e.values(j) - e.values(k);
          f += ry(k, j) * x(j, k) * std::exp(Complex(-beta * gap, gap * t));
        }
      const Operator u = expm_hermitian(h, Complex(0.0, t));
      const Complex target = omega.expectation(u * p.x * u.adjoint() * p.y);
      pr.residual = std::max(pr.residual, std::abs(f - target));
    }
    r.residual = std::max(r.residual, pr.residual);
    r.pairs.push_back(pr);
  }

  if (geometric_check) {
    const HermitianEig oe = hermitian_eig(omega.op(), 1e-9);
    if (oe.values.minCoeff() >= 1e-12 * oe.values.maxCoeff()) {
      const auto [alg, vec] = gns_doubling(omega);
      const ModularData md = modular_data(alg, vec);
      const Operator one = identity(d);
      double worst = 0.0;
      for (double t : t_grid) {
        const double s = sign == KmsSign::paper ? -beta * t : beta * t;
        const Operator u = expm_hermitian(h, Complex(0.0, s));
        for (const auto& p : pairs) {
          const Operator lifted = tensor_product(p.x, one);
          worst = std::max(worst, (modular_flow(md, lifted, t, sign) - tensor_product(u * p.x * u.adjoint(), one)).norm());
        }
      }
      r.geometric_flow_defect = worst;
    }
  }
  return r;
}

}  // namespace qrf
