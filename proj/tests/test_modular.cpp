#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qrf/modular.hpp"

using namespace qrf;

namespace {

ModularData doubled(const std::vector<double>& p) {
  const auto [alg, omega] = gns_doubling(DensityState(diag_real(p)));
  return modular_data(alg, omega);
}

// F(z) = ω(y e^{iHz} x e^{−iHz}) by truncated power series in complex z.
oracle::C continued(const Operator& rho, const Operator& h, const Operator& x, const Operator& y, oracle::C z) {
  const oracle::M u = oracle::exp_series(oracle::C(0, 1) * z * h, 60);
  const oracle::M ui = oracle::exp_series(oracle::C(0, -1) * z * h, 60);
  return oracle::matmul(rho, oracle::matmul(y, oracle::matmul(u, oracle::matmul(x, ui)))).trace();
}

}  // namespace

TEST_CASE("modular data of the doubled qubit") {
  const ModularData md = doubled({2.0 / 3.0, 1.0 / 3.0});
  std::vector<double> ev(md.delta.rows());
  const HermitianEig e = hermitian_eig(md.delta, 1e-9);
  for (int i = 0; i < 4; ++i) ev[i] = e.values(i);
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ev[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ev[3] == doctest::Approx(2.0).epsilon(1e-10));
  // Δ|ij⟩ = (p_i/p_j)|ij⟩.
  const double p[2] = {2.0 / 3.0, 1.0 / 3.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Vector b = basis_vector(4, 2 * i + j);
      CHECK((md.delta * b - (p[i] / p[j]) * b).norm() < 1e-10);
    }

  const ModularDefects d = modular_defects(md);
  CHECK(d.s_on_basis < 1e-9);
  CHECK(d.polar < 1e-9);
  CHECK(d.j_involution < 1e-9);
  CHECK(d.j_unitary < 1e-9);
  CHECK(d.delta_min_eigenvalue > 0);
  CHECK(d.flow_invariance <= 1e-7);
  CHECK(d.commutant <= 1e-7);
  CHECK(d.j_omega < 1e-10);
  CHECK(d.delta_omega < 1e-10);
}

TEST_CASE("tracial state has trivial modular data") {
  const ModularData md = doubled({0.5, 0.5});
  CHECK((md.delta - identity(4)).norm() < 1e-10);
  CHECK((md.j_matrix - swap_operator(2, 2)).norm() < 1e-10);
  std::mt19937_64 rng(71);
  const Operator x = tensor_product(Operator(oracle::random_matrix(2, 2, rng)), identity(2));
  CHECK((modular_flow(md, x, 0.8) - x).norm() < 1e-10);
}

TEST_CASE("modular data refuses vectors that are not cyclic and separating") {
  Vector omega(2);
  omega << 1.0, 0.0;
  CHECK_THROWS_WITH_AS(modular_data(OperatorAlgebra::full(2), omega), "modular data: Ω is not separating for the algebra",
                       Error);
  Vector product = Vector::Zero(4);
  product(0) = 1.0;
  const OperatorAlgebra a = tensor_algebra(OperatorAlgebra::full(2), OperatorAlgebra::scalars(2));
  CHECK_THROWS_WITH_AS(modular_data(a, product), "modular data: Ω is not cyclic for the algebra", Error);
  CHECK_THROWS_AS(gns_doubling(DensityState(diag_real({1.0, 0.0}))), Error);
}

TEST_CASE("modular flow") {
  const ModularData md = doubled({2.0 / 3.0, 1.0 / 3.0});
  CHECK((modular_flow(md, identity(4), 1.3) - identity(4)).norm() < 1e-12);
  const Operator x = tensor_product(ket_bra(2, 0, 1), identity(2));
  for (double t : {-1.1, 0.4, 2.0}) {
    const Complex phase = std::exp(Complex(0.0, t * std::log(2.0)));
    CHECK((modular_flow(md, x, t) - phase * x).norm() < 1e-10);
    CHECK((modular_flow(md, x, t, KmsSign::physics) - std::conj(phase) * x).norm() < 1e-10);
  }
  CHECK((modular_flow(md, x, 0.0) - x).norm() < 1e-14);
  CHECK_THROWS_WITH_AS(modular_flow(md, tensor_product(identity(2), pauli_x()), 0.5),
                       "modular_flow: operator outside the algebra", Error);
}

TEST_CASE("Tomita identities on random faithful states and algebras") {
  std::mt19937_64 rng(73);
  for (int k = 0; k < 5; ++k) {
    const auto [alg, omega] = gns_doubling(DensityState(oracle::random_density(3, rng)));
    const ModularData md = modular_data(alg, omega);
    const ModularDefects d = modular_defects(md);
    CHECK(d.s_on_basis < 1e-9);
    CHECK(d.polar < 1e-9);
    CHECK(d.j_involution < 1e-9);
    CHECK(d.flow_invariance <= 1e-7);
    CHECK(d.commutant <= 1e-7);
    CHECK(d.j_omega < 1e-10);
    CHECK(d.delta_omega < 1e-10);

    const Operator x = random_element(alg, rng);
    CHECK((modular_flow(md, modular_flow(md, x, 0.4), 0.9) - modular_flow(md, x, 1.3)).norm() < 1e-9);
  }
  // (M₂ ⊗ 1₂) ⊕ ℂ on ℂ⁵ with a generic vector.
  std::vector<Operator> gens;
  for (const auto& p : {pauli_x(), pauli_z()}) {
    Operator g = zeros(5);
    g.topLeftCorner(4, 4) = tensor_product(p, identity(2));
    gens.push_back(g);
  }
  const OperatorAlgebra a = generate_algebra(gens, 5);
  REQUIRE(a.dimension() == 5);
  Vector omega = oracle::random_matrix(5, 1, rng);
  omega.normalize();
  const ModularDefects d = modular_defects(modular_data(a, omega));
  CHECK(d.s_on_basis < 1e-9);
  CHECK(d.polar < 1e-9);
  CHECK(d.flow_invariance <= 1e-7);
  CHECK(d.commutant <= 1e-7);
}

TEST_CASE("Gibbs states") {
  const DensityState g = gibbs_state(diag_real({0, 1}), 1.0);
  const double z = 1 + std::exp(-1.0);
  CHECK((g.op() - diag_real({1 / z, std::exp(-1.0) / z})).norm() < 1e-15);
  CHECK((gibbs_state(zeros(3), 2.0).op() - identity(3) / 3.0).norm() < 1e-15);

  const DensityState s = gibbs_state(pauli_z(), 2.0);
  const oracle::M unnorm = oracle::exp_series(-2.0 * oracle::M(pauli_z()), 40);
  CHECK((s.op() - unnorm / unnorm.trace()).norm() < 1e-12);
  CHECK(commutator(s.op(), pauli_z()).norm() < 1e-14);

  CHECK_THROWS_AS(gibbs_state(pauli_z(), 0.0), Error);
  CHECK_THROWS_AS(gibbs_state(pauli_z(), 400.0), Error);
}

TEST_CASE("KMS residuals") {
  const std::vector<double> grid = default_kms_grid();
  std::mt19937_64 rng(79);
  for (int k = 0; k < 4; ++k) {
    // Unit-norm H keeps e^{−β·spread} well above the faithfulness floor.
    Operator h = oracle::random_hermitian(3, rng);
    h /= operator_norm(h);
    const double beta = 0.5 + 0.5 * k;
    std::vector<KmsPair> pairs;
    for (int p = 0; p < 3; ++p)
      pairs.push_back({"p" + std::to_string(p), oracle::random_matrix(3, 3, rng), oracle::random_matrix(3, 3, rng)});
    const KmsReport r = kms_check(gibbs_state(h, beta), h, beta, pairs, grid, true);
    CHECK(r.residual <= 1e-9);
    REQUIRE(r.geometric_flow_defect);
    CHECK(*r.geometric_flow_defect <= 1e-8);
    CHECK(r.passed());
    const KmsReport rp = kms_check(gibbs_state(h, beta), h, beta, pairs, grid, true, KmsSign::physics);
    CHECK(*rp.geometric_flow_defect <= 1e-8);

    // A faithful state that is not the Gibbs state fails.
    const DensityState other(oracle::random_density(3, rng));
    CHECK(kms_check(other, h, beta, pairs, grid).residual >= 1e-3);
  }

  const DensityState mixed = DensityState::maximally_mixed(2);
  const KmsReport bad = kms_check(mixed, diag_real({0, 1}), 1.0, {{"sx", pauli_x(), pauli_x()}}, grid);
  CHECK(bad.residual == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
  CHECK(!bad.passed());

  // Independent continuation by power series.
  double oracle_worst = 0.0;
  for (double t : grid) {
    const oracle::C f = continued(mixed.op(), diag_real({0, 1}), pauli_x(), pauli_x(), oracle::C(t, 1.0));
    const oracle::C target = continued(mixed.op(), diag_real({0, 1}), pauli_x(), pauli_x(), t);
    // ω(α_t(x) y) for x = y = σ_x equals ω(y α_t(x)) here, so the same series serves.
    oracle_worst = std::max(oracle_worst, std::abs(f - target));
  }
  CHECK(bad.residual == doctest::Approx(oracle_worst).epsilon(1e-9));

  // Trivial dynamics: F(t + iβ) = ω(yx) against ω(xy), so only tracial
  // states or commuting pairs give a zero residual.
  const Operator x = oracle::random_matrix(2, 2, rng), y = oracle::random_matrix(2, 2, rng);
  CHECK(kms_check(mixed, zeros(2), 1.7, {{"r", x, y}}, grid).residual < 1e-12);
  const DensityState generic(oracle::random_density(2, rng));
  CHECK(kms_check(generic, zeros(2), 1.7, {{"r", x, y}}, grid).residual ==
        doctest::Approx(std::abs(generic.expectation(y * x) - generic.expectation(x * y))).epsilon(1e-9));
  CHECK(kms_check(generic, zeros(2), 1.7, {{"c", x, x * x}}, grid).residual < 1e-12);
}
