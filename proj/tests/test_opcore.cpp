#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qrf/opcore.hpp"

using namespace qrf;

TEST_CASE("tensor product of identities and spectra") {
  CHECK((tensor_product(identity(2), identity(3)) - identity(6)).norm() == 0.0);
  const HermitianEig e = hermitian_eig(tensor_product(pauli_z(), identity(2)));
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(-1.0));
  CHECK(e.values(2) == doctest::Approx(1.0));
  CHECK(e.values(3) == doctest::Approx(1.0));
}

TEST_CASE("tensor product mixed-product rule against loop oracle") {
  const Operator lhs = tensor_product(pauli_x(), pauli_x()) * tensor_product(pauli_z(), pauli_z());
  const Operator xz = oracle::matmul(pauli_x(), pauli_z());
  CHECK((lhs - oracle::kron(xz, xz)).norm() < 1e-14);

  std::mt19937_64 rng(1);
  const Operator a = oracle::random_matrix(2, 2, rng), b = oracle::random_matrix(3, 3, rng);
  CHECK((tensor_product(a, b) - oracle::kron(a, b)).norm() < 1e-13);
}

TEST_CASE("partial trace examples") {
  CHECK((partial_trace(identity(4), 2, 2, Side::second) - 2.0 * identity(2)).norm() < 1e-15);
  CHECK(partial_trace(tensor_product(pauli_z(), pauli_z()), 2, 2, Side::second).norm() < 1e-15);

  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const Operator rho = bell * bell.adjoint();
  CHECK((partial_trace(rho, 2, 2, Side::second) - 0.5 * identity(2)).norm() < 1e-15);
  CHECK((partial_trace(rho, 2, 2, Side::first) - 0.5 * identity(2)).norm() < 1e-15);

  CHECK_THROWS_WITH_AS(partial_trace(identity(5), 2, 2, Side::second), "partial_trace: incompatible factor dimensions",
                       Error);
}

TEST_CASE("partial trace of products, random") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const Operator x = oracle::random_matrix(3, 3, rng), y = oracle::random_matrix(4, 4, rng);
    const Operator xy = tensor_product(x, y);
    CHECK((partial_trace(xy, 3, 4, Side::second) - y.trace() * x).norm() < 1e-10);
    CHECK((partial_trace(xy, 3, 4, Side::first) - x.trace() * y).norm() < 1e-10);
    CHECK(std::abs(partial_trace(xy, 3, 4, Side::second).trace() - xy.trace()) < 1e-10);
  }
}

TEST_CASE("swap exchanges tensor factors") {
  std::mt19937_64 rng(3);
  const Operator a = oracle::random_matrix(2, 2, rng), b = oracle::random_matrix(3, 3, rng);
  CHECK((swap_factors(tensor_product(a, b), 2, 3) - tensor_product(b, a)).norm() < 1e-12);
  CHECK(is_unitary(swap_operator(2, 3)));
}

TEST_CASE("hermitian eigendecomposition") {
  const HermitianEig z = hermitian_eig(pauli_z());
  CHECK(z.values(0) == doctest::Approx(-1.0));
  CHECK(z.values(1) == doctest::Approx(1.0));

  const HermitianEig x = hermitian_eig(pauli_x());
  const double r = 1.0 / std::sqrt(2.0);
  Vector minus(2), plus(2);
  minus << r, -r;
  plus << r, r;
  CHECK((x.vectors.col(0) - minus).norm() < 1e-12);
  CHECK((x.vectors.col(1) - plus).norm() < 1e-12);

  const HermitianEig one = hermitian_eig(identity(3));
  CHECK((one.values - RealVector::Ones(3)).norm() < 1e-15);
  CHECK(is_unitary(one.vectors, 1e-10));

  CHECK_THROWS_AS(hermitian_eig(ket_bra(2, 0, 1)), Error);
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(11);
  for (int d : {1, 2, 5, 16}) {
    const Operator h = oracle::random_hermitian(d, rng);
    const HermitianEig e = hermitian_eig(h);
    const Operator back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((back - h).norm() <= 1e-9 * h.norm());
    CHECK((e.vectors * e.vectors.adjoint() - identity(d)).norm() < 1e-10);
    for (int i = 1; i < d; ++i) CHECK(e.values(i) >= e.values(i - 1));
  }
}

TEST_CASE("degenerate eigenvalues give a reproducible basis") {
  const Operator h = tensor_product(pauli_z(), identity(3));
  const HermitianEig a = hermitian_eig(h);
  const HermitianEig b = hermitian_eig(h);
  CHECK((a.vectors - b.vectors).norm() == 0.0);
}

TEST_CASE("spectral functions") {
  const Operator e = apply_spectral_function(diag_real({0.0, 1.0}), [](double v) { return Complex(std::exp(v)); });
  CHECK((e - diag_real({1.0, std::numbers::e})).norm() < 1e-14);
  CHECK((sqrtm_psd(diag_real({4.0, 9.0})) - diag_real({2.0, 3.0})).norm() < 1e-14);

  // 20-term series truncation error at |x| = π is about π^20/20! ≈ 4e-9.
  const Operator u = expm_hermitian(pauli_z(), Complex(0.0, std::numbers::pi));
  const Operator series = oracle::exp_series(Complex(0.0, std::numbers::pi) * pauli_z(), 20);
  CHECK((u - series).norm() < 1e-8);
  CHECK((u + identity(2)).norm() < 1e-14);

  std::mt19937_64 rng(5);
  const Operator h = oracle::random_hermitian(4, rng);
  const Operator same = apply_spectral_function(h, [](double v) { return Complex(v); });
  CHECK((same - h).norm() < 1e-10 * std::max(1.0, h.norm()));
  const Operator f = apply_spectral_function(h, [](double v) { return Complex(std::sin(v), v * v); });
  CHECK(commutator(f, h).norm() < 1e-9);

  CHECK_THROWS_AS(apply_spectral_function(diag_real({0.0, 1.0}), [](double v) { return Complex(1.0 / v); }), Error);
}

TEST_CASE("unitaries from spectral calculus stay unitary") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    const Operator h = oracle::random_hermitian(6, rng);
    const Operator u = expm_hermitian(h, Complex(0.0, 0.37 * (k + 1)));
    CHECK((u * u.adjoint() - identity(6)).norm() < 1e-10);
  }
}

TEST_CASE("HS inner product is conjugate symmetric and positive") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) {
    const Operator a = oracle::random_matrix(3, 3, rng), b = oracle::random_matrix(3, 3, rng);
    CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-12);
    CHECK(hs_inner(a, a).real() > 0.0);
    CHECK(std::abs(hs_inner(a, a).imag()) < 1e-12);
    CHECK(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()) < 1e-12);
  }
}

TEST_CASE("vec and unvec round trip") {
  std::mt19937_64 rng(17);
  const Operator a = oracle::random_matrix(4, 4, rng), b = oracle::random_matrix(4, 4, rng);
  CHECK((unvec(vec(a), 4) - a).norm() == 0.0);
  // vec(a b) = (1 ⊗ a) vec(b)
  CHECK((vec(a * b) - tensor_product(identity(4), a) * vec(b)).norm() < 1e-12);
}

TEST_CASE("density states validate their invariants") {
  CHECK_NOTHROW(DensityState::maximally_mixed(3));
  CHECK_NOTHROW(DensityState(diag_real({0.25, 0.75})));
  CHECK_THROWS_AS(DensityState(diag_real({0.5, 0.6})), Error);
  CHECK_THROWS_AS(DensityState(diag_real({1.5, -0.5})), Error);
  CHECK_THROWS_AS(DensityState(ket_bra(2, 0, 1) + diag_real({0.5, 0.5})), Error);
  const DensityState s = DensityState::basis_state(2, 0);
  CHECK(std::abs(s.expectation(pauli_z()) - 1.0) < 1e-15);
}
