#pragma once

// Finite group actions and frames shared by the crossed-product tests and the
// acceptance runner.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qrf/relativise.hpp"
#include "qrf/scheme.hpp"

namespace fixtures {

using namespace qrf;

/// Permutation representation from a group action on {0, …, points−1}.
inline UnitaryRep permutation_rep(const SymmetryGroup& g, int points, const std::function<int(int, int)>& act) {
  std::vector<Operator> m;
  for (int x = 0; x < g.order(); ++x) {
    Operator u = zeros(points);
    for (int v = 0; v < points; ++v) u(act(x, v), v) = 1.0;
    m.push_back(u);
  }
  return UnitaryRep(g, m);
}

inline UnitaryRep perm3() {
  const SymmetryGroup s3 = SymmetryGroup::symmetric(3);
  return permutation_rep(s3, 3, [&](int g, int v) { return s3.names()[g][v] - '0'; });
}

/// Dihedral group of order 2n on the vertices of an n-gon.
inline UnitaryRep dihedral_vertices(int n) {
  return permutation_rep(SymmetryGroup::dihedral(n), n, [n](int g, int v) {
    const int s = g / n, k = g % n;
    const int w = (v + k) % n;
    return s ? (n - w) % n : w;
  });
}

/// ℤ_n acting on ℂ^points by the cyclic shift (points must divide n).
inline UnitaryRep cyclic_shift(int n, int points) {
  return permutation_rep(SymmetryGroup::cyclic(n), points, [points](int g, int v) { return (v + g) % points; });
}

inline OperatorAlgebra diagonal_algebra(int d) {
  std::vector<double> entries(d);
  for (int i = 0; i < d; ++i) entries[i] = i + 1.0;
  return generate_algebra({diag_real(entries)}, d);
}

struct ActionFixture {
  std::string name;
  GroupAction action;
};

/// Finite actions with |G| ≤ 12 on spaces of dimension ≤ 8.
inline std::vector<ActionFixture> finite_actions() {
  const SymmetryGroup z2 = SymmetryGroup::cyclic(2);
  std::vector<ActionFixture> out;
  out.push_back({"C, Z2 trivial", GroupAction(OperatorAlgebra::full(1), UnitaryRep::trivial(z2, 1))});
  out.push_back({"C, Z3 trivial", GroupAction(OperatorAlgebra::full(1), UnitaryRep::trivial(SymmetryGroup::cyclic(3), 1))});
  out.push_back({"M2, Z2 trivial", GroupAction(OperatorAlgebra::full(2), UnitaryRep::trivial(z2, 2))});
  out.push_back({"diag2, Z2 swap", GroupAction(diagonal_algebra(2), cyclic_shift(2, 2))});
  out.push_back({"M2, Z2 flip", GroupAction(OperatorAlgebra::full(2), cyclic_shift(2, 2))});
  out.push_back({"M3, S3 permutations", GroupAction(OperatorAlgebra::full(3), perm3())});
  out.push_back({"diag3, D3 on a triangle", GroupAction(diagonal_algebra(3), dihedral_vertices(3))});
  out.push_back({"diag4, D4 on a square", GroupAction(diagonal_algebra(4), dihedral_vertices(4))});
  out.push_back({"diag2, Z12 flip", GroupAction(diagonal_algebra(2), cyclic_shift(12, 2))});
  {
    // M₂ ⊗ 1 on ℂ² ⊗ ℂ⁴, ℤ₄ shifting the second factor.
    const UnitaryRep shift = cyclic_shift(4, 4);
    std::vector<Operator> m;
    for (int g = 0; g < 4; ++g) m.push_back(tensor_product(identity(2), shift.at(g)));
    std::vector<Operator> gens{tensor_product(pauli_x(), identity(4)), tensor_product(pauli_z(), identity(4))};
    out.push_back({"M2 x 1, Z4 on the multiplicity space",
                   GroupAction(generate_algebra(gens, 8), UnitaryRep(SymmetryGroup::cyclic(4), m))});
  }
  return out;
}

inline QuantumReferenceFrame ideal_frame(const SymmetryGroup& g) {
  std::vector<Operator> eff;
  for (int x = 0; x < g.order(); ++x) eff.push_back(ket_bra(g.order(), x, x));
  return QuantumReferenceFrame(regular_representation(g),
                               Povm(ValueSpace::points(HomogeneousSpace::principal(g)), std::move(eff)));
}

inline QuantumReferenceFrame unsharp_z2() {
  const SymmetryGroup z2 = SymmetryGroup::cyclic(2);
  return QuantumReferenceFrame(regular_representation(z2), Povm(ValueSpace::points(HomogeneousSpace::principal(z2)),
                                                                {diag_real({0.75, 0.25}), diag_real({0.25, 0.75})}));
}

/// S₃ on ℂ³ reading off where the point 2 went; stabiliser {012, 102}.
inline QuantumReferenceFrame point_frame() {
  const UnitaryRep u = perm3();
  const HomogeneousSpace space(u.group(), {0, 2});
  std::vector<Operator> eff;
  for (int c = 0; c < space.size(); ++c) {
    const int pt = u.group().names()[space.representative(c)][2] - '0';
    eff.push_back(ket_bra(3, pt, pt));
  }
  return QuantumReferenceFrame(u, Povm(ValueSpace::points(space), eff));
}

/// Unsharp ℤ₃ frame on ℂ³: E({k}) = shift^k diag(1/2, 1/3, 1/6) shift^{-k}.
inline QuantumReferenceFrame unsharp_z3() {
  const UnitaryRep u = cyclic_shift(3, 3);
  std::vector<Operator> eff;
  for (int k = 0; k < 3; ++k) eff.push_back(u.at(k) * diag_real({0.5, 1.0 / 3.0, 1.0 / 6.0}) * u.at(k).adjoint());
  return QuantumReferenceFrame(u, Povm(ValueSpace::points(HomogeneousSpace::principal(u.group())), eff));
}

struct FrameFixture {
  std::string name;
  GroupAction action;
  QuantumReferenceFrame frame;
};

inline std::vector<FrameFixture> finite_frames() {
  const SymmetryGroup z2 = SymmetryGroup::cyclic(2);
  const GroupAction flip(OperatorAlgebra::full(2), cyclic_shift(2, 2));
  std::vector<FrameFixture> out;
  out.push_back({"qubit flip, ideal Z2", flip, ideal_frame(z2)});
  out.push_back({"qubit flip, unsharp Z2", flip, unsharp_z2()});
  out.push_back({"diag2 swap, unsharp Z2", GroupAction(diagonal_algebra(2), cyclic_shift(2, 2)), unsharp_z2()});
  out.push_back({"C, ideal Z3", GroupAction(OperatorAlgebra::full(1), UnitaryRep::trivial(SymmetryGroup::cyclic(3), 1)),
                 ideal_frame(SymmetryGroup::cyclic(3))});
  out.push_back({"qutrit shift, unsharp Z3", GroupAction(OperatorAlgebra::full(3), cyclic_shift(3, 3)), unsharp_z3()});
  out.push_back({"M3 permutations, point frame", GroupAction(OperatorAlgebra::full(3), perm3()), point_frame()});
  return out;
}

inline Operator random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Operator x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = Complex(n01(rng), n01(rng));
  return 0.5 * (x + x.adjoint());
}

inline Operator random_unitary(int d, std::mt19937_64& rng) { return expm_hermitian(random_hermitian(d, rng), Complex(0, 1)); }

inline DensityState random_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Operator x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = Complex(n01(rng), n01(rng));
  const Operator rho = x * x.adjoint();
  return DensityState(rho / rho.trace().real());
}

struct SchemeFixture {
  std::string name;
  MeasurementScheme scheme;
  UnitaryRep system_rep;
  UnitaryRep probe_rep;
};

/// Sign representation of S₃ on ℂ.
inline UnitaryRep sign_rep() {
  const SymmetryGroup s3 = SymmetryGroup::symmetric(3);
  std::vector<Operator> m;
  for (int g = 0; g < s3.order(); ++g) {
    const std::string& p = s3.names()[g];
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) inversions += p[i] > p[j];
    m.push_back(identity(1) * (inversions % 2 ? -1.0 : 1.0));
  }
  return UnitaryRep(s3, m);
}

inline std::vector<SchemeFixture> scheme_fixtures() {
  std::mt19937_64 rng(0x5c4e3e);
  const SymmetryGroup z2 = SymmetryGroup::cyclic(2);
  const UnitaryRep flip = cyclic_shift(2, 2);
  std::vector<SchemeFixture> out;
  out.push_back({"CNOT, Z2 flips", MeasurementScheme(2, 2, cnot_system_control(), random_state(2, rng), pauli_z()), flip,
                 flip});
  out.push_back({"SWAP, Z2 flips", MeasurementScheme(2, 2, swap_operator(2, 2), random_state(2, rng), pauli_y()), flip,
                 flip});
  out.push_back({"random coupling, Z2 on system only",
                 MeasurementScheme(2, 3, random_unitary(6, rng), random_state(3, rng), random_hermitian(3, rng)), flip,
                 UnitaryRep::trivial(z2, 3)});
  const UnitaryRep shift3 = cyclic_shift(3, 3);
  out.push_back({"random coupling, Z3 shifts",
                 MeasurementScheme(3, 3, random_unitary(9, rng), random_state(3, rng), random_hermitian(3, rng)), shift3,
                 shift3});
  {
    // Probe in ℂ² carrying the sign representation twice.
    const UnitaryRep sgn = sign_rep();
    std::vector<Operator> m;
    for (int g = 0; g < 6; ++g) m.push_back(tensor_product(sgn.at(g), diag_real({1.0, 1.0})));
    out.push_back({"random coupling, S3 on a qutrit",
                   MeasurementScheme(3, 2, random_unitary(6, rng), random_state(2, rng), random_hermitian(2, rng)), perm3(),
                   UnitaryRep(sgn.group(), m)});
  }
  {
    const SymmetryGroup circle = SymmetryGroup::circle(3);
    out.push_back({"random coupling, U(1) number rotations",
                   MeasurementScheme(2, 3, random_unitary(6, rng), random_state(3, rng), random_hermitian(3, rng)),
                   UnitaryRep(circle, diag_real({0.0, 1.0})), UnitaryRep(circle, diag_real({0.0, 1.0, 2.0}))});
  }
  out.push_back({"random coupling, trivial group",
                 MeasurementScheme(2, 2, random_unitary(4, rng), random_state(2, rng), pauli_z()),
                 UnitaryRep::trivial(SymmetryGroup::trivial(), 2), UnitaryRep::trivial(SymmetryGroup::trivial(), 2)});
  return out;
}

/// Regression fixture: the probe state is moved with U_P† instead of U_P,
/// which only shows up for a group with elements that are not involutions.
inline MeasurementScheme mis_transformed(const MeasurementScheme& s, const Operator& us, const Operator& up) {
  const MeasurementScheme right = transform_scheme(s, us, up);
  const Operator sigma = up.adjoint() * s.probe_prep().op() * up;
  return MeasurementScheme(s.system_dim(), s.probe_dim(), right.scattering(), DensityState(0.5 * (sigma + sigma.adjoint())),
                           right.probe_obs());
}

inline SchemeFixture bug_fixture() {
  const UnitaryRep shift3 = cyclic_shift(3, 3);
  // Controlled shift: probe moved by the system's value, read off by a
  // number observable; the probe starts in a biased superposition.
  Operator s = zeros(9);
  for (int k = 0; k < 3; ++k) s += tensor_product(ket_bra(3, k, k), shift3.at(k));
  Vector psi(3);
  psi << 0.8, 0.6, 0.0;
  return {"controlled shift, Z3 (probe state moved the wrong way)",
          MeasurementScheme(3, 3, s, DensityState::pure(psi), diag_real({0.0, 1.0, 2.0})), shift3, shift3};
}

}  // namespace fixtures
