#include "qrf/crossed.hpp"

#include <algorithm>
#include <random>

namespace qrf {

namespace {

void require_finite(const GroupAction& action) {
  if (!action.rep().group().is_finite()) throw Error("continuous crossed products handled analytically in typecond");
}

}  // namespace

Operator crossed_pi(const GroupAction& action, const Operator& a) {
  require_finite(action);
  const int n = action.rep().group().order();
  Operator out = Operator::Zero(Eigen::Index(action.dim()) * n, Eigen::Index(action.dim()) * n);
  for (int g = 0; g < n; ++g) out += tensor_product(action.apply(g, a), ket_bra(n, g, g));
  return out;
}

Operator crossed_translation(const GroupAction& action, int g) {
  require_finite(action);
  return tensor_product(identity(action.dim()), right_regular_representation(action.rep().group()).at(g));
}

Operator crossed_intertwiner(const GroupAction& action) {
  require_finite(action);
  const int n = action.rep().group().order();
  Operator v = Operator::Zero(Eigen::Index(action.dim()) * n, Eigen::Index(action.dim()) * n);
  for (int g = 0; g < n; ++g) v += tensor_product(action.rep().at(g), ket_bra(n, g, g));
  return v;
}

CrossedProductAlgebra build_crossed_product(const GroupAction& action) {
  require_finite(action);
  const SymmetryGroup& group = action.rep().group();
  const int n = group.order();
  CrossedProductAlgebra cp{action, action.dim() * n, {}, {}};
  const auto& basis = action.algebra().basis();
  for (std::size_t k = 0; k < basis.size(); ++k)
    cp.tagged_generators.emplace_back("pi[" + std::to_string(k) + "]", crossed_pi(action, basis[k]));
  const UnitaryRep rho = right_regular_representation(group);
  for (int g = 0; g < n; ++g)
    if (g != group.identity_index())
      cp.tagged_generators.emplace_back("rho[" + group.names()[g] + "]",
                                        tensor_product(identity(action.dim()), rho.at(g)));
  std::vector<Operator> gens;
  for (const auto& [tag, op] : cp.tagged_generators) gens.push_back(op);
  cp.algebra = generate_algebra(gens, cp.ambient_dim);
  return cp;
}

OperatorAlgebra invariant_algebra(const GroupAction& action, const QuantumReferenceFrame& frame) {
  const OperatorAlgebra joint = tensor_algebra(action.algebra(), OperatorAlgebra::full(frame.dim()));
  return fixed_points_in(joint, tensor_rep(action.rep(), frame.rep()));
}

bool CommutationReport::passed() const {
  return crossed_dimension == fixed_point_dimension && span_distance <= 1e-7 && covariance <= 1e-9 &&
         homomorphism <= 1e-9 && v_pi <= 1e-10 && v_translation <= 1e-10;
}

CommutationReport verify_commutation_theorem(const GroupAction& action) {
  require_finite(action);
  CommutationReport r;
  const SymmetryGroup& group = action.rep().group();
  const int n = group.order();
  const CrossedProductAlgebra cp = build_crossed_product(action);
  const OperatorAlgebra fixed = fixed_points_in(tensor_algebra(action.algebra(), OperatorAlgebra::full(n)),
                                                tensor_rep(action.rep(), regular_representation(group)));
  r.crossed_dimension = cp.algebra.dimension();
  r.fixed_point_dimension = fixed.dimension();
  r.span_distance = span_distance(cp.algebra, fixed);

  std::mt19937_64 rng(kDefaultSeed);
  std::vector<Operator> samples = action.algebra().basis();
  for (int k = 0; k < 4; ++k) samples.push_back(random_element(action.algebra(), rng));
  const Operator v = crossed_intertwiner(action);
  const Operator one_n = identity(n);
  for (const auto& a : samples) {
    const Operator pa = crossed_pi(action, a);
    r.homomorphism = std::max(r.homomorphism, (crossed_pi(action, a.adjoint()) - pa.adjoint()).norm());
    r.v_pi = std::max(r.v_pi, (v * tensor_product(a, one_n) * v.adjoint() - pa).norm());
    for (int h = 0; h < n; ++h) {
      const Operator t = crossed_translation(action, h);
      r.covariance = std::max(r.covariance, (t * pa * t.adjoint() - crossed_pi(action, action.apply(h, a))).norm());
    }
  }
  for (std::size_t i = samples.size() - 4; i < samples.size(); ++i)
    for (std::size_t j = samples.size() - 4; j < samples.size(); ++j)
      r.homomorphism =
          std::max(r.homomorphism, (crossed_pi(action, samples[i] * samples[j]) -
                                    crossed_pi(action, samples[i]) * crossed_pi(action, samples[j]))
                                       .norm());
  const UnitaryRep rho = right_regular_representation(group);
  for (int g = 0; g < n; ++g)
    r.v_translation = std::max(r.v_translation, (v * tensor_product(action.rep().at(g), rho.at(g)) * v.adjoint() -
                                                 crossed_translation(action, g))
                                                    .norm());
  return r;
}

Dilation frame_embedding(const QuantumReferenceFrame& frame) {
  const auto& vs = frame.povm().space();
  if (vs.kind() != ValueSpace::Kind::points || !frame.rep().group().is_finite())
    throw Error("frame embedding requires a finite frame over a homogeneous space");
  if (vs.space().is_principal()) return covariant_dilate(frame);

  const SymmetryGroup& g = frame.rep().group();
  const HomogeneousSpace& hs = vs.space();
  const int n = g.order(), d = frame.dim();
  const double h_order = static_cast<double>(hs.subgroup().size());
  const Operator root = sqrtm_psd(frame.povm().effect(hs.coset_of(g.identity_index())) / h_order);
  Operator w = Operator::Zero(Eigen::Index(d) * n, d);
  for (int x = 0; x < n; ++x) {
    const Operator block = root * frame.rep().at(g.inverse(x));
    for (int i = 0; i < d; ++i) w.row(Eigen::Index(i) * n + x) = block.row(i);
  }
  std::vector<Operator> proj(hs.size(), Operator::Zero(Eigen::Index(d) * n, Eigen::Index(d) * n));
  for (int x = 0; x < n; ++x) proj[hs.coset_of(x)] += tensor_product(identity(d), ket_bra(n, x, x));
  const UnitaryRep lam = regular_representation(g);
  std::vector<Operator> amb;
  for (int h = 0; h < n; ++h) amb.push_back(tensor_product(identity(d), lam.at(h)));
  return Dilation{w, Povm(vs, std::move(proj)), n, UnitaryRep(g, std::move(amb))};
}

OperatorAlgebra crossed_with_auxiliary(const CrossedProductAlgebra& crossed, int aux_dim) {
  const int ds = crossed.base.dim();
  const int n = crossed.ambient_dim / ds;
  // H_S ⊗ ℓ²(G) ⊗ K → H_S ⊗ K ⊗ ℓ²(G).
  const Operator perm = tensor_product(identity(ds), swap_operator(n, aux_dim));
  std::vector<Operator> ops;
  for (const auto& b : crossed.algebra.basis())
    for (int i = 0; i < aux_dim; ++i)
      for (int j = 0; j < aux_dim; ++j) ops.push_back(perm * tensor_product(b, ket_bra(aux_dim, i, j)) * perm.adjoint());
  // Products of orthonormal bases with matrix units stay orthonormal.
  return OperatorAlgebra(crossed.ambient_dim * aux_dim, std::move(ops), true);
}

OperatorAlgebra compress_by_frame(const OperatorAlgebra& invariants, const Operator& p, const UnitaryRep& probe_rep) {
  if (!is_projection(p)) throw Error("compress_by_frame: p is not a projection");
  if (p.rows() != probe_rep.dim() || invariants.ambient_dim() % probe_rep.dim() != 0)
    throw Error("compress_by_frame: dimension mismatch");
  for (int g = 0; g < probe_rep.group().order(); ++g)
    if (commutator(p, probe_rep.at(g)).norm() > 1e-8)
      throw Error("compress_by_frame: projection is not invariant under the probe representation");
  const Operator big = tensor_product(identity(invariants.ambient_dim() / probe_rep.dim()), p);
  std::vector<Operator> ops;
  for (const auto& b : invariants.basis()) ops.push_back(big * b * big);
  return OperatorAlgebra::from_span(invariants.ambient_dim(), ops);
}

bool CompressionReport::passed() const {
  return compressed_dimension == invariant_dimension && span_distance <= 1e-7 && product_closure <= 1e-7;
}

CompressionReport verify_compression(const GroupAction& action, const QuantumReferenceFrame& frame) {
  require_finite(action);
  CompressionReport r;
  const Dilation dil = frame_embedding(frame);
  const Operator& w = dil.isometry;
  const int dk = frame.dim();
  const OperatorAlgebra big = crossed_with_auxiliary(build_crossed_product(action), dk);
  const OperatorAlgebra compressed = compress_by_frame(big, w * w.adjoint(), *dil.ambient_rep);

  const Operator wt = tensor_product(identity(action.dim()), w);
  std::vector<Operator> moved;
  for (const auto& b : compressed.basis()) moved.push_back(wt.adjoint() * b * wt);
  const OperatorAlgebra transported = OperatorAlgebra::from_span(action.dim() * frame.dim(), moved);
  const OperatorAlgebra inv = invariant_algebra(action, frame);

  r.compressed_dimension = compressed.dimension();
  r.invariant_dimension = inv.dimension();
  r.span_distance = span_distance(transported, inv);
  r.product_closure = algebra_defects(transported).product_closure;
  return r;
}

Operator extended_relativize(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame) {
  require_finite(action);
  const Dilation dil = frame_embedding(frame);
  const int n = action.rep().group().order(), dk = frame.dim();
  const int big = action.dim() * dk * n;
  if (x.rows() != big || x.cols() != big) throw Error("extended relativisation: operator does not act on H_S ⊗ K ⊗ ℓ²(G)");
  Operator v = Operator::Zero(big, big);
  for (int g = 0; g < n; ++g) v += tensor_product({action.rep().at(g), identity(dk), ket_bra(n, g, g)});
  const Operator wt = v.adjoint() * tensor_product(identity(action.dim()), dil.isometry);
  return wt.adjoint() * x * wt;
}

}  // namespace qrf
