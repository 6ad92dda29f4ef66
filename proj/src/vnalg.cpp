#include "qrf/vnalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qrf {

SpanBuilder::SpanBuilder(int ambient_dim, double drop_threshold)
    : dim_(ambient_dim), drop_(drop_threshold) {}

bool SpanBuilder::add(const Operator& x) {
  if (x.rows() != dim_ || x.cols() != dim_) throw Error("SpanBuilder: dimension mismatch");
  const double n0 = x.norm();
  Operator r = x;
  // Two passes of classical Gram–Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis_) r -= hs_inner(b, r) * b;
  const double n1 = r.norm();
  // Relative to the candidate's norm, with an absolute floor so that round-off
  // residue of an exactly cancelling sum is never promoted to a direction.
  if (n1 < drop_ * std::max(1.0, n0)) return false;
  basis_.push_back(r / n1);
  return true;
}

OperatorAlgebra::OperatorAlgebra(int ambient_dim, std::vector<Operator> orthonormal_basis, bool unital)
    : dim_(ambient_dim), basis_(std::move(orthonormal_basis)), unital_(unital) {
  frame_.resize(Eigen::Index(dim_) * dim_, static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (basis_[k].rows() != dim_ || basis_[k].cols() != dim_)
      throw Error("OperatorAlgebra: basis element has wrong dimension");
    frame_.col(static_cast<Eigen::Index>(k)) = vec(basis_[k]);
  }
}

OperatorAlgebra OperatorAlgebra::from_span(int ambient_dim, const std::vector<Operator>& ops) {
  SpanBuilder sb(ambient_dim);
  for (const auto& op : ops) sb.add(op);
  OperatorAlgebra tmp(ambient_dim, sb.basis(), false);
  const bool unital = !sb.basis().empty() && tmp.contains(identity(ambient_dim));
  return OperatorAlgebra(ambient_dim, sb.basis(), unital);
}

OperatorAlgebra OperatorAlgebra::scalars(int ambient_dim) {
  return OperatorAlgebra(ambient_dim, {identity(ambient_dim) / std::sqrt(double(ambient_dim))}, true);
}

OperatorAlgebra OperatorAlgebra::full(int ambient_dim) {
  std::vector<Operator> basis;
  for (int j = 0; j < ambient_dim; ++j)
    for (int i = 0; i < ambient_dim; ++i) basis.push_back(ket_bra(ambient_dim, i, j));
  return OperatorAlgebra(ambient_dim, std::move(basis), true);
}

Operator OperatorAlgebra::project(const Operator& x) const {
  if (basis_.empty()) return Operator::Zero(dim_, dim_);
  const Vector c = frame_.adjoint() * vec(x);
  return unvec(frame_ * c, dim_);
}

double OperatorAlgebra::distance_to_span(const Operator& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw Error("distance_to_span: dimension mismatch");
  return (x - project(x)).norm() / std::max(1.0, x.norm());
}

bool OperatorAlgebra::contains(const Operator& x, double tol) const { return distance_to_span(x) <= tol; }

AlgebraDefects algebra_defects(const OperatorAlgebra& alg) {
  AlgebraDefects d;
  const auto& f = alg.frame();
  const Eigen::Index k = f.cols();
  if (k > 0)
    d.orthonormality = (f.adjoint() * f - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
  for (const auto& b : alg.basis()) d.adjoint_closure = std::max(d.adjoint_closure, alg.distance_to_span(b.adjoint()));
  for (const auto& a : alg.basis())
    for (const auto& b : alg.basis()) d.product_closure = std::max(d.product_closure, alg.distance_to_span(a * b));
  if (alg.unital()) d.identity = alg.distance_to_span(identity(alg.ambient_dim()));
  return d;
}

OperatorAlgebra generate_algebra(const std::vector<Operator>& generators, int ambient_dim) {
  if (ambient_dim < 1) throw Error("generate_algebra: ambient dimension must be positive");
  SpanBuilder sb(ambient_dim);
  sb.add(identity(ambient_dim));
  for (const auto& g : generators) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw Error("generate_algebra: generator dimension does not match ambient dimension");
    sb.add(g);
  }
  // The span of all words in the generators and their adjoints is the
  // generated *-algebra; it is reached by left-multiplying each new basis
  // element by every letter until nothing new appears.
  std::vector<Operator> letters;
  for (const auto& g : generators) {
    letters.push_back(g);
    if (!is_hermitian(g, 0.0)) letters.push_back(g.adjoint());
  }
  for (std::size_t next = 0; next < sb.basis().size(); ++next)
    for (const auto& l : letters) sb.add(l * sb.basis()[next]);
  return OperatorAlgebra(ambient_dim, sb.basis(), true);
}

OperatorAlgebra commutant_of(const std::vector<Operator>& ops, int ambient_dim) {
  const int d = ambient_dim;
  const Eigen::Index n = Eigen::Index(d) * d;
  // Null space of x ↦ (x b − b x)_b via the Gram operator Σ L_b† L_b with
  // L_b = 1⊗b − bᵀ⊗1 (column-major vec).
  Operator sum_bb = Operator::Zero(d, d);
  Operator sum_cb = Operator::Zero(d, d);
  Operator cross = Operator::Zero(n, n);
  for (const auto& b : ops) {
    if (b.rows() != d || b.cols() != d) throw Error("commutant: dimension mismatch");
    sum_bb += b.adjoint() * b;
    sum_cb += b.conjugate() * b.transpose();
    cross += tensor_product(Operator(b.transpose()), Operator(b.adjoint()));
    cross += tensor_product(Operator(b.conjugate()), b);
  }
  Operator gram = tensor_product(identity(d), sum_bb) + tensor_product(sum_cb, identity(d)) - cross;
  gram = 0.5 * Operator(gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(gram);
  const RealVector& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  SpanBuilder sb(d);
  for (Eigen::Index k = 0; k < n; ++k)
    if (ev(k) <= 1e-10 * scale) sb.add(unvec(solver.eigenvectors().col(k), d));
  return OperatorAlgebra(d, sb.basis(), true);
}

OperatorAlgebra commutant(const OperatorAlgebra& alg) { return commutant_of(alg.basis(), alg.ambient_dim()); }

OperatorAlgebra span_intersection(const OperatorAlgebra& a, const OperatorAlgebra& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error("span_intersection: dimension mismatch");
  const int d = a.ambient_dim();
  if (a.dimension() == 0 || b.dimension() == 0) return OperatorAlgebra(d, {}, false);
  // x ∈ span(a) with ‖P_b x‖ = ‖x‖ ⇔ eigenvalue 1 of Q_a† P_b Q_a.
  const Eigen::MatrixXcd proj = a.frame().adjoint() * b.frame();
  Operator m = proj * proj.adjoint();
  m = 0.5 * Operator(m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(m);
  SpanBuilder sb(d);
  for (Eigen::Index k = 0; k < m.rows(); ++k)
    if (solver.eigenvalues()(k) >= 1.0 - tol) sb.add(unvec(a.frame() * solver.eigenvectors().col(k), d));
  return OperatorAlgebra::from_span(d, sb.basis());
}

OperatorAlgebra centre(const OperatorAlgebra& alg) {
  OperatorAlgebra z = span_intersection(alg, commutant(alg));
  return OperatorAlgebra(z.ambient_dim(), z.basis(), true);
}

bool is_factor(const OperatorAlgebra& alg) { return centre(alg).dimension() == 1; }

double one_sided_span_distance(const OperatorAlgebra& from, const OperatorAlgebra& to) {
  double worst = 0.0;
  for (const auto& b : from.basis()) worst = std::max(worst, to.distance_to_span(b));
  return worst;
}

double span_distance(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error("span_distance: dimension mismatch");
  double d = std::max(one_sided_span_distance(a, b), one_sided_span_distance(b, a));
  // Spans of different dimension cannot coincide even if one contains the other.
  if (a.dimension() != b.dimension()) d = std::max(d, 1.0);
  return d;
}

namespace {

// Eigenvalue clusters of a Hermitian matrix: returns groups of column indices.
std::vector<std::vector<Eigen::Index>> clusters(const RealVector& values, double rel_gap) {
  std::vector<std::vector<Eigen::Index>> out;
  const double spread = std::max(1e-300, values.maxCoeff() - values.minCoeff());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (out.empty() || values(k) - values(out.back().back()) > rel_gap * std::max(spread, 1.0))
      out.push_back({k});
    else
      out.back().push_back(k);
  }
  return out;
}

Operator random_hermitian_combination(const std::vector<Operator>& elems, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Operator h = Operator::Zero(elems.front().rows(), elems.front().cols());
  for (const auto& e : elems) {
    const double a = n01(rng);
    const double b = n01(rng);
    h += a * 0.5 * (e + e.adjoint()) + b * (e - e.adjoint()) / Complex(0.0, 2.0);
  }
  return 0.5 * (h + h.adjoint());
}

struct FactorBasis {
  Block block;
  Operator columns;  // r × r unitary (in the restricted space)
};

// Structure of a factor acting on ℂ^r given by a spanning set of the restricted algebra.
bool factor_basis(const std::vector<Operator>& restricted, int r, std::mt19937_64& rng, FactorBasis& out) {
  SpanBuilder sb(r);
  for (const auto& x : restricted) sb.add(x);
  const int dim = sb.size();
  const int n = static_cast<int>(std::lround(std::sqrt(double(dim))));
  if (n * n != dim || r % n != 0) return false;
  const int m = r / n;

  const Operator h = random_hermitian_combination(sb.basis(), rng);
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  const auto groups = clusters(solver.eigenvalues(), 1e-7);
  if (static_cast<int>(groups.size()) != n) return false;
  std::vector<Operator> proj;
  for (const auto& g : groups) {
    if (static_cast<int>(g.size()) != m) return false;
    Operator p = Operator::Zero(r, r);
    for (auto k : g) p += solver.eigenvectors().col(k) * solver.eigenvectors().col(k).adjoint();
    proj.push_back(p);
  }

  // Partial isometries v_k with v_k v_k† = e_1 and v_k† v_k = e_k.
  const Operator a = random_element(OperatorAlgebra(r, sb.basis(), true), rng);
  std::vector<Operator> v(n);
  v[0] = proj[0];
  for (int k = 1; k < n; ++k) {
    const Operator t = proj[0] * a * proj[k];
    const double c2 = (t * t.adjoint()).trace().real() / m;
    if (c2 < 1e-12) return false;
    v[k] = t / std::sqrt(c2);
  }
  // Orthonormal basis f_l of range(e_1).
  std::vector<Vector> f;
  for (auto k : groups[0]) f.push_back(solver.eigenvectors().col(k));

  out.block = Block{n, m};
  out.columns = Operator(r, r);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < m; ++l) out.columns.col(k * m + l) = v[k].adjoint() * f[l];
  return true;
}

}  // namespace

BlockStructure decompose(const OperatorAlgebra& alg, std::uint64_t seed) {
  if (!alg.unital()) throw Error("decompose: algebra must be unital");
  const int d = alg.ambient_dim();
  const OperatorAlgebra z = centre(alg);
  std::mt19937_64 rng(seed);

  for (int attempt = 0; attempt <= 8; ++attempt) {
    const Operator h = random_hermitian_combination(z.basis(), rng);
    Eigen::SelfAdjointEigenSolver<Operator> solver(h);
    const auto groups = clusters(solver.eigenvalues(), 1e-7);
    if (static_cast<int>(groups.size()) != z.dimension()) continue;

    std::vector<FactorBasis> parts;
    bool ok = true;
    for (const auto& g : groups) {
      const int r = static_cast<int>(g.size());
      Operator iso(d, r);
      for (int c = 0; c < r; ++c) iso.col(c) = solver.eigenvectors().col(g[c]);
      std::vector<Operator> restricted;
      for (const auto& b : alg.basis()) restricted.push_back(iso.adjoint() * b * iso);
      FactorBasis fb;
      if (!factor_basis(restricted, r, rng, fb)) {
        ok = false;
        break;
      }
      fb.columns = iso * fb.columns;
      parts.push_back(std::move(fb));
    }
    if (!ok) continue;

    std::stable_sort(parts.begin(), parts.end(), [](const FactorBasis& a, const FactorBasis& b) {
      return std::pair(a.block.size, a.block.multiplicity) < std::pair(b.block.size, b.block.multiplicity);
    });
    BlockStructure bs;
    bs.seed = seed;
    bs.retries = attempt;
    bs.change_of_basis = Operator(d, d);
    Eigen::Index col = 0;
    for (const auto& p : parts) {
      bs.blocks.push_back(p.block);
      bs.change_of_basis.middleCols(col, p.columns.cols()) = p.columns;
      col += p.columns.cols();
    }
    return bs;
  }
  throw Error("decompose: generic central element failed to resolve central projections after 8 retries");
}

double block_structure_defect(const OperatorAlgebra& alg, const BlockStructure& bs) {
  const Operator& c = bs.change_of_basis;
  double worst = (c.adjoint() * c - identity(alg.ambient_dim())).norm();
  for (const auto& b : alg.basis()) {
    const Operator y = c.adjoint() * b * c;
    Operator model = Operator::Zero(y.rows(), y.cols());
    Eigen::Index off = 0;
    for (const auto& blk : bs.blocks) {
      const int n = blk.size, m = blk.multiplicity;
      // Average the diagonal m×m sub-blocks to get the M_n coefficient.
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Complex coef = y.block(off + i * m, off + j * m, m, m).trace() / double(m);
          model.block(off + i * m, off + j * m, m, m) = coef * Operator::Identity(m, m);
        }
      off += Eigen::Index(n) * m;
    }
    worst = std::max(worst, (y - model).norm());
  }
  return worst;
}

OperatorAlgebra tensor_algebra(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  std::vector<Operator> basis;
  for (const auto& x : a.basis())
    for (const auto& y : b.basis()) basis.push_back(tensor_product(x, y));
  return OperatorAlgebra(a.ambient_dim() * b.ambient_dim(), std::move(basis), a.unital() && b.unital());
}

Complex normalised_trace(const Operator& x) { return x.trace() / double(x.rows()); }

}  // namespace qrf
