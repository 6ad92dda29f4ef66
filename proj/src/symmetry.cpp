#include "qrf/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace qrf {

SymmetryGroup SymmetryGroup::from_cayley(std::vector<std::vector<int>> table, std::vector<std::string> names) {
  const int n = static_cast<int>(table.size());
  if (n < 1) throw Error("group: empty Cayley table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw Error("group: Cayley table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw Error("group: Cayley table entry out of range");
  }
  SymmetryGroup g;
  g.kind_ = GroupKind::finite;
  g.table_ = std::move(table);

  g.identity_ = -1;
  for (int e = 0; e < n && g.identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = g.table_[e][a] == a && g.table_[a][e] == a;
    if (ok) g.identity_ = e;
  }
  if (g.identity_ < 0) throw Error("group: no identity element");

  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g.table_[a][b] == g.identity_ && g.table_[b][a] == g.identity_) {
        g.inverse_[a] = b;
        break;
      }
    if (g.inverse_[a] < 0) throw Error("group: element " + std::to_string(a) + " has no inverse");
  }
  if (n <= 64) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.table_[g.table_[a][b]][c] != g.table_[a][g.table_[b][c]])
            throw Error("group: Cayley table is not associative");
  }
  if (names.empty()) {
    for (int a = 0; a < n; ++a) names.push_back(std::to_string(a));
  } else if (static_cast<int>(names.size()) != n) {
    throw Error("group: element name count does not match table");
  }
  g.names_ = std::move(names);
  return g;
}

SymmetryGroup SymmetryGroup::cyclic(int n) {
  if (n < 1) throw Error("group: cyclic order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return from_cayley(std::move(t));
}

SymmetryGroup SymmetryGroup::dihedral(int n) {
  if (n < 1) throw Error("group: dihedral parameter must be positive");
  // Element (s, k) = s^s r^k stored at index s·n + k; r^k s = s r^{-k}.
  const int order = 2 * n;
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  std::vector<std::string> names(order);
  for (int a = 0; a < order; ++a) {
    const int sa = a / n, ka = a % n;
    names[a] = (sa ? "sr" : "r") + std::to_string(ka);
    for (int b = 0; b < order; ++b) {
      const int sb = b / n, kb = b % n;
      const int s = (sa + sb) % 2;
      const int k = ((sb ? -ka : ka) + kb + n * 2) % n;
      t[a][b] = s * n + k;
    }
  }
  return from_cayley(std::move(t), std::move(names));
}

SymmetryGroup SymmetryGroup::symmetric(int n) {
  if (n < 1 || n > 5) throw Error("group: symmetric group supported for 1 ≤ n ≤ 5");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
  const int order = static_cast<int>(perms.size());
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  std::vector<std::string> names(order);
  for (int a = 0; a < order; ++a) {
    for (int v : perms[a]) names[a] += std::to_string(v);
    for (int b = 0; b < order; ++b) {
      // (a·b)(i) = a(b(i))
      std::vector<int> c(n);
      for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = index.at(c);
    }
  }
  return from_cayley(std::move(t), std::move(names));
}

SymmetryGroup SymmetryGroup::circle(int bandwidth) {
  if (bandwidth < 0) throw Error("group: circle bandwidth must be nonnegative");
  SymmetryGroup g;
  g.kind_ = GroupKind::circle;
  g.bandwidth_ = bandwidth;
  return g;
}

SymmetryGroup SymmetryGroup::direct_product(const SymmetryGroup& a, const SymmetryGroup& b) {
  if (!a.is_finite() || !b.is_finite()) throw Error("group: direct product requires finite factors");
  const int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
  std::vector<std::string> names(na * nb);
  for (int x = 0; x < na * nb; ++x) {
    names[x] = "(" + a.names_[x / nb] + "," + b.names_[x % nb] + ")";
    for (int y = 0; y < na * nb; ++y)
      t[x][y] = a.multiply(x / nb, y / nb) * nb + b.multiply(x % nb, y % nb);
  }
  return from_cayley(std::move(t), std::move(names));
}

int SymmetryGroup::order() const {
  if (!is_finite()) throw Error("group: the circle group has no finite order");
  return static_cast<int>(table_.size());
}

bool SymmetryGroup::compatible_with(const SymmetryGroup& other) const {
  if (kind_ != other.kind_) return false;
  return kind_ == GroupKind::circle || table_ == other.table_;
}

// ---------------------------------------------------------------------------

UnitaryRep::UnitaryRep(SymmetryGroup group, std::vector<Operator> matrices)
    : group_(std::move(group)), matrices_(std::move(matrices)) {
  if (!group_.is_finite()) throw Error("representation: matrix list given for a circle group");
  if (static_cast<int>(matrices_.size()) != group_.order())
    throw Error("representation: expected one matrix per group element");
  dim_ = static_cast<int>(matrices_.front().rows());
  for (const auto& u : matrices_) {
    if (u.rows() != dim_ || u.cols() != dim_) throw Error("representation: matrices have inconsistent dimensions");
    if (!is_unitary(u, 1e-9)) throw Error("representation: matrix is not unitary");
  }
  if ((matrices_[group_.identity_index()] - identity(dim_)).norm() > 1e-9)
    throw Error("representation: identity element is not represented by 1");
  const int n = group_.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if ((matrices_[a] * matrices_[b] - matrices_[group_.multiply(a, b)]).norm() > 1e-9 * std::sqrt(double(dim_)))
        throw Error("representation: homomorphism property fails for elements " + group_.names()[a] + ", " +
                    group_.names()[b]);
}

UnitaryRep::UnitaryRep(SymmetryGroup circle, Operator generator)
    : group_(std::move(circle)), generator_(std::move(generator)) {
  if (group_.is_finite()) throw Error("representation: generator given for a finite group");
  require_operator(generator_, "representation generator");
  dim_ = static_cast<int>(generator_.rows());
  generator_eig_ = hermitian_eig(generator_, 1e-9);
  for (Eigen::Index k = 0; k < generator_eig_.values.size(); ++k) {
    const double v = generator_eig_.values(k);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9) throw Error("representation: circle generator must have integer spectrum");
    if (std::abs(r) > group_.bandwidth())
      throw Error("representation: generator frequency " + std::to_string(int(r)) + " exceeds bandwidth " +
                  std::to_string(group_.bandwidth()));
    generator_eig_.values(k) = r;
    max_frequency_ = std::max(max_frequency_, static_cast<int>(std::abs(r)));
  }
}

UnitaryRep UnitaryRep::trivial(const SymmetryGroup& group, int dim) {
  if (group.is_finite()) return UnitaryRep(group, std::vector<Operator>(group.order(), identity(dim)));
  return UnitaryRep(group, zeros(dim));
}

const Operator& UnitaryRep::at(int g) const {
  if (!group_.is_finite()) throw Error("representation: element index used on a circle representation");
  return matrices_.at(g);
}

Operator UnitaryRep::at_angle(double theta) const {
  if (group_.is_finite()) throw Error("representation: angle used on a finite-group representation");
  Vector phases(dim_);
  for (int k = 0; k < dim_; ++k) phases(k) = std::exp(Complex(0.0, theta * generator_eig_.values(k)));
  return generator_eig_.vectors * phases.asDiagonal() * generator_eig_.vectors.adjoint();
}

UnitaryRep tensor_rep(const UnitaryRep& u, const UnitaryRep& v) {
  if (!u.group().compatible_with(v.group())) throw Error("representation: tensor of representations of different groups");
  if (u.group().is_finite()) {
    std::vector<Operator> m;
    for (int g = 0; g < u.group().order(); ++g) m.push_back(tensor_product(u.at(g), v.at(g)));
    return UnitaryRep(u.group(), std::move(m));
  }
  const Operator n = tensor_product(u.generator(), identity(v.dim())) + tensor_product(identity(u.dim()), v.generator());
  return UnitaryRep(SymmetryGroup::circle(u.group().bandwidth() + v.group().bandwidth()), n);
}

UnitaryRep regular_representation(const SymmetryGroup& group) {
  if (!group.is_finite()) throw Error("regular representation not finite-dimensional");
  const int n = group.order();
  std::vector<Operator> m;
  for (int g = 0; g < n; ++g) {
    Operator p = zeros(n);
    for (int h = 0; h < n; ++h) p(group.multiply(g, h), h) = 1.0;
    m.push_back(p);
  }
  return UnitaryRep(group, std::move(m));
}

UnitaryRep right_regular_representation(const SymmetryGroup& group) {
  if (!group.is_finite()) throw Error("regular representation not finite-dimensional");
  const int n = group.order();
  std::vector<Operator> m;
  for (int g = 0; g < n; ++g) {
    Operator p = zeros(n);
    for (int h = 0; h < n; ++h) p(group.multiply(h, group.inverse(g)), h) = 1.0;
    m.push_back(p);
  }
  return UnitaryRep(group, std::move(m));
}

int circle_quadrature_nodes(const UnitaryRep& u, const UnitaryRep& v) {
  const int b = std::max(u.group().bandwidth(), v.group().bandwidth());
  return 4 * b + 1;
}

Operator average_over_group(const UnitaryRep& u, const UnitaryRep& v, const Operator& x) {
  if (!u.group().compatible_with(v.group())) throw Error("average_over_group: representations of different groups");
  if (x.rows() != u.dim() || x.cols() != v.dim()) throw Error("average_over_group: operator dimension mismatch");
  Operator acc = Operator::Zero(x.rows(), x.cols());
  if (u.group().is_finite()) {
    const int n = u.group().order();
    for (int g = 0; g < n; ++g) acc += u.at(g) * x * v.at(g).adjoint();
    return acc / double(n);
  }
  const int nodes = circle_quadrature_nodes(u, v);
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / nodes;
    acc += u.at_angle(theta) * x * v.at_angle(theta).adjoint();
  }
  return acc / double(nodes);
}

OperatorAlgebra fixed_point_basis(const UnitaryRep& u, const UnitaryRep& v, int ambient_dim) {
  if (u.dim() != ambient_dim || v.dim() != ambient_dim) throw Error("fixed_point_basis: dimension mismatch");
  SpanBuilder sb(ambient_dim);
  for (int j = 0; j < ambient_dim; ++j)
    for (int i = 0; i < ambient_dim; ++i) sb.add(average_over_group(u, v, ket_bra(ambient_dim, i, j)));
  return OperatorAlgebra::from_span(ambient_dim, sb.basis());
}

OperatorAlgebra fixed_points_in(const OperatorAlgebra& alg, const UnitaryRep& u) {
  if (u.dim() != alg.ambient_dim()) throw Error("fixed_points_in: dimension mismatch");
  SpanBuilder sb(alg.ambient_dim());
  for (const auto& b : alg.basis()) sb.add(average_over_group(u, b));
  return OperatorAlgebra::from_span(alg.ambient_dim(), sb.basis());
}

// ---------------------------------------------------------------------------

HomogeneousSpace::HomogeneousSpace(SymmetryGroup group, std::vector<int> subgroup)
    : group_(std::move(group)), subgroup_(std::move(subgroup)) {
  if (!group_.is_finite()) {
    if (!subgroup_.empty()) throw Error("homogeneous space: only the principal circle space is supported");
    return;
  }
  const int n = group_.order();
  std::sort(subgroup_.begin(), subgroup_.end());
  subgroup_.erase(std::unique(subgroup_.begin(), subgroup_.end()), subgroup_.end());
  if (subgroup_.empty()) subgroup_.push_back(group_.identity_index());
  std::vector<char> in_h(n, 0);
  for (int h : subgroup_) {
    if (h < 0 || h >= n) throw Error("homogeneous space: subgroup index out of range");
    in_h[h] = 1;
  }
  if (!in_h[group_.identity_index()]) throw Error("homogeneous space: subgroup must contain the identity");
  for (int a : subgroup_)
    for (int b : subgroup_)
      if (!in_h[group_.multiply(a, group_.inverse(b))]) throw Error("homogeneous space: subgroup is not closed");

  coset_of_.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    if (coset_of_[g] >= 0) continue;
    const int c = static_cast<int>(representatives_.size());
    representatives_.push_back(g);
    for (int h : subgroup_) coset_of_[group_.multiply(g, h)] = c;
  }
  action_.assign(n, std::vector<int>(representatives_.size()));
  for (int g = 0; g < n; ++g)
    for (std::size_t c = 0; c < representatives_.size(); ++c)
      action_[g][c] = coset_of_[group_.multiply(g, representatives_[c])];
}

HomogeneousSpace HomogeneousSpace::principal(const SymmetryGroup& group) {
  if (!group.is_finite()) return HomogeneousSpace(group, {});
  return HomogeneousSpace(group, {group.identity_index()});
}

}  // namespace qrf
