#include "qrf/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qrf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ValueSpace ValueSpace::outcomes(int count) {
  if (count < 1) throw Error("value space: need at least one outcome");
  ValueSpace v;
  v.kind_ = Kind::outcomes;
  v.count_ = count;
  return v;
}

ValueSpace ValueSpace::points(HomogeneousSpace space) {
  if (!space.group().is_finite()) throw Error("value space: point cells require a finite group");
  ValueSpace v;
  v.kind_ = Kind::points;
  v.count_ = space.size();
  v.space_ = std::move(space);
  return v;
}

ValueSpace ValueSpace::arcs(std::vector<double> breakpoints) {
  if (breakpoints.size() < 2) throw Error("value space: arcs need at least two breakpoints");
  if (std::abs(breakpoints.front()) > 1e-12 || std::abs(breakpoints.back() - kTwoPi) > 1e-12)
    throw Error("value space: arcs must cover [0, 2π)");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1])) throw Error("value space: arc breakpoints must increase");
  breakpoints.front() = 0.0;
  breakpoints.back() = kTwoPi;
  ValueSpace v;
  v.kind_ = Kind::arcs;
  v.count_ = static_cast<int>(breakpoints.size()) - 1;
  v.breaks_ = std::move(breakpoints);
  return v;
}

ValueSpace ValueSpace::uniform_arcs(int count) {
  if (count < 1) throw Error("value space: need at least one arc");
  std::vector<double> b(count + 1);
  for (int i = 0; i <= count; ++i) b[i] = kTwoPi * i / count;
  return arcs(std::move(b));
}

int ValueSpace::cells() const { return count_; }

const HomogeneousSpace& ValueSpace::space() const {
  if (!space_) throw Error("value space: no homogeneous space attached");
  return *space_;
}

// ---------------------------------------------------------------------------

Povm::Povm(ValueSpace space, std::vector<Operator> effects) : space_(std::move(space)), effects_(std::move(effects)) {
  if (effects_.empty()) throw Error("povm: no effects");
  if (static_cast<int>(effects_.size()) != space_.cells())
    throw Error("povm: effect count " + std::to_string(effects_.size()) + " does not match " +
                std::to_string(space_.cells()) + " value-space cells");
  dim_ = static_cast<int>(effects_.front().rows());
  Operator sum = zeros(dim_);
  for (std::size_t k = 0; k < effects_.size(); ++k) {
    const Operator& e = effects_[k];
    require_operator(e, "povm effect");
    if (e.rows() != dim_) throw Error("povm: effects have inconsistent dimensions");
    if (!is_hermitian(e, 1e-9)) throw Error("povm: effect " + std::to_string(k) + " is not Hermitian");
    const HermitianEig eig = hermitian_eig(e, 1e-9);
    if (eig.values(0) < -1e-9 || eig.values(dim_ - 1) > 1.0 + 1e-9)
      throw Error("povm: effect " + std::to_string(k) + " is not between 0 and 1");
    sum += e;
  }
  if ((sum - identity(dim_)).norm() > 1e-9 * std::sqrt(double(dim_))) throw Error("povm: effects do not sum to 1");
}

bool Povm::is_sharp(double tol) const {
  for (std::size_t i = 0; i < effects_.size(); ++i)
    for (std::size_t j = 0; j < effects_.size(); ++j) {
      const Operator target = i == j ? effects_[i] : zeros(dim_);
      if ((effects_[i] * effects_[j] - target).norm() > tol) return false;
    }
  return true;
}

Complex arc_fourier_integral(int k, double a, double b) {
  if (k == 0) return Complex((b - a) / kTwoPi, 0.0);
  const Complex ik(0.0, double(k));
  return (std::exp(ik * b) - std::exp(ik * a)) / (kTwoPi * ik);
}

Operator Povm::effect_on_arc(double a, double b) const {
  if (!density_) throw Error("povm: effects on arbitrary arcs need a phase density");
  Operator e(dim_, dim_);
  for (int n = 0; n < dim_; ++n)
    for (int m = 0; m < dim_; ++m) e(n, m) = (*density_)(n, m) * arc_fourier_integral(n - m, a, b);
  return e;
}

Povm phase_povm(int dim, const Operator& c, const ValueSpace& arcs) {
  if (arcs.kind() != ValueSpace::Kind::arcs) throw Error("phase_povm: value space must be an arc partition");
  if (dim < 1 || c.rows() < dim || c.cols() != c.rows()) throw Error("phase_povm: c must be square with at least dim rows");
  const Operator cc = c.topLeftCorner(dim, dim);
  for (int n = 0; n < dim; ++n)
    if (std::abs(cc(n, n) - 1.0) > 1e-9) throw Error("phase_povm: c must have unit diagonal");
  if (!is_hermitian(cc, 1e-9) || hermitian_eig(cc, 1e-9).values(0) < -1e-9)
    throw Error("phase_povm: c must be positive semidefinite");

  std::vector<Operator> effects;
  for (int cell = 0; cell < arcs.cells(); ++cell) {
    const auto [a, b] = arcs.arc(cell);
    Operator e(dim, dim);
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) e(n, m) = cc(n, m) * arc_fourier_integral(n - m, a, b);
    effects.push_back(e);
  }
  Povm p(arcs, std::move(effects));
  p.density_ = cc;
  return p;
}

std::vector<double> norm1_scores(const Povm& povm) {
  std::vector<double> out;
  for (const auto& e : povm.effects()) {
    if (e.norm() < 1e-12) {
      out.push_back(0.0);
      continue;
    }
    const HermitianEig eig = hermitian_eig(e, 1e-9);
    out.push_back(std::clamp(eig.values(eig.values.size() - 1), 0.0, 1.0));
  }
  return out;
}

std::vector<double> norm1_trial_scores(const Povm& povm, const std::vector<DensityState>& trial_states) {
  std::vector<double> out;
  for (const auto& e : povm.effects()) {
    double best = 0.0;
    for (const auto& s : trial_states) best = std::max(best, s.expectation(e).real());
    out.push_back(best);
  }
  return out;
}

// ---------------------------------------------------------------------------

MarkovKernel::MarkovKernel(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) throw Error("markov kernel: empty matrix");
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows_.cols(); ++j)
      if (!(rows_(i, j) >= 0.0 && rows_(i, j) <= 1.0)) throw Error("markov kernel: entries must lie in [0, 1]");
    if (std::abs(rows_.row(i).sum() - 1.0) > 1e-12) throw Error("markov kernel: rows must sum to 1");
  }
}

MarkovKernel MarkovKernel::identity(int n) { return MarkovKernel(Eigen::MatrixXd::Identity(n, n)); }

Povm smear(const Povm& povm, const MarkovKernel& kernel, std::optional<ValueSpace> target) {
  const auto& p = kernel.rows();
  if (p.rows() != povm.cells()) throw Error("smear: kernel rows must match the POVM's cells");
  const int out_cells = static_cast<int>(p.cols());
  ValueSpace space = target ? *target : ValueSpace::outcomes(out_cells);
  if (space.cells() != out_cells) throw Error("smear: target space does not match kernel columns");
  std::vector<Operator> effects(out_cells, zeros(povm.dim()));
  for (int y = 0; y < out_cells; ++y)
    for (int x = 0; x < povm.cells(); ++x) effects[y] += p(x, y) * povm.effect(x);
  return Povm(std::move(space), std::move(effects));
}

// ---------------------------------------------------------------------------

QuantumReferenceFrame::QuantumReferenceFrame(UnitaryRep rep, Povm povm) : rep_(std::move(rep)), povm_(std::move(povm)) {
  if (rep_.dim() != povm_.dim()) throw Error("frame: representation and POVM dimensions differ");
  const auto kind = povm_.space().kind();
  if (kind == ValueSpace::Kind::outcomes) throw Error("frame: POVM value space carries no group action");
  if (kind == ValueSpace::Kind::points && !povm_.space().space().group().compatible_with(rep_.group()))
    throw Error("frame: value space and representation belong to different groups");
  if (kind == ValueSpace::Kind::arcs && rep_.group().is_finite())
    throw Error("frame: arc value spaces require a circle representation");
  const double d = covariance_defect();
  if (d > 1e-8) throw Error("frame: POVM is not covariant (defect " + std::to_string(d) + ")");
}

bool QuantumReferenceFrame::principal() const {
  if (povm_.space().kind() == ValueSpace::Kind::arcs) return true;
  return povm_.space().space().is_principal();
}

double QuantumReferenceFrame::covariance_defect() const {
  double worst = 0.0;
  const ValueSpace& vs = povm_.space();
  if (vs.kind() == ValueSpace::Kind::points) {
    const HomogeneousSpace& hs = vs.space();
    for (int g = 0; g < rep_.group().order(); ++g)
      for (int c = 0; c < vs.cells(); ++c)
        worst = std::max(worst, (rep_.at(g) * povm_.effect(c) * rep_.at(g).adjoint() - povm_.effect(hs.act(g, c))).norm());
    return worst;
  }
  // Arc cells: rotations that map the partition onto itself move cells exactly;
  // with a phase density every rotation can be tested.
  const auto& b = vs.breakpoints();
  const int k = vs.cells();
  std::vector<double> shifts;
  if (povm_.phase_density()) {
    shifts = {0.37, 1.0, 2.5, std::numbers::pi, 5.1};
  } else {
    for (int j = 1; j < k; ++j) shifts.push_back(b[j]);
  }
  for (double theta : shifts) {
    const Operator u = rep_.at_angle(theta);
    for (int c = 0; c < k; ++c) {
      const Operator moved = u * povm_.effect(c) * u.adjoint();
      if (povm_.phase_density()) {
        worst = std::max(worst, (moved - povm_.effect_on_arc(b[c] + theta, b[c + 1] + theta)).norm());
        continue;
      }
      // Partition-preserving rotation: locate the image cell.
      int image = -1;
      for (int c2 = 0; c2 < k; ++c2) {
        if (std::abs(std::remainder(b[c] + theta - b[c2], kTwoPi)) < 1e-12 &&
            std::abs(std::remainder(b[c + 1] - b[c] - (b[c2 + 1] - b[c2]), kTwoPi)) < 1e-12)
          image = c2;
      }
      if (image >= 0) worst = std::max(worst, (moved - povm_.effect(image)).norm());
    }
  }
  return worst;
}

double QuantumReferenceFrame::localisable_score() const {
  double worst = 1.0;
  for (double s : norm1_scores(povm_))
    if (s > 0.0) worst = std::min(worst, s);
  return worst;
}

std::optional<bool> QuantumReferenceFrame::complete() const {
  if (!rep_.group().is_finite()) return std::nullopt;
  for (int g = 0; g < rep_.group().order(); ++g) {
    if (g == rep_.group().identity_index()) continue;
    bool trivial = true;
    for (const auto& e : povm_.effects())
      if ((rep_.at(g) * e * rep_.at(g).adjoint() - e).norm() > 1e-8) {
        trivial = false;
        break;
      }
    if (trivial) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Dilation naimark_dilate(const Povm& povm) {
  const int d = povm.dim(), k = povm.cells();
  Operator w = Operator::Zero(Eigen::Index(d) * k, d);
  for (int x = 0; x < k; ++x) {
    const Operator root = sqrtm_psd(povm.effect(x));
    for (int i = 0; i < d; ++i) w.row(Eigen::Index(i) * k + x) = root.row(i);
  }
  std::vector<Operator> proj;
  for (int x = 0; x < k; ++x) proj.push_back(tensor_product(identity(d), ket_bra(k, x, x)));
  return Dilation{w, Povm(povm.space(), std::move(proj)), k, std::nullopt};
}

Dilation covariant_dilate(const QuantumReferenceFrame& frame) {
  const auto& vs = frame.povm().space();
  if (vs.kind() != ValueSpace::Kind::points || !vs.space().is_principal())
    throw Error("covariant dilation implemented for finite principal frames only");
  const SymmetryGroup& g = frame.rep().group();
  const HomogeneousSpace& hs = vs.space();
  const int n = g.order(), d = frame.dim();
  const Operator root = sqrtm_psd(frame.povm().effect(hs.coset_of(g.identity_index())));

  Operator w = Operator::Zero(Eigen::Index(d) * n, d);
  for (int x = 0; x < n; ++x) {
    const Operator block = root * frame.rep().at(g.inverse(x));
    for (int i = 0; i < d; ++i) w.row(Eigen::Index(i) * n + x) = block.row(i);
  }
  // Ambient cells follow the coset order of the frame's value space.
  std::vector<Operator> proj(n);
  for (int x = 0; x < n; ++x) proj[hs.coset_of(x)] = tensor_product(identity(d), ket_bra(n, x, x));
  const UnitaryRep lam = regular_representation(g);
  std::vector<Operator> amb;
  for (int h = 0; h < n; ++h) amb.push_back(tensor_product(identity(d), lam.at(h)));
  return Dilation{w, Povm(vs, std::move(proj)), n, UnitaryRep(g, std::move(amb))};
}

DilationDefects dilation_defects(const Dilation& dil, const Povm& povm, const std::optional<UnitaryRep>& rep) {
  DilationDefects out;
  const Operator& w = dil.isometry;
  out.isometry = (w.adjoint() * w - identity(int(w.cols()))).norm();
  for (int x = 0; x < povm.cells(); ++x) {
    const Operator& p = dil.ambient_pvm.effect(x);
    out.projections = std::max(out.projections, (p * p - p).norm());
    out.reconstruction = std::max(out.reconstruction, (w.adjoint() * p * w - povm.effect(x)).norm());
  }
  if (dil.ambient_rep && rep) {
    for (int g = 0; g < rep->group().order(); ++g)
      out.intertwining = std::max(out.intertwining, (w * rep->at(g) - dil.ambient_rep->at(g) * w).norm());
  }
  return out;
}

}  // namespace qrf
