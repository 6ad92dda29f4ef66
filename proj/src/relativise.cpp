#include "qrf/relativise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qrf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool circle_frame(const QuantumReferenceFrame& frame) { return frame.povm().space().kind() == ValueSpace::Kind::arcs; }

// Number-basis offset k of a frame generator diag(k, k+1, …); throws otherwise.
void require_number_generator(const UnitaryRep& rep) {
  const Operator& n = rep.generator();
  const int d = rep.dim();
  Operator diag_part = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) diag_part(i, i) = n(i, i);
  bool ok = (n - diag_part).norm() < 1e-12;
  for (int i = 1; i < d && ok; ++i) ok = std::abs(n(i, i) - n(i - 1, i - 1) - 1.0) < 1e-12;
  if (!ok) throw Error("relativize: circle frames need the number generator diag(k, k+1, ...)");
}

void check_dims(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame) {
  if (x.rows() != action.dim() || x.cols() != action.dim()) throw Error("relativize: operator does not act on H_S");
  if (!action.rep().group().compatible_with(frame.rep().group()))
    throw Error("relativize: system action and frame belong to different groups");
}

}  // namespace

GroupAction::GroupAction(OperatorAlgebra algebra, UnitaryRep rep) : algebra_(std::move(algebra)), rep_(std::move(rep)) {
  if (algebra_.ambient_dim() != rep_.dim()) throw Error("group action: algebra and representation dimensions differ");
  auto check = [&](const Operator& u) {
    for (const auto& b : algebra_.basis())
      if (algebra_.distance_to_span(u * b * u.adjoint()) > 1e-8)
        throw Error("group action: algebra is not invariant under the representation");
  };
  if (rep_.group().is_finite()) {
    for (int g = 0; g < rep_.group().order(); ++g) check(rep_.at(g));
  } else {
    // Conjugation frequencies are bounded by 2B, so 4B+1 equispaced angles suffice.
    const int nodes = 4 * rep_.group().bandwidth() + 1;
    for (int k = 0; k < nodes; ++k) check(rep_.at_angle(kTwoPi * k / nodes));
  }
}

Operator GroupAction::apply(int g, const Operator& x) const { return rep_.at(g) * x * rep_.at(g).adjoint(); }

Operator GroupAction::apply_angle(double theta, const Operator& x) const {
  const Operator u = rep_.at_angle(theta);
  return u * x * u.adjoint();
}

double stabiliser_defect(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame) {
  if (circle_frame(frame)) return 0.0;
  double worst = 0.0;
  for (int h : frame.povm().space().space().subgroup())
    worst = std::max(worst, (action.apply(h, x) - x).norm());
  return worst / std::max(1.0, x.norm());
}

Operator relativize(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame) {
  check_dims(x, action, frame);
  if (stabiliser_defect(x, action, frame) > 1e-8) throw Error("relativisation requires H-invariant input");
  const int ds = action.dim(), dr = frame.dim();

  if (!circle_frame(frame)) {
    const HomogeneousSpace& hs = frame.povm().space().space();
    Operator out = Operator::Zero(Eigen::Index(ds) * dr, Eigen::Index(ds) * dr);
    for (int s = 0; s < hs.size(); ++s)
      out += tensor_product(action.apply(hs.representative(s), x), frame.povm().effect(s));
    return out;
  }

  const auto& density = frame.povm().phase_density();
  if (!density) throw Error("relativize: circle frames need a phase POVM density");
  require_number_generator(frame.rep());
  const HermitianEig sys = hermitian_eig(action.rep().generator(), 1e-9);
  const Operator xs = sys.vectors.adjoint() * x * sys.vectors;
  // ∫ α(θ, x) ⊗ dE(θ) keeps the modes with s_a − s_b + n − m = 0.
  Operator core = Operator::Zero(Eigen::Index(ds) * dr, Eigen::Index(ds) * dr);
  for (int a = 0; a < ds; ++a)
    for (int b = 0; b < ds; ++b) {
      const long fa = std::lround(sys.values(a)), fb = std::lround(sys.values(b));
      for (int n = 0; n < dr; ++n) {
        const int m = n + static_cast<int>(fa - fb);
        if (m < 0 || m >= dr) continue;
        core(Eigen::Index(a) * dr + n, Eigen::Index(b) * dr + m) = xs(a, b) * (*density)(n, m);
      }
    }
  const Operator v = tensor_product(sys.vectors, identity(dr));
  return v * core * v.adjoint();
}

Operator restrict_to_system(const Operator& x, const DensityState& sigma) {
  const int dr = sigma.dim();
  if (x.rows() % dr != 0 || x.rows() != x.cols()) throw Error("restrict: operator does not factor over the probe space");
  const int ds = static_cast<int>(x.rows()) / dr;
  return partial_trace(x * tensor_product(identity(ds), sigma.op()), ds, dr, Side::second);
}

ExpectedOutcome expected_relative_outcome(const Operator& x, const GroupAction& action,
                                          const QuantumReferenceFrame& frame, const DensityState& omega_s,
                                          const DensityState& omega_r) {
  ExpectedOutcome out;
  const Operator rel = relativize(x, action, frame);
  out.via_relativisation = (tensor_product(omega_s.op(), omega_r.op()) * rel).trace();

  if (!circle_frame(frame)) {
    const HomogeneousSpace& hs = frame.povm().space().space();
    for (int s = 0; s < hs.size(); ++s)
      out.via_sum += omega_s.expectation(action.apply(hs.representative(s), x)) *
                     omega_r.expectation(frame.povm().effect(s));
    return out;
  }
  // Trigonometric integrand of degree ≤ 2B + d_R; equispaced nodes integrate it exactly.
  const Operator& c = *frame.povm().phase_density();
  const int dr = frame.dim();
  const int nodes = 4 * action.rep().group().bandwidth() + 2 * dr + 1;
  for (int k = 0; k < nodes; ++k) {
    const double theta = kTwoPi * k / nodes;
    Complex density = 0.0;
    for (int n = 0; n < dr; ++n)
      for (int m = 0; m < dr; ++m)
        density += omega_r.op()(m, n) * c(n, m) * std::exp(Complex(0.0, (n - m) * theta));
    out.via_sum += omega_s.expectation(action.apply_angle(theta, x)) * density / double(nodes);
  }
  return out;
}

std::vector<double> localization_limit(const Operator& x, const GroupAction& action, const QuantumReferenceFrame& frame,
                                       const std::vector<DensityState>& states) {
  if (!frame.principal()) throw Error("localization_limit: principal frame required");
  const Operator rel = relativize(x, action, frame);
  std::vector<double> out;
  for (const auto& s : states) out.push_back(operator_norm(restrict_to_system(rel, s) - x));
  return out;
}

Operator random_invariant_element(const GroupAction& action, const QuantumReferenceFrame& frame, std::mt19937_64& rng) {
  const Operator y = random_element(action.algebra(), rng);
  if (circle_frame(frame)) return y;
  const auto& h = frame.povm().space().space().subgroup();
  Operator acc = Operator::Zero(y.rows(), y.cols());
  for (int g : h) acc += action.apply(g, y);
  return acc / double(h.size());
}

RelativisationReport check_relativisation(const GroupAction& action, const QuantumReferenceFrame& frame, int samples,
                                          std::mt19937_64& rng, int cp_order) {
  RelativisationReport r;
  const int ds = action.dim();
  const int dsr = ds * frame.dim();
  r.unitality = (relativize(identity(ds), action, frame) - identity(dsr)).norm();

  std::vector<Operator> inputs;
  for (int k = 0; k < samples; ++k) inputs.push_back(random_invariant_element(action, frame, rng));

  std::vector<Operator> joint;
  if (frame.rep().group().is_finite()) {
    for (int g = 0; g < frame.rep().group().order(); ++g)
      joint.push_back(tensor_product(action.rep().at(g), frame.rep().at(g)));
  } else {
    for (double t : {0.3, 1.7, 4.1}) joint.push_back(tensor_product(action.rep().at_angle(t), frame.rep().at_angle(t)));
  }

  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Operator& x = inputs[k];
    const Operator rx = relativize(x, action, frame);
    r.adjoint = std::max(r.adjoint, (relativize(x.adjoint(), action, frame) - rx.adjoint()).norm());
    for (const auto& u : joint) r.invariance = std::max(r.invariance, commutator(rx, u).norm());
    const Operator pos = x.adjoint() * x;
    const Operator rp = relativize(pos, action, frame);
    r.min_eigenvalue = std::min(r.min_eigenvalue, hermitian_eig(0.5 * (rp + rp.adjoint()), 1e-6).values(0));
    const Operator& y = inputs[(k + 1) % inputs.size()];
    r.multiplicativity =
        std::max(r.multiplicativity, operator_norm(rx * relativize(y, action, frame) - relativize(x * y, action, frame)));
  }

  // id_k ⊗ ¥ on Y†Y with Y ∈ M_k ⊗ (invariant inputs).
  r.cp_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < std::max(1, samples / 4); ++trial) {
    std::vector<Operator> blocks;
    for (int i = 0; i < cp_order * cp_order; ++i) blocks.push_back(random_invariant_element(action, frame, rng));
    // Y = Σ e_ij ⊗ y_ij; (Y†Y)_{ij} = Σ_l y_li† y_lj.
    Operator out = Operator::Zero(Eigen::Index(cp_order) * dsr, Eigen::Index(cp_order) * dsr);
    for (int i = 0; i < cp_order; ++i)
      for (int j = 0; j < cp_order; ++j) {
        Operator entry = Operator::Zero(ds, ds);
        for (int l = 0; l < cp_order; ++l) entry += blocks[l * cp_order + i].adjoint() * blocks[l * cp_order + j];
        out.block(Eigen::Index(i) * dsr, Eigen::Index(j) * dsr, dsr, dsr) = relativize(entry, action, frame);
      }
    r.cp_min_eigenvalue = std::min(r.cp_min_eigenvalue, hermitian_eig(0.5 * (out + out.adjoint()), 1e-6).values(0));
  }
  return r;
}

// ---------------------------------------------------------------------------

FrameAssignment::FrameAssignment(GroupAction action, HomogeneousSpace space, std::vector<std::string> classes,
                                 std::vector<Operator> anchors)
    : action_(std::move(action)), space_(std::move(space)), classes_(std::move(classes)), anchors_(std::move(anchors)) {
  if (classes_.size() != anchors_.size()) throw Error("frame assignment: one anchor per class required");
  if (!space_.group().compatible_with(action_.rep().group()))
    throw Error("frame assignment: value space and action belong to different groups");
  for (std::size_t m = 0; m < anchors_.size(); ++m) {
    const Operator& a = anchors_[m];
    if (a.rows() != action_.dim()) throw Error("frame assignment: anchor dimension mismatch");
    for (int h : space_.subgroup())
      if ((action_.apply(h, a) - a).norm() > 1e-8 * std::max(1.0, a.norm()))
        throw Error("frame assignment: anchor for class '" + classes_[m] + "' is not stabiliser-invariant");
  }
}

Operator FrameAssignment::table(int coset, int cls) const {
  return action_.apply(space_.representative(coset), anchors_.at(cls));
}

double FrameAssignment::equivariance_defect() const {
  double worst = 0.0;
  for (std::size_t m = 0; m < anchors_.size(); ++m)
    for (int g = 0; g < space_.group().order(); ++g)
      for (int s = 0; s < space_.size(); ++s)
        worst = std::max(worst, (table(space_.act(g, s), int(m)) - action_.apply(g, table(s, int(m)))).norm());
  return worst;
}

Operator FrameAssignment::measured_observable(int cls, const QuantumReferenceFrame& frame) const {
  if (frame.povm().space().kind() != ValueSpace::Kind::points || frame.povm().cells() != space_.size())
    throw Error("frame assignment: frame value space does not match the assignment");
  const int ds = action_.dim(), dr = frame.dim();
  Operator out = Operator::Zero(Eigen::Index(ds) * dr, Eigen::Index(ds) * dr);
  for (int s = 0; s < space_.size(); ++s) out += tensor_product(table(s, cls), frame.povm().effect(s));
  return out;
}

}  // namespace qrf
