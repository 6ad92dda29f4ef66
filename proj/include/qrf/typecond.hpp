#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace qrf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Right-open interval [a, b); a may be −∞ and b may be +∞. Null-set
/// differences (closed against open ends) are not representable.
struct Interval {
  double a = 0.0;
  double b = kInf;
};

/// Nonnegative integer weight or the symbol INFINITE.
struct Weight {
  std::uint64_t count = 0;
  bool infinite = false;
  static Weight finite(std::uint64_t n) { return {n, false}; }
  static Weight unbounded() { return {0, true}; }
  friend bool operator==(const Weight&, const Weight&) = default;
};

struct MultiplicityTerm {
  Weight weight;
  Interval interval;
};

/// m(ξ) = Σ weight·χ_[a,b)(ξ).
class SpectralMultiplicity {
 public:
  SpectralMultiplicity() = default;
  explicit SpectralMultiplicity(std::vector<MultiplicityTerm> terms);
  static SpectralMultiplicity indicator(const std::vector<Interval>& set, Weight w = Weight::finite(1));

  const std::vector<MultiplicityTerm>& terms() const { return terms_; }
  /// Sorted, disjoint, nonzero pieces with merged weights.
  std::vector<MultiplicityTerm> canonical() const;
  Weight at(double xi) const;
  SpectralMultiplicity operator+(const SpectralMultiplicity& other) const;

 private:
  std::vector<MultiplicityTerm> terms_;
};

enum class Verdict { finite, condition_fails, not_evaluated };
/// "FINITE", "CONDITION_FAILS", "NOT_EVALUATED".
const char* to_string(Verdict v);
/// Human-readable reading of a verdict. CONDITION_FAILS never claims the
/// algebra is not finite; the condition is only sufficient.
const char* describe(Verdict v);

struct TypeVerdict {
  Verdict value = Verdict::not_evaluated;
  double integral = kInf;
  double remainder_bound = 0.0;
  double beta = 0.0;
  std::vector<MultiplicityTerm> multiplicity;  // canonical
};

/// ∫ e^{−βξ} m(ξ) dξ in closed form, term by term.
TypeVerdict evaluate_condition(const SpectralMultiplicity& m, double beta);

/// τ(p_K) = ∫_K e^ξ dξ over the union of the intervals; +∞ when K is
/// unbounded above.
double trace_of_band(const std::vector<Interval>& k);
/// τ(1 ⊗ p) = β ∫ e^{−βξ} m(ξ) dξ; +∞ when the integral diverges.
double rescaled_trace(const SpectralMultiplicity& m, double beta);

struct Step {
  double value = 0.0;
  Interval interval;
};
/// ‖f‖₁ for f = Σ value·χ_interval with nonnegative values on bounded steps.
double l1_norm(const std::vector<Step>& f);
/// φ_β(E(f)) = ‖f‖₁ · ∫ e^{−βξ} m(ξ) dξ, with +∞ propagated.
double kms_weight_on_Ef(const std::vector<Step>& f, const SpectralMultiplicity& m, double beta);

struct SeriesPolicy {
  double target = 1e-9;        // stop when the certified tail bound falls below this
  int stall_window = 16;       // consecutive ratios ≥ 1 before CONDITION_FAILS
  int l_max = 100000;          // hard cap; NOT_EVALUATED if reached
};

struct So3Partition {
  SpectralMultiplicity multiplicity;  // Σ (2l+1)² χ_[E_l, ∞) over the summed l
  double value = 0.0;                 // Σ (2l+1)² e^{−βE_l}
  double remainder_bound = 0.0;
  int terms = 0;
  TypeVerdict verdict;
};

/// Energies l ↦ E_l (+∞ marks an absent level).
So3Partition so3_partition_multiplicity(const std::function<double(int)>& energy, double beta,
                                        const SeriesPolicy& policy = {});
/// Finite list of levels; levels past the end are absent.
So3Partition so3_partition_multiplicity(const std::vector<double>& energies, double beta,
                                        const SeriesPolicy& policy = {});

/// m = χ_V for a finite union V.
TypeVerdict desitter_example1(const std::vector<Interval>& v, double beta);

}  // namespace qrf
