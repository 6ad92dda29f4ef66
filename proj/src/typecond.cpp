#include "qrf/typecond.hpp"

#include <algorithm>
#include <cmath>

#include "qrf/opcore.hpp"

namespace qrf {

namespace {

void check_interval(const Interval& iv, const char* who) {
  if (std::isnan(iv.a) || std::isnan(iv.b) || !(iv.a < iv.b))
    throw Error(std::string(who) + ": interval needs a < b");
}

void check_beta(double beta, const char* who) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(std::string(who) + ": β must be positive");
}

Weight add(Weight x, Weight y) {
  if (x.infinite || y.infinite) return Weight::unbounded();
  return Weight::finite(x.count + y.count);
}

// ∫_a^b e^{−βξ} dξ for finite a; b may be +∞.
double exp_integral(double a, double b, double beta) {
  return std::exp(-beta * a) * -std::expm1(-beta * (b - a)) / beta;
}

// Sorted union of intervals.
std::vector<Interval> merged(std::vector<Interval> ivs) {
  std::sort(ivs.begin(), ivs.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  std::vector<Interval> out;
  for (const auto& iv : ivs) {
    if (!out.empty() && iv.a <= out.back().b) out.back().b = std::max(out.back().b, iv.b);
    else out.push_back(iv);
  }
  return out;
}

}  // namespace

SpectralMultiplicity::SpectralMultiplicity(std::vector<MultiplicityTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) check_interval(t.interval, "spectral multiplicity");
}

SpectralMultiplicity SpectralMultiplicity::indicator(const std::vector<Interval>& set, Weight w) {
  std::vector<MultiplicityTerm> terms;
  for (const auto& iv : set) check_interval(iv, "spectral multiplicity");
  for (const auto& iv : merged(set)) terms.push_back({w, iv});
  return SpectralMultiplicity(std::move(terms));
}

std::vector<MultiplicityTerm> SpectralMultiplicity::canonical() const {
  std::vector<double> cuts;
  for (const auto& t : terms_) {
    cuts.push_back(t.interval.a);
    cuts.push_back(t.interval.b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<MultiplicityTerm> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Weight w;
    for (const auto& t : terms_)
      if (t.interval.a <= cuts[i] && cuts[i + 1] <= t.interval.b) w = add(w, t.weight);
    if (!w.infinite && w.count == 0) continue;
    if (!out.empty() && out.back().interval.b == cuts[i] && out.back().weight == w) out.back().interval.b = cuts[i + 1];
    else out.push_back({w, {cuts[i], cuts[i + 1]}});
  }
  return out;
}

Weight SpectralMultiplicity::at(double xi) const {
  Weight w;
  for (const auto& t : terms_)
    if (t.interval.a <= xi && xi < t.interval.b) w = add(w, t.weight);
  return w;
}

SpectralMultiplicity SpectralMultiplicity::operator+(const SpectralMultiplicity& other) const {
  std::vector<MultiplicityTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return SpectralMultiplicity(std::move(all));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::finite: return "FINITE";
    case Verdict::condition_fails: return "CONDITION_FAILS";
    case Verdict::not_evaluated: return "NOT_EVALUATED";
  }
  return "NOT_EVALUATED";
}

const char* describe(Verdict v) {
  switch (v) {
    case Verdict::finite: return "integral finite: the invariant algebra is finite";
    case Verdict::condition_fails: return "sufficient condition fails";
    case Verdict::not_evaluated: return "not evaluated";
  }
  return "not evaluated";
}

TypeVerdict evaluate_condition(const SpectralMultiplicity& m, double beta) {
  check_beta(beta, "evaluate_condition");
  TypeVerdict v;
  v.beta = beta;
  v.multiplicity = m.canonical();
  double total = 0.0;
  for (const auto& t : v.multiplicity) {
    // Every canonical piece has positive measure and nonzero weight.
    if (t.weight.infinite || t.interval.a == -kInf) {
      v.value = Verdict::condition_fails;
      v.integral = kInf;
      return v;
    }
    total += static_cast<double>(t.weight.count) * exp_integral(t.interval.a, t.interval.b, beta);
  }
  if (!std::isfinite(total)) throw Error("evaluate_condition: finite integral exceeds the double range");
  v.value = Verdict::finite;
  v.integral = total;
  return v;
}

double trace_of_band(const std::vector<Interval>& k) {
  for (const auto& iv : k) check_interval(iv, "trace_of_band");
  double total = 0.0;
  for (const auto& iv : merged(k)) {
    if (iv.b == kInf) return kInf;
    // e^b − e^a, exact also for a = −∞.
    total += std::exp(iv.b) * -std::expm1(iv.a - iv.b);
  }
  return total;
}

double rescaled_trace(const SpectralMultiplicity& m, double beta) {
  const TypeVerdict v = evaluate_condition(m, beta);
  return v.value == Verdict::finite ? beta * v.integral : kInf;
}

double l1_norm(const std::vector<Step>& f) {
  double total = 0.0;
  for (const auto& s : f) {
    if (std::isnan(s.value) || s.value < 0.0) throw Error("kms_weight_on_Ef: step function must be nonnegative");
    check_interval(s.interval, "kms_weight_on_Ef");
    if (s.value == 0.0) continue;
    if (!std::isfinite(s.value) || !std::isfinite(s.interval.a) || !std::isfinite(s.interval.b))
      throw Error("kms_weight_on_Ef: step function must be bounded and integrable");
    total += s.value * (s.interval.b - s.interval.a);
  }
  return total;
}

double kms_weight_on_Ef(const std::vector<Step>& f, const SpectralMultiplicity& m, double beta) {
  const double norm = l1_norm(f);
  const TypeVerdict v = evaluate_condition(m, beta);
  if (norm == 0.0) return 0.0;
  return v.value == Verdict::finite ? norm * v.integral : kInf;
}

So3Partition so3_partition_multiplicity(const std::function<double(int)>& energy, double beta,
                                        const SeriesPolicy& policy) {
  check_beta(beta, "so3_partition_multiplicity");
  So3Partition out;
  std::vector<MultiplicityTerm> terms;
  auto term = [&](int l) {
    const double e = energy(l);
    if (std::isnan(e)) throw Error("so3_partition_multiplicity: energy is NaN at l = " + std::to_string(l));
    if (e == kInf) return 0.0;
    const double w = double(2 * l + 1) * double(2 * l + 1);
    const double t = w * std::exp(-beta * e);
    if (!std::isfinite(t)) throw Error("so3_partition_multiplicity: term overflows at l = " + std::to_string(l));
    return t;
  };

  Verdict verdict = Verdict::not_evaluated;
  double sum = 0.0, bound = kInf;
  int stall = 0;
  double cur = term(0);
  for (int l = 0; l < policy.l_max; ++l) {
    sum += cur;
    const double e = energy(l);
    if (e != kInf) {
      const auto w = static_cast<std::uint64_t>(2 * l + 1) * static_cast<std::uint64_t>(2 * l + 1);
      terms.push_back({Weight::finite(w), {e, kInf}});
    }
    out.terms = l + 1;
    const double next = term(l + 1);
    if (next == 0.0) {
      // Levels are nondecreasing, so an absent level ends the series.
      verdict = Verdict::finite;
      bound = 0.0;
      break;
    }
    if (cur > 0.0) {
      const double r = next / cur;
      // Exactly constant terms can round to a ratio just below 1.
      if (r < 1.0 - 1e-12) {
        stall = 0;
        bound = next / (1.0 - r);
        if (bound < policy.target) {
          verdict = Verdict::finite;
          break;
        }
      } else if (++stall >= policy.stall_window) {
        verdict = Verdict::condition_fails;
        break;
      }
    }
    cur = next;
  }

  out.multiplicity = SpectralMultiplicity(std::move(terms));
  out.value = verdict == Verdict::condition_fails ? kInf : sum;
  out.remainder_bound = verdict == Verdict::finite ? bound : kInf;
  out.verdict.value = verdict;
  out.verdict.beta = beta;
  out.verdict.integral = out.value / beta;
  out.verdict.remainder_bound = out.remainder_bound / beta;
  out.verdict.multiplicity = out.multiplicity.canonical();
  return out;
}

So3Partition so3_partition_multiplicity(const std::vector<double>& energies, double beta, const SeriesPolicy& policy) {
  return so3_partition_multiplicity(
      [&energies](int l) { return l < static_cast<int>(energies.size()) ? energies[l] : kInf; }, beta, policy);
}

TypeVerdict desitter_example1(const std::vector<Interval>& v, double beta) {
  return evaluate_condition(SpectralMultiplicity::indicator(v), beta);
}

}  // namespace qrf
