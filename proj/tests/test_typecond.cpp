#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrf/opcore.hpp"
#include "qrf/typecond.hpp"

using namespace qrf;

namespace {

SpectralMultiplicity random_multiplicity(std::mt19937_64& rng, bool semibounded, int n = 4) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0), len(0.1, 2.0);
  std::uniform_int_distribution<int> w(0, 4), kind(0, 2);
  std::vector<MultiplicityTerm> terms;
  for (int i = 0; i < n; ++i) {
    const double a = pos(rng);
    const double b = semibounded && kind(rng) == 0 ? kInf : a + len(rng);
    terms.push_back({Weight::finite(w(rng)), {a, b}});
  }
  return SpectralMultiplicity(terms);
}

double pointwise(const SpectralMultiplicity& m, double xi) {
  const Weight w = m.at(xi);
  return w.infinite ? kInf : static_cast<double>(w.count);
}

// Long-double partial sum well past the point where the terms vanish.
double so3_reference(double beta) {
  long double s = 0.0L;
  for (int l = 0; l < 60; ++l) s += (2.0L * l + 1) * (2.0L * l + 1) * std::exp(-(long double)beta * l * (l + 1));
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("closed-form integrals") {
  const auto half = SpectralMultiplicity::indicator({{0.0, kInf}});
  const TypeVerdict one = evaluate_condition(half, 1.0);
  CHECK(one.value == Verdict::finite);
  CHECK(one.integral == 1.0);
  CHECK(evaluate_condition(half, 2.0).integral == 0.5);

  const TypeVerdict inf = evaluate_condition(SpectralMultiplicity({{Weight::unbounded(), {0.0, 1.0}}}), 1.0);
  CHECK(inf.value == Verdict::condition_fails);
  CHECK(inf.integral == kInf);
  CHECK(std::string(to_string(inf.value)) == "CONDITION_FAILS");
  CHECK(std::string(describe(inf.value)) == "sufficient condition fails");

  // A zero weight contributes nothing, even on a lower-unbounded interval.
  CHECK(evaluate_condition(SpectralMultiplicity({{Weight::finite(0), {-kInf, 0.0}}}), 1.0).value == Verdict::finite);
  CHECK(evaluate_condition(SpectralMultiplicity(), 1.0).integral == 0.0);

  CHECK_THROWS_AS(evaluate_condition(half, 0.0), Error);
  CHECK_THROWS_AS(evaluate_condition(half, -1.0), Error);
  CHECK_THROWS_AS(SpectralMultiplicity({{Weight::finite(1), {1.0, 1.0}}}), Error);
  CHECK_THROWS_AS(evaluate_condition(SpectralMultiplicity({{Weight::finite(1), {-800.0, 0.0}}}), 1.0), Error);
}

TEST_CASE("canonical form merges overlaps") {
  const SpectralMultiplicity m({{Weight::finite(1), {0.0, 2.0}}, {Weight::finite(2), {1.0, 3.0}},
                                {Weight::finite(1), {3.0, 4.0}}, {Weight::finite(1), {2.0, 3.0}}});
  const auto c = m.canonical();
  REQUIRE(c.size() == 3);
  CHECK(c[0].weight == Weight::finite(1));
  CHECK(c[0].interval.a == 0.0);
  CHECK(c[0].interval.b == 1.0);
  CHECK(c[1].weight == Weight::finite(3));
  CHECK(c[1].interval.a == 1.0);
  CHECK(c[1].interval.b == 3.0);
  CHECK(c[2].weight == Weight::finite(1));
  // [3,4) has weight 1, distinct from its left neighbour.
  CHECK(m.at(3.5) == Weight::finite(1));
  CHECK(m.at(4.0) == Weight::finite(0));
  CHECK(m.at(-0.1) == Weight::finite(0));
}

TEST_CASE("trace formulas") {
  CHECK(trace_of_band({{0.0, 1.0}}) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(trace_of_band({}) == 0.0);
  CHECK(trace_of_band({{0.0, kInf}}) == kInf);
  CHECK(trace_of_band({{-kInf, 0.0}}) == 1.0);
  // Overlapping pieces count once.
  CHECK(trace_of_band({{0.0, 1.0}, {0.5, 2.0}}) == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-15));
  CHECK(trace_of_band({{0.0, 1.0}, {2.0, 3.0}}) ==
        doctest::Approx(std::exp(1.0) - 1.0 + std::exp(3.0) - std::exp(2.0)).epsilon(1e-15));

  CHECK(rescaled_trace(SpectralMultiplicity::indicator({{0.0, kInf}}), 1.0) == 1.0);
  CHECK(rescaled_trace(SpectralMultiplicity::indicator({{-kInf, kInf}}), 1.0) == kInf);
  CHECK(rescaled_trace(SpectralMultiplicity::indicator({{0.0, kInf}}, Weight::finite(5)), 3.0) ==
        doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("KMS weight on smeared spectral projections") {
  const auto half = SpectralMultiplicity::indicator({{0.0, kInf}});
  CHECK(kms_weight_on_Ef({{1.0, {0.0, 2.0}}}, half, 1.0) == 2.0);
  CHECK(kms_weight_on_Ef({}, half, 1.0) == 0.0);
  CHECK(kms_weight_on_Ef({{0.0, {0.0, 1.0}}}, half, 1.0) == 0.0);
  const auto thrice = SpectralMultiplicity::indicator({{0.0, kInf}}, Weight::finite(3));
  // Term-sum oracle: three unit multiplicities added separately.
  const auto summed = half + half + half;
  CHECK(kms_weight_on_Ef({{1.0, {0.0, 1.0}}}, thrice, 1.0) == 3.0);
  CHECK(kms_weight_on_Ef({{1.0, {0.0, 1.0}}}, summed, 1.0) == doctest::Approx(3.0).epsilon(1e-15));

  CHECK(kms_weight_on_Ef({{2.0, {0.0, 1.0}}, {0.5, {3.0, 5.0}}}, half, 2.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(kms_weight_on_Ef({{1.0, {0.0, 1.0}}}, SpectralMultiplicity::indicator({{-kInf, 0.0}}), 1.0) == kInf);
  CHECK(kms_weight_on_Ef({}, SpectralMultiplicity::indicator({{-kInf, 0.0}}), 1.0) == 0.0);

  CHECK_THROWS_WITH_AS(kms_weight_on_Ef({{-1.0, {0.0, 1.0}}}, half, 1.0),
                       "kms_weight_on_Ef: step function must be nonnegative", Error);
  CHECK_THROWS_AS(kms_weight_on_Ef({{1.0, {0.0, kInf}}}, half, 1.0), Error);
}

TEST_CASE("additivity and monotonicity") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> beta(0.2, 3.0);
  for (int k = 0; k < 200; ++k) {
    const auto m1 = random_multiplicity(rng, true), m2 = random_multiplicity(rng, true);
    const double b = beta(rng);
    const double i1 = evaluate_condition(m1, b).integral, i2 = evaluate_condition(m2, b).integral;
    const double i12 = evaluate_condition(m1 + m2, b).integral;
    CHECK(i12 == doctest::Approx(i1 + i2).epsilon(1e-12));
    CHECK(i12 >= i1);
    CHECK(i12 >= i2);
    // The canonical form describes the same function.
    const SpectralMultiplicity c(m1.canonical());
    CHECK(evaluate_condition(c, b).integral == doctest::Approx(i1).epsilon(1e-12));
  }
  const auto finite = SpectralMultiplicity::indicator({{0.0, 1.0}});
  const auto infinite = SpectralMultiplicity({{Weight::unbounded(), {0.5, 0.7}}});
  CHECK(evaluate_condition(finite + infinite, 1.0).value == Verdict::condition_fails);
}

TEST_CASE("closed form agrees with trapezoid quadrature") {
  std::mt19937_64 rng(103);
  for (int k = 0; k < 40; ++k) {
    const auto m = random_multiplicity(rng, false);
    const double b = 0.3 + 0.1 * (k % 20);
    double quad = 0.0;
    // Integrate piece by piece so the integrand is smooth on each panel.
    // Richardson-extrapolated trapezoid keeps the panel count, and so the
    // summation round-off, small.
    for (const auto& t : m.canonical()) {
      auto f = [b](double xi) { return std::exp(-b * xi); };
      const double coarse = oracle::trapezoid(f, t.interval.a, t.interval.b, 2000);
      const double fine = oracle::trapezoid(f, t.interval.a, t.interval.b, 4000);
      quad += static_cast<double>(t.weight.count) * (4.0 * fine - coarse) / 3.0;
    }
    CHECK(std::abs(evaluate_condition(m, b).integral - quad) < 1e-7);
    // Pointwise values survive canonicalisation.
    for (double xi = -3.0; xi < 5.0; xi += 0.37) CHECK(pointwise(SpectralMultiplicity(m.canonical()), xi) == pointwise(m, xi));
  }
}

TEST_CASE("semibounded multiplicities are finite for every beta") {
  std::mt19937_64 rng(107);
  for (int k = 0; k < 100; ++k) {
    const auto m = random_multiplicity(rng, true, 6);
    for (double b : {1e-3, 0.1, 1.0, 7.5, 40.0}) {
      const TypeVerdict v = evaluate_condition(m, b);
      CHECK(v.value == Verdict::finite);
      CHECK(std::isfinite(v.integral));
    }
  }
}

TEST_CASE("SO(3) partition sums") {
  const So3Partition p = so3_partition_multiplicity([](int l) { return double(l) * (l + 1); }, 1.0);
  CHECK(p.verdict.value == Verdict::finite);
  CHECK(p.remainder_bound <= 1e-9);
  const double ref = so3_reference(1.0);
  CHECK(std::abs(p.value - ref) <= p.remainder_bound + 1e-15);
  // Hand-written leading partial sum.
  const double head = 1 + 9 * std::exp(-2.0) + 25 * std::exp(-6.0) + 49 * std::exp(-12.0);
  CHECK(p.value - head >= 0.0);
  CHECK(p.value - head < 81 * std::exp(-20.0) * 1.001);
  // The multiplicity reproduces the series through the closed-form integral.
  CHECK(rescaled_trace(p.multiplicity, 1.0) == doctest::Approx(p.value).epsilon(1e-14));
  CHECK(p.multiplicity.at(-0.5) == Weight::finite(0));
  CHECK(p.multiplicity.at(0.0) == Weight::finite(1));
  CHECK(p.multiplicity.at(2.0) == Weight::finite(10));

  for (double b : {0.5, 2.0, 0.05}) {
    const So3Partition q = so3_partition_multiplicity([](int l) { return double(l) * (l + 1); }, b);
    CHECK(q.verdict.value == Verdict::finite);
    CHECK(std::abs(q.value - so3_reference(b)) <= q.remainder_bound + 1e-12 * q.value);
  }

  const double beta = 1.3;
  const So3Partition flat = so3_partition_multiplicity([beta](int l) { return 2.0 / beta * std::log(2.0 * l + 1); }, beta);
  CHECK(flat.verdict.value == Verdict::condition_fails);
  CHECK(flat.value == kInf);
  CHECK(flat.terms == 16);

  const So3Partition single = so3_partition_multiplicity(std::vector<double>{0.0}, 1.0);
  CHECK(single.verdict.value == Verdict::finite);
  CHECK(single.value == 1.0);
  CHECK(single.remainder_bound == 0.0);

  SeriesPolicy tight;
  tight.l_max = 3;
  const So3Partition capped = so3_partition_multiplicity([](int l) { return 0.01 * l; }, 1.0, tight);
  CHECK(capped.verdict.value == Verdict::not_evaluated);
  CHECK(capped.terms == 3);
}

TEST_CASE("SO(3) sum is independent of the summation order") {
  const So3Partition p = so3_partition_multiplicity([](int l) { return double(l) * (l + 1); }, 1.0);
  std::vector<double> terms;
  for (int l = 0; l < p.terms; ++l) terms.push_back((2.0 * l + 1) * (2.0 * l + 1) * std::exp(-double(l) * (l + 1)));
  std::mt19937_64 rng(109);
  for (int k = 0; k < 20; ++k) {
    std::shuffle(terms.begin(), terms.end(), rng);
    double s = 0.0;
    for (double t : terms) s += t;
    CHECK(std::abs(s - p.value) <= 1e-9);
  }
  // Supplying the same levels as a list reproduces the formula run.
  std::vector<double> levels;
  for (int l = 0; l < 40; ++l) levels.push_back(double(l) * (l + 1));
  const So3Partition listed = so3_partition_multiplicity(levels, 1.0);
  CHECK(listed.value == p.value);
  CHECK(listed.terms == p.terms);
}

TEST_CASE("single-interval spectra") {
  const TypeVerdict v = desitter_example1({{0.0, kInf}}, 1.0);
  CHECK(v.value == Verdict::finite);
  CHECK(v.integral == 1.0);
  CHECK(desitter_example1({{-kInf, 0.0}}, 1.0).value == Verdict::condition_fails);
  CHECK(desitter_example1({{-kInf, kInf}}, 1.0).value == Verdict::condition_fails);
  const double window = desitter_example1({{-1.0, 2.0}}, 1.0).integral;
  CHECK(window == doctest::Approx(std::exp(1.0) - std::exp(-2.0)).epsilon(1e-15));
  CHECK(std::abs(window - oracle::trapezoid([](double x) { return std::exp(-x); }, -1.0, 2.0, 20000)) < 1e-7);
}
