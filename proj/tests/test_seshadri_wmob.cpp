#include "cyclevol/seshadri_wmob.hpp"
#include "cyclevol/volhat.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cyclevol;
using namespace cyclevol::seshadri;
using ring::CycleClass;
using ring::DivisorClass;
using ring::VarietySpec;

namespace {

const VarietySpec p3{3};
const DivisorClass h3(p3, {1});
CycleClass line(const Rational& c = 1) { return CycleClass::monomial(p3, {2}, c); }

}  // namespace

TEST_CASE("seshadri interval examples") {
  const VarietySpec p2{2};
  const DivisorClass h2(p2, {1});
  const SeshadriEstimate four = seshadri_interval(4, h2);
  CHECK(four.t == 2);
  CHECK(four.lo == ratio(1, 2));
  CHECK(four.hi == PowerProduct(ratio(1, 2)));
  CHECK(four.collapsed);

  for (int n = 1; n <= 4; ++n) {
    const SeshadriEstimate one = seshadri_interval(1, DivisorClass(VarietySpec{n}, {1}));
    CHECK(one.t == 1);
    CHECK(one.lo == 1);
    CHECK(one.collapsed);
  }

  const SeshadriEstimate five = seshadri_interval(5, h2);
  CHECK(five.t == 3);
  CHECK(five.lo == ratio(1, 3));
  CHECK(five.hi == PowerProduct::power(5, ratio(-1, 2)));
  CHECK_FALSE(five.collapsed);
}

TEST_CASE("seshadri interval validity and minimal t") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<long> bdist(1, 1000000);
  std::uniform_int_distribution<int> coord(1, 5);
  for (const VarietySpec& x : {VarietySpec{2}, VarietySpec{1, 1}, VarietySpec{1, 2}, VarietySpec{1, 1, 1},
                               VarietySpec{2, 3}}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Rational> coords;
      for (int i = 0; i < x.factors(); ++i) coords.push_back(coord(rng));
      const DivisorClass a(x, coords);
      const Rational vol = ring::vol_divisor(a);
      const Integer b = bdist(rng);
      const SeshadriEstimate e = seshadri_interval(b, a);
      const int n = x.dimension();
      CHECK(Rational(b) <= Rational(pow(e.t, n)) * vol);
      if (e.t > 1) CHECK(Rational(b) > Rational(pow(Integer(e.t - 1), n)) * vol);
      CHECK(PowerProduct(e.lo) <= e.hi);
      CHECK(e.collapsed == (Rational(b) == Rational(pow(e.t, n)) * vol));
    }
  }
}

TEST_CASE("wmc_upper") {
  const WmcUpper w = wmc_upper(line(), h3);
  CHECK(w.volume_branch == PowerProduct(1));
  CHECK(w.growth_branch == PowerProduct::power(2, ratio(3, 2)));
  CHECK(w.value == w.growth_branch);
  CHECK(w.value.decimal(4, Rounding::up) == "2.829");
  CHECK(wmc_upper(ring::divisor_power(h3, 2), h3).value == w.value);
  const WmcUpper zero = wmc_upper(CycleClass::zero(p3, 2), h3);
  CHECK(zero.growth_branch.is_zero());
  CHECK(zero.value == PowerProduct(1));

  // monotone under adding effective classes
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> num(0, 9);
  const VarietySpec x{1, 1, 1};
  const DivisorClass a = ring::hyperplane_sum(x);
  for (int trial = 0; trial < 30; ++trial) {
    CycleClass::Terms t1, t2;
    for (const auto& m : ring::basis(x, 2)) {
      t1[m] = num(rng);
      t2[m] = num(rng);
    }
    const CycleClass alpha(x, 2, t1);
    const CycleClass extra(x, 2, t2);
    CHECK(wmc_upper(alpha, a).value <= wmc_upper(alpha + extra, a).value);
    // homogeneity of the growth branch with exponent n/(n-k) = 3/2
    CHECK(wmc_upper(alpha * 4, a).growth_branch == wmc_upper(alpha, a).growth_branch * PowerProduct(8));
  }
}

TEST_CASE("weighted precise bounds") {
  const mobility::BoundReport v1 = wmc_upper_precise(line(), h3, 9, 1);
  REQUIRE(v1.applicable());
  CHECK(*v1.value == PowerProduct(110592));
  CHECK_FALSE(wmc_upper_precise(line(), h3, 8, 1).applicable());
  CHECK_FALSE(wmc_upper_precise(line(), h3, 9, 2).applicable());
  const mobility::BoundReport small = wmc_upper_precise(line(ratio(1, 16)), h3, 1, 1);
  CHECK(small.applicable());
  const mobility::BoundReport v3 = wmc_upper_precise(line(ratio(1, 16)), h3, 1, 3, Integer(1));
  CHECK(v3.applicable());
  CHECK(*v3.value <= *small.value);
}

TEST_CASE("complete intersection sandwich") {
  const WmobCiBounds b = wmob_ci_bounds(h3, 1, 50);
  CHECK(b.points == 125000);
  CHECK(b.class_scale == 2500);
  CHECK(b.ratio == PowerProduct::power(ratio(49, 50), ratio(3, 2)));
  CHECK(b.upper == 1);
  const double gap = 1 - std::pow(0.98, 1.5);
  CHECK(b.relative_gap(Rounding::up).get_d() == doctest::Approx(gap).epsilon(1e-12));
  CHECK(b.relative_gap(Rounding::down) <= b.relative_gap(Rounding::up));
  CHECK(std::abs(b.relative_gap(Rounding::up).get_d() - 0.0298) < 1e-4);

  CHECK_THROWS_AS(wmob_ci_bounds(h3, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(wmob_ci_bounds(h3, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(wmob_ci_bounds(h3, 3, 3), std::invalid_argument);

  // k = n - 1 uses exponent n(n-1)
  const WmobCiBounds top = wmob_ci_bounds(h3, 2, 3);
  CHECK(top.ratio == PowerProduct(pow(ratio(2, 3), 6)));

  for (const DivisorClass& h : {h3, DivisorClass(VarietySpec{1, 1}, {1, 2}), DivisorClass(VarietySpec{1, 1, 1}, {1, 1, 2})}) {
    const int n = h.variety().dimension();
    for (int k = 1; k < n; ++k) {
      PowerProduct prev;
      for (int t = 2; t <= 30; ++t) {
        const WmobCiBounds w = wmob_ci_bounds(h, k, t);
        CHECK(w.lower <= PowerProduct(w.upper));
        CHECK(PowerProduct(w.upper) <= w.envelope);
        CHECK(prev <= w.lower);
        prev = w.lower;
      }
    }
  }
}

TEST_CASE("weighted mobility agrees with volhat on complete intersections") {
  for (const DivisorClass& h : {DivisorClass(VarietySpec{2}, {3}), DivisorClass(VarietySpec{1, 1}, {2, 5}),
                                DivisorClass(VarietySpec{1, 1, 1}, {1, 2, 3}), h3}) {
    const int n = h.variety().dimension();
    const WmobCiBounds w = wmob_ci_bounds(h, n - 1, 2);
    const volhat::OptimizationResult r = volhat::volhat_sup(ring::divisor_power(h, 1));
    REQUIRE(r.exact);
    CHECK(*r.exact == PowerProduct(w.upper));
  }
}

TEST_CASE("wmob of divisors") {
  CHECK(wmob_divisor(DivisorClass(VarietySpec{1, 1}, {1, 1})) == 2);
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 5; ++d) CHECK(wmob_divisor(DivisorClass(VarietySpec{n}, {d})) == pow(Rational(d), n));
  CHECK_THROWS_AS(wmob_divisor(DivisorClass(VarietySpec{1, 1}, {1, 0})), std::invalid_argument);
}
