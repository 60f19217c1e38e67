#include "cyclevol/volhat.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cyclevol;
using namespace cyclevol::volhat;
using ring::CycleClass;
using ring::DivisorClass;
using ring::VarietySpec;

namespace {

CycleClass curve_p1p1(long a, long b) {
  const VarietySpec x{1, 1};
  return CycleClass::monomial(x, {1, 0}, b) + CycleClass::monomial(x, {0, 1}, a);
}

// Brute force: maximize A^n over the geometric grid x_i = top * q^j_i, j_i < steps,
// with feasibility checked exactly.
double grid_sup(const CycleClass& alpha, int steps, double top, double q) {
  const VarietySpec& x = alpha.variety();
  const int r = x.factors();
  double best = 0;
  std::vector<int> idx(r, 1);
  while (true) {
    std::vector<Rational> coords;
    for (int i : idx) coords.push_back(from_double(top * std::pow(q, i)));
    const DivisorClass a(x, coords);
    if (ring::is_pseudoeffective(alpha - ring::divisor_power(a, alpha.codim())))
      best = std::max(best, ring::vol_divisor(a).get_d());
    int i = 0;
    while (i < r && idx[i] == steps) idx[i++] = 1;
    if (i == r) break;
    ++idx[i];
  }
  return best;
}

// Closed form of the dual problem for curves: with c_i the coefficient of
// H^{dims - e_i}, the minimum of (sum x_i c_i)^n / (M prod x_i^{n_i}) is attained at
// x_i proportional to n_i / c_i, giving (n^n prod (c_i/n_i)^{n_i} / M)^{1/(n-1)}.
double xiao_closed_form(const CycleClass& alpha) {
  const VarietySpec& x = alpha.variety();
  const int n = x.dimension();
  double log_v = n * std::log(double(n)) - std::log(multinomial(x.dims()).get_d());
  for (int i = 0; i < x.factors(); ++i) {
    std::vector<int> e = x.dims();
    e[i] -= 1;
    Rational c = 0;
    for (const auto& [m, q] : alpha.terms())
      if (m.exponents == e) c = q;
    log_v += x.dims()[i] * std::log(c.get_d() / x.dims()[i]);
  }
  return std::exp(log_v / (n - 1));
}

}  // namespace

TEST_CASE("sup examples") {
  const OptimizationResult r = volhat_sup(curve_p1p1(1, 1));
  CHECK(r.status == Status::converged);
  REQUIRE(r.exact);
  CHECK(*r.exact == PowerProduct(2));
  CHECK(r.value == doctest::Approx(2));
  REQUIRE(r.argopt);
  CHECK(ring::is_pseudoeffective(curve_p1p1(1, 1) - ring::divisor_power(*r.argopt, 1)));

  const OptimizationResult neg = volhat_sup(curve_p1p1(1, -1));
  CHECK(neg.status == Status::infeasible);
  CHECK(neg.value == 0);

  const OptimizationResult edge = volhat_sup(curve_p1p1(1, 0));
  CHECK(edge.value == 0);
  CHECK(edge.status != Status::converged);

  for (int n = 2; n <= 5; ++n) {
    const VarietySpec pn{n};
    const OptimizationResult l = volhat_sup(CycleClass::monomial(pn, {n - 1}));
    REQUIRE(l.exact);
    CHECK(*l.exact == PowerProduct(1));
  }
  const VarietySpec p3{3};
  const OptimizationResult two = volhat_sup(CycleClass::monomial(p3, {2}, 2));
  REQUIRE(two.exact);
  CHECK(*two.exact == PowerProduct::power(2, ratio(3, 2)));

  const VarietySpec p2{2};
  for (int d = 1; d <= 6; ++d) {
    const OptimizationResult r2 = volhat_sup(CycleClass::monomial(p2, {1}, d));
    REQUIRE(r2.exact);
    CHECK(*r2.exact == PowerProduct(d * d));
  }

  const VarietySpec p2p1{2, 1};
  const OptimizationResult b = volhat_sup(DivisorClass(p2p1, {2, 3}).to_class());
  REQUIRE(b.exact);
  CHECK(*b.exact == PowerProduct(36));

  CHECK_THROWS_AS(volhat_sup(CycleClass::fundamental(p2)), std::invalid_argument);
}

TEST_CASE("sup equals vol(B) on complete intersection classes") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(1, 8);
  std::uniform_int_distribution<int> den(1, 3);
  for (const VarietySpec& x : {VarietySpec{3}, VarietySpec{1, 1}, VarietySpec{1, 2}, VarietySpec{1, 1, 1},
                               VarietySpec{2, 2}}) {
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<Rational> coords;
      for (int i = 0; i < x.factors(); ++i) coords.push_back(ratio(num(rng), den(rng)));
      const DivisorClass b(x, coords);
      for (int c = 1; c <= x.dimension(); ++c) {
        const OptimizationResult r = volhat_sup(ring::divisor_power(b, c));
        REQUIRE(r.exact);
        CHECK(*r.exact == PowerProduct(ring::vol_divisor(b)));
      }
    }
  }
}

TEST_CASE("sup agrees with a brute-force grid") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> num(1, 9);
  for (const VarietySpec& x : {VarietySpec{1, 1}, VarietySpec{1, 2}, VarietySpec{2, 2}}) {
    for (int trial = 0; trial < 4; ++trial) {
      for (int c = 1; c < x.dimension(); ++c) {
        CycleClass::Terms terms;
        for (const auto& m : ring::basis(x, c)) terms[m] = num(rng);
        const CycleClass alpha(x, c, terms);
        const OptimizationResult r = volhat_sup(alpha);
        REQUIRE(r.exact);
        const double grid = grid_sup(alpha, 250, 10, 0.98);
        CHECK(grid <= r.exact->approx() * (1 + 1e-12));
        CHECK(grid >= r.exact->approx() * 0.9);
        REQUIRE(r.witness);
        CHECK(*r.witness <= *r.exact);
      }
    }
  }
}

TEST_CASE("xiao formulation") {
  for (long a = 1; a <= 4; ++a)
    for (long b = 1; b <= 4; ++b) {
      const OptimizationResult r = volhat_curve_xiao(curve_p1p1(a, b));
      CHECK(r.value == doctest::Approx(2.0 * a * b).epsilon(1e-9));
      REQUIRE(r.argopt);
      // the minimizer balances the two pairings
      const auto& c = r.argopt->coords();
      CHECK(c[0] * a == c[1] * b);
    }
  const VarietySpec p3{3};
  const OptimizationResult l = volhat_curve_xiao(CycleClass::monomial(p3, {2}));
  CHECK(l.value == doctest::Approx(1));
  const OptimizationResult edge = volhat_curve_xiao(curve_p1p1(1, 0));
  CHECK(edge.status == Status::boundary);
  CHECK(edge.value == doctest::Approx(0).epsilon(1e-6));
  const OptimizationResult zero = volhat_curve_xiao(CycleClass::zero(VarietySpec{1, 1}, 1));
  CHECK(zero.value == 0);
}

TEST_CASE("xiao matches the closed form") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> num(1, 12);
  for (const VarietySpec& x : {VarietySpec{1, 2}, VarietySpec{1, 1, 1}, VarietySpec{2, 3}, VarietySpec{1, 1, 2}}) {
    for (int trial = 0; trial < 6; ++trial) {
      const int n = x.dimension();
      CycleClass::Terms terms;
      for (const auto& m : ring::basis(x, n - 1)) terms[m] = num(rng);
      const CycleClass alpha(x, n - 1, terms);
      const OptimizationResult r = volhat_curve_xiao(alpha);
      CHECK(r.value == doctest::Approx(xiao_closed_form(alpha)).epsilon(1e-7));
      REQUIRE(r.witness);
      CHECK(r.witness->approx() >= r.value * (1 - 1e-9));
    }
  }
}

TEST_CASE("weak duality, homogeneity, monotonicity, positivity") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> num(0, 7);
  const VarietySpec x{1, 1, 1};
  for (int trial = 0; trial < 20; ++trial) {
    CycleClass::Terms terms;
    for (const auto& m : ring::basis(x, 2)) terms[m] = num(rng) + 1;
    const CycleClass alpha(x, 2, terms);
    const DualityResult d = weak_duality_check(alpha);
    CHECK(d.holds);
    CHECK(d.gap <= 1e-6 * (1 + d.inf_value));

    const CycleClass bigger = alpha + CycleClass::monomial(x, {1, 1, 0}, num(rng));
    CHECK(volhat_sup(bigger).value >= volhat_sup(alpha).value * (1 - 1e-12));
    CHECK(volhat_sup(alpha).value > 0);
  }

  const VarietySpec p3{3};
  const CycleClass l = CycleClass::monomial(p3, {2});
  const HomogeneityResult h2 = volhat_homogeneity_check(l, 2);
  CHECK(h2.holds);
  CHECK(h2.scaled == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(volhat_homogeneity_check(curve_p1p1(2, 3), 1).holds);
  const HomogeneityResult half = volhat_homogeneity_check(CycleClass::monomial(p3, {2}, 2), ratio(1, 2));
  CHECK(half.holds);
  CHECK(half.scaled == doctest::Approx(1));

  // vanishing as alpha approaches the boundary
  double prev = 1e9;
  for (int j = 1; j <= 8; ++j) {
    const CycleClass a = CycleClass::monomial(VarietySpec{1, 1}, {1, 0}) +
                         CycleClass::monomial(VarietySpec{1, 1}, {0, 1}, ratio(1, 1 << j));
    const double v = volhat_sup(a).value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("Khovanskii-Teissier") {
  const VarietySpec x{1, 1};
  const KtResult ab = kt_check(DivisorClass(x, {1, 2}), DivisorClass(x, {2, 1}), 1);
  CHECK(ab.lhs == 5);
  CHECK(ab.rhs == PowerProduct(4));
  CHECK(ab.holds);
  const DivisorClass a(VarietySpec{2, 1}, {3, 1});
  const KtResult same = kt_check(a, a, 2);
  CHECK(same.holds);
  CHECK(same.rhs == PowerProduct(same.lhs));
  CHECK(same.lhs == ring::vol_divisor(a));

  std::mt19937 rng(37);
  std::uniform_int_distribution<int> num(0, 10);
  for (const VarietySpec& v : {VarietySpec{1, 1, 1}, VarietySpec{2, 3}, VarietySpec{1, 1, 3}}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Rational> ca, cb;
      for (int i = 0; i < v.factors(); ++i) {
        ca.push_back(num(rng));
        cb.push_back(num(rng));
      }
      const int k = std::uniform_int_distribution<int>(0, v.dimension())(rng);
      CHECK(kt_check(DivisorClass(v, ca), DivisorClass(v, cb), k).holds);
    }
  }
}
