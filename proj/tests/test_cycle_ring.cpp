#include "cyclevol/cycle_ring.hpp"

#include <doctest.h>

#include <functional>
#include <map>
#include <random>

using namespace cyclevol;
using namespace cyclevol::ring;

namespace {

// Independent oracle: multiply as untruncated polynomials in H_1..H_r, then
// drop every monomial with some exponent above n_i.
CycleClass naive_product(const CycleClass& a, const CycleClass& b) {
  const auto& dims = a.variety().dims();
  std::map<std::vector<int>, Rational> full;
  for (const auto& [ma, qa] : a.terms())
    for (const auto& [mb, qb] : b.terms()) {
      std::vector<int> e(dims.size());
      for (std::size_t i = 0; i < dims.size(); ++i) e[i] = ma.exponents[i] + mb.exponents[i];
      full[e] += qa * qb;
    }
  CycleClass::Terms kept;
  for (const auto& [e, q] : full) {
    bool alive = true;
    for (std::size_t i = 0; i < dims.size(); ++i) alive = alive && e[i] <= dims[i];
    if (alive) kept[Monomial{e}] += q;
  }
  return CycleClass(a.variety(), a.codim() + b.codim(), kept);
}

CycleClass random_class(const VarietySpec& x, int codim, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  CycleClass::Terms terms;
  for (const auto& m : basis(x, codim)) terms[m] = ratio(num(rng), den(rng));
  return CycleClass(x, codim, terms);
}

// Number of monomials of degree d in m+1 variables, by enumeration.
long count_monomials(int vars, int degree) {
  if (vars == 1) return 1;
  long total = 0;
  for (int first = 0; first <= degree; ++first) total += count_monomials(vars - 1, degree - first);
  return total;
}

}  // namespace

TEST_CASE("variety and basis") {
  CHECK_THROWS_AS(VarietySpec(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(VarietySpec({2, 0}), std::invalid_argument);
  const VarietySpec x{2, 2};
  CHECK(x.dimension() == 4);
  const auto b2 = basis(x, 2);
  REQUIRE(b2.size() == 3);
  CHECK(b2[0].exponents == std::vector<int>{0, 2});
  CHECK(b2[1].exponents == std::vector<int>{1, 1});
  CHECK(b2[2].exponents == std::vector<int>{2, 0});
  CHECK(basis(x, 4).size() == 1);
  CHECK(point_monomial(x).exponents == std::vector<int>{2, 2});
  CHECK_THROWS_AS(CycleClass::monomial(x, {3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(CycleClass::monomial(x, {1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(CycleClass(x, 5), std::invalid_argument);
}

TEST_CASE("intersect examples") {
  const VarietySpec p1p1{1, 1};
  const CycleClass h1 = CycleClass::monomial(p1p1, {1, 0});
  const CycleClass h2 = CycleClass::monomial(p1p1, {0, 1});
  CHECK(intersect(h1, h2) == CycleClass::point(p1p1));
  CHECK(intersect(h1, h1).is_zero());

  const VarietySpec p3{3};
  const CycleClass h = CycleClass::monomial(p3, {1});
  CHECK(intersect(h, h) == CycleClass::monomial(p3, {2}));

  const VarietySpec p2p1{2, 1};
  const CycleClass s = CycleClass::monomial(p2p1, {1, 0}) + CycleClass::monomial(p2p1, {0, 1});
  const CycleClass expected = CycleClass::monomial(p2p1, {2, 0}) + CycleClass::monomial(p2p1, {1, 1}, 2);
  CHECK(intersect(s, s) == expected);

  CHECK_THROWS_AS(intersect(h, CycleClass::monomial(p1p1, {1, 0})), std::invalid_argument);
  CHECK_THROWS_AS(intersect(CycleClass::monomial(p3, {2}), CycleClass::monomial(p3, {2})), std::invalid_argument);
}

TEST_CASE("intersect matches the untruncated polynomial product, is commutative and bilinear") {
  std::mt19937 rng(11);
  for (const VarietySpec& x : {VarietySpec{3}, VarietySpec{1, 1}, VarietySpec{2, 1}, VarietySpec{1, 1, 1},
                               VarietySpec{2, 2}, VarietySpec{1, 2, 2}}) {
    const int n = x.dimension();
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_int_distribution<int> ca(0, n);
      const int p = ca(rng);
      const int q = std::uniform_int_distribution<int>(0, n - p)(rng);
      const CycleClass a = random_class(x, p, rng);
      const CycleClass a2 = random_class(x, p, rng);
      const CycleClass b = random_class(x, q, rng);
      CHECK(intersect(a, b) == naive_product(a, b));
      CHECK(intersect(a, b) == intersect(b, a));
      const Rational lambda = ratio(3, 7);
      CHECK(intersect(a * lambda + a2, b) == intersect(a, b) * lambda + intersect(a2, b));
    }
  }
}

TEST_CASE("degree, divisor_power and vol_divisor") {
  CHECK(degree(CycleClass::point(VarietySpec{1, 2})) == 1);
  const VarietySpec p3{3};
  CHECK(degree(divisor_power(DivisorClass(p3, {1}), 3)) == 1);
  const VarietySpec p1p1{1, 1};
  CHECK(degree(divisor_power(hyperplane_sum(p1p1), 2)) == 2);
  CHECK_THROWS_AS(degree(CycleClass::monomial(p3, {1})), std::invalid_argument);

  CHECK(divisor_power(DivisorClass(p3, {1}), 2) == CycleClass::monomial(p3, {2}));
  CHECK(divisor_power(DivisorClass(p1p1, {ratio(2, 3), 5}), 2) == CycleClass::point(p1p1) * ratio(20, 3));
  CHECK(divisor_power(hyperplane_sum(VarietySpec{1, 1, 1}), 3) == CycleClass::point(VarietySpec{1, 1, 1}) * 6);
  CHECK(divisor_power(DivisorClass(p3, {7}), 0) == CycleClass::fundamental(p3));
  CHECK_THROWS_AS(divisor_power(DivisorClass(p3, {1}), 4), std::invalid_argument);

  CHECK(vol_divisor(DivisorClass(p3, {1})) == 1);
  CHECK(vol_divisor(hyperplane_sum(p1p1)) == 2);
  CHECK(vol_divisor(DivisorClass(VarietySpec{2, 1}, {2, 3})) == 36);
  CHECK_THROWS_AS(vol_divisor(DivisorClass(p1p1, {1, -1})), std::invalid_argument);
}

TEST_CASE("divisor_power and vol_divisor agree with repeated intersection") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(0, 6);
  std::uniform_int_distribution<int> den(1, 3);
  for (const VarietySpec& x : {VarietySpec{2}, VarietySpec{1, 2}, VarietySpec{1, 1, 1}, VarietySpec{2, 3}}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Rational> coords;
      for (int i = 0; i < x.factors(); ++i) coords.push_back(ratio(num(rng), den(rng)));
      const DivisorClass a(x, coords);
      CycleClass power = CycleClass::fundamental(x);
      for (int j = 1; j <= x.dimension(); ++j) {
        power = intersect(power, a.to_class());
        CHECK(divisor_power(a, j) == power);
      }
      CHECK(vol_divisor(a) == degree(power));
      const Rational c = ratio(5, 2);
      CHECK(vol_divisor(a * c) == pow(c, x.dimension()) * vol_divisor(a));
    }
  }
}

TEST_CASE("degree_against pairs alpha with A^k") {
  const VarietySpec p3{3};
  const CycleClass line = CycleClass::monomial(p3, {2});
  CHECK(degree_against(line, DivisorClass(p3, {2})) == 2);
  CHECK(degree_against(line * 3, DivisorClass(p3, {1})) == 3);
  const VarietySpec p1p1p1{1, 1, 1};
  CHECK(degree_against(CycleClass::monomial(p1p1p1, {1, 1, 0}), hyperplane_sum(p1p1p1)) == 1);
}

TEST_CASE("cone membership") {
  const VarietySpec p1p1{1, 1};
  const CycleClass diff = CycleClass::monomial(p1p1, {1, 0}) - CycleClass::monomial(p1p1, {0, 1});
  CHECK_FALSE(is_pseudoeffective(diff));
  const CycleClass zero = CycleClass::zero(p1p1, 1);
  CHECK(is_pseudoeffective(zero));
  CHECK_FALSE(is_big(zero));
  CHECK(is_nef_class(zero));

  // H1H2 + H1^2 on P2 x P2 has a zero H2^2 coordinate: on the boundary, not big.
  const VarietySpec p2p2{2, 2};
  const CycleClass boundary = CycleClass::monomial(p2p2, {1, 1}) + CycleClass::monomial(p2p2, {2, 0});
  CHECK(is_pseudoeffective(boundary));
  CHECK_FALSE(is_big(boundary));
  CHECK(is_big(boundary + CycleClass::monomial(p2p2, {0, 2})));

  const DivisorClass a(p1p1, {0, 2});
  CHECK(a.is_nef());
  CHECK_FALSE(a.is_big_nef());
  CHECK_FALSE(a.is_very_ample());
  CHECK(DivisorClass(p1p1, {1, 3}).is_very_ample());
  CHECK_FALSE(DivisorClass(p1p1, {ratio(1, 2), 3}).is_very_ample());
  CHECK(DivisorClass(p1p1, {ratio(1, 2), 3}).is_big_nef());
}

TEST_CASE("pairing of pseudo-effective classes of complementary codimension is non-negative") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(0, 9);
  for (const VarietySpec& x : {VarietySpec{1, 1}, VarietySpec{1, 2}, VarietySpec{2, 2}, VarietySpec{1, 1, 2}}) {
    for (int c = 0; c <= x.dimension(); ++c) {
      CycleClass::Terms ta, tb;
      for (const auto& m : basis(x, c)) ta[m] = num(rng);
      for (const auto& m : basis(x, x.dimension() - c)) tb[m] = num(rng);
      CHECK(degree(intersect(CycleClass(x, c, ta), CycleClass(x, x.dimension() - c, tb))) >= 0);
    }
  }
}

TEST_CASE("H_i^{n_i+1} vanishes") {
  const VarietySpec x{2, 1, 3};
  for (int i = 0; i < x.factors(); ++i) {
    CycleClass power = CycleClass::fundamental(x);
    std::vector<int> e(x.factors(), 0);
    e[i] = 1;
    const CycleClass hi = CycleClass::monomial(x, e);
    for (int j = 0; j <= x.dims()[i]; ++j) power = intersect(power, hi);
    CHECK(power.is_zero());
  }
}

TEST_CASE("h0 closed form") {
  CHECK(h0(DivisorClass(VarietySpec{2}, {2})) == 6);
  CHECK(h0(DivisorClass(VarietySpec{1, 1}, {1, 1})) == 4);
  CHECK(h0(DivisorClass(VarietySpec{3}, {0})) == 1);
  CHECK_THROWS_AS(h0(DivisorClass(VarietySpec{2}, {ratio(1, 2)})), std::invalid_argument);
  for (const VarietySpec& x : {VarietySpec{2}, VarietySpec{1, 3}, VarietySpec{2, 1, 1}}) {
    for (int d = 0; d <= 6; ++d) {
      std::vector<Rational> coords(x.factors(), Rational(d));
      long expected = 1;
      for (int ni : x.dims()) expected *= count_monomials(ni + 1, d);
      CHECK(h0(DivisorClass(x, coords)) == expected);
    }
  }
}

TEST_CASE("h0(A) <= (n+1) vol(A) for very ample A, d_i <= 10, r <= 3, n <= 6") {
  std::vector<std::vector<int>> shapes;
  std::function<void(std::vector<int>&, int)> grow = [&](std::vector<int>& dims, int room) {
    if (!dims.empty()) shapes.push_back(dims);
    if (dims.size() == 3) return;
    for (int d = 1; d <= room; ++d) {
      dims.push_back(d);
      grow(dims, room - d);
      dims.pop_back();
    }
  };
  std::vector<int> start;
  grow(start, 6);
  long checked = 0;
  for (const auto& dims : shapes) {
    const VarietySpec x(dims);
    std::vector<int> d(dims.size(), 1);
    while (true) {
      std::vector<Rational> coords(d.begin(), d.end());
      const DivisorClass a(x, coords);
      CHECK(Rational(h0(a)) <= Rational(x.dimension() + 1) * vol_divisor(a));
      ++checked;
      std::size_t i = 0;
      while (i < d.size() && d[i] == 10) d[i++] = 1;
      if (i == d.size()) break;
      ++d[i];
    }
  }
  CHECK(checked > 10000);
}
