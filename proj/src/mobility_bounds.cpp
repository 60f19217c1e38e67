#include "cyclevol/mobility_bounds.hpp"

#include "cyclevol/bound_constants.hpp"

#include <stdexcept>
#include <utility>

namespace cyclevol::mobility {

using ring::degree_against;
using ring::divisor_power;
using ring::is_big;
using ring::is_pseudoeffective;
using ring::vol_divisor;

namespace {

struct FormulaInfo {
  FormulaId id;
  const char* name;
  const char* statement;
};

constexpr FormulaInfo kFormulas[] = {
    {FormulaId::generic_count, "generic_count",
     "mc(alpha) <= (n+1) 2^n (2(k+1)/c)^(n/(n-k)) (alpha.A^k)^(n/(n-k)) A^n"},
    {FormulaId::precise_1, "precise_1", "mc(alpha) < 2^(kn+3n) s^(n/(n-k)) A^n"},
    {FormulaId::precise_2, "precise_2", "mc(alpha) < 2^(kn+3n) s^(n/(n-k) - eps(n,k)) A^n"},
    {FormulaId::precise_3, "precise_3", "mc(alpha) < 2^(kn+3n) s^(n/(n-k) - tau(n,k)) t^tau(n,k) A^n"},
    {FormulaId::non_big, "non_big", "mc(alpha) < 2^(kn+3n) (k+1) s^(n/(n-k) - eps(n,k)) A^n"},
    {FormulaId::mob_precise_1, "mob_precise_1", "mob(alpha) <= n! 2^(kn+3n) s^(n/(n-k)) A^n"},
    {FormulaId::weighted_1, "weighted_1", "wmc(alpha) < 2^(kn+3n) s^(n/(n-k)) A^n"},
    {FormulaId::weighted_2, "weighted_2", "wmc(alpha) < 2^(kn+3n) s^(n/(n-k) - eps(n,k)) A^n"},
    {FormulaId::weighted_3, "weighted_3", "wmc(alpha) < 2^(kn+3n) s^(n/(n-k) - tau(n,k)) t^tau(n,k) A^n"},
    {FormulaId::weighted_growth, "weighted_growth",
     "wmc(alpha) <= sup{ A^n, (2/(A^n)^(1/n))^(nk/(n-k)) (A^k.alpha)^(n/(n-k)) }"},
};

const FormulaInfo& info(FormulaId id) {
  for (const auto& f : kFormulas)
    if (f.id == id) return f;
  throw std::logic_error("unknown formula id");
}

struct Dimensions {
  int n;
  int k;
};

Dimensions check_pair(const CycleClass& alpha, const DivisorClass& a) {
  if (!(alpha.variety() == a.variety())) throw std::invalid_argument("class and divisor live on different varieties");
  const int n = alpha.variety().dimension();
  const int k = alpha.dim();
  if (k >= n) throw std::invalid_argument("bounds need a cycle dimension k < n (codimension >= 1)");
  return {n, k};
}

BoundReport make_report(FormulaId id, int n, int k) {
  BoundReport r;
  r.formula = id;
  r.statement = info(id).statement;
  r.n = n;
  r.k = k;
  return r;
}

bool all_hold(const std::vector<Hypothesis>& hs) {
  for (const auto& h : hs)
    if (!h.holds) return false;
  return true;
}

PowerProduct two_power(int n, int k) { return PowerProduct(pow(Rational(2), k * n + 3 * n)); }

}  // namespace

const char* to_string(FormulaId id) { return info(id).name; }

const char* statement(FormulaId id) { return info(id).statement; }

FormulaId formula_from_string(const std::string& name) {
  for (const auto& f : kFormulas)
    if (name == f.name) return f.id;
  throw std::invalid_argument("unknown formula '" + name + "'");
}

std::string BoundReport::decimal(int digits) const {
  if (!value) return {};
  return value->decimal(digits, Rounding::up);
}

Integer minimal_s(const CycleClass& alpha, const DivisorClass& a, const Rational& factor) {
  check_pair(alpha, a);
  const Rational top = vol_divisor(a);
  if (top <= 0) throw std::invalid_argument("minimal_s needs A^n > 0");
  const Rational scaled = factor * degree_against(alpha, a) / top;
  Integer s = floor(scaled) + 1;
  return s < 1 ? Integer(1) : s;
}

Rational largest_valid_c(const DivisorClass& a, int bits) {
  if (!a.is_very_ample()) throw std::invalid_argument("largest_valid_c needs a very ample divisor");
  if (bits < 1) throw std::invalid_argument("bits must be positive");
  const Rational leading = vol_divisor(a) / Rational(factorial(a.variety().dimension()));
  const Rational scale = pow(Rational(2), bits);
  Rational c = Rational(floor(leading * scale)) / scale;
  const Rational below_one = 1 - 1 / scale;
  if (c > below_one) c = below_one;
  if (c <= 0) throw std::domain_error("no positive dyadic c at this resolution; increase bits");
  return c;
}

bool c_is_valid(const DivisorClass& a, const Rational& c) {
  if (c <= 0 || c >= 1) return false;
  return c <= vol_divisor(a) / Rational(factorial(a.variety().dimension()));
}

PowerProduct precise_value(int n, int k, const Integer& s, int variant, const std::optional<Integer>& t,
                           const Rational& top_degree) {
  const Rational base_exponent = ratio(n, n - k);
  PowerProduct value = two_power(n, k) * PowerProduct(top_degree);
  switch (variant) {
    case 1:
      value *= PowerProduct::power(Rational(s), base_exponent);
      break;
    case 2:
      value *= PowerProduct::power(Rational(s), base_exponent - constants::epsilon(n, k));
      break;
    case 3: {
      if (!t) throw std::invalid_argument("variant 3 needs t");
      const Rational tau = constants::tau(n, k);
      value *= PowerProduct::power(Rational(s), base_exponent - tau);
      value *= PowerProduct::power(Rational(*t), tau);
      break;
    }
    default:
      throw std::invalid_argument("variant must be 1, 2 or 3");
  }
  return value;
}

BoundReport mc_upper_generic(const CycleClass& alpha, const DivisorClass& a, const Rational& c) {
  const auto [n, k] = check_pair(alpha, a);
  if (c <= 0 || c >= 1) throw std::invalid_argument("c must lie strictly between 0 and 1");
  if (!is_pseudoeffective(alpha)) throw std::invalid_argument("alpha is not pseudo-effective");

  BoundReport r = make_report(FormulaId::generic_count, n, k);
  r.hypotheses.push_back({"A very ample", a.is_very_ample()});
  r.hypotheses.push_back({"alpha integral", alpha.is_integral()});
  const bool valid_c = a.is_very_ample() && c_is_valid(a, c);
  r.hypotheses.push_back({"h0(mA) >= floor(c m^n) for all m", valid_c});
  if (!all_hold(r.hypotheses)) return r;

  const Rational exponent = ratio(n, n - k);
  const Rational degree = degree_against(alpha, a);
  PowerProduct value = PowerProduct(Rational(n + 1) * pow(Rational(2), n));
  value *= PowerProduct::power(Rational(2 * (k + 1)) / c, exponent);
  value *= degree == 0 ? PowerProduct() : PowerProduct::power(degree, exponent);
  value *= PowerProduct(vol_divisor(a));
  r.value = value;
  return r;
}

BoundReport mc_upper_precise(const CycleClass& alpha, const DivisorClass& a, const Integer& s, int variant,
                             const std::optional<Integer>& t) {
  const auto [n, k] = check_pair(alpha, a);
  if (variant < 1 || variant > 3) throw std::invalid_argument("variant must be 1, 2 or 3");
  if (s < 1) throw std::invalid_argument("s must be a positive integer");
  if (t && *t < 1) throw std::invalid_argument("t must be a positive integer");

  const FormulaId id = variant == 1 ? FormulaId::precise_1 : variant == 2 ? FormulaId::precise_2 : FormulaId::precise_3;
  BoundReport r = make_report(id, n, k);
  r.s = s;
  r.t = t;
  const Rational top = vol_divisor(a);
  r.hypotheses.push_back({"A very ample", a.is_very_ample()});
  r.hypotheses.push_back({"alpha integral", alpha.is_integral()});
  r.hypotheses.push_back({"alpha.A^k < s A^n", degree_against(alpha, a) < Rational(s) * top});
  const CycleClass complete = divisor_power(a, n - k);
  if (variant == 2) {
    r.hypotheses.push_back({"eps(n,k) defined", constants::defined(n, k)});
    r.hypotheses.push_back({"alpha - [A]^(n-k) not pseudo-effective", !is_pseudoeffective(alpha - complete)});
  } else if (variant == 3) {
    r.hypotheses.push_back({"tau(n,k) defined", constants::defined(n, k)});
    r.hypotheses.push_back({"t given", t.has_value()});
    if (t) {
      r.hypotheses.push_back({"t <= s", *t <= s});
      r.hypotheses.push_back(
          {"alpha - t[A]^(n-k) not pseudo-effective", !is_pseudoeffective(alpha - complete * Rational(*t))});
    }
  }
  if (!all_hold(r.hypotheses)) return r;
  r.value = precise_value(n, k, s, variant, t, top);
  return r;
}

BoundReport mc_upper_nonbig(const CycleClass& alpha, const DivisorClass& a, const Integer& s) {
  const auto [n, k] = check_pair(alpha, a);
  if (s < 1) throw std::invalid_argument("s must be a positive integer");
  BoundReport r = make_report(FormulaId::non_big, n, k);
  r.s = s;
  const Rational top = vol_divisor(a);
  r.hypotheses.push_back({"A very ample", a.is_very_ample()});
  r.hypotheses.push_back({"alpha integral", alpha.is_integral()});
  r.hypotheses.push_back({"alpha not big", !is_big(alpha)});
  r.hypotheses.push_back({"eps(n,k) defined", constants::defined(n, k)});
  r.hypotheses.push_back({"alpha.A^k < s A^n", degree_against(alpha, a) < Rational(s) * top});
  if (!all_hold(r.hypotheses)) return r;
  PowerProduct value = two_power(n, k) * PowerProduct(Rational(k + 1) * top);
  value *= PowerProduct::power(Rational(s), ratio(n, n - k) - constants::epsilon(n, k));
  r.value = value;
  return r;
}

BoundReport mob_upper(const CycleClass& alpha, const DivisorClass& a) {
  const auto [n, k] = check_pair(alpha, a);
  BoundReport r = make_report(FormulaId::mob_precise_1, n, k);
  r.hypotheses.push_back({"A very ample", a.is_very_ample()});
  if (!all_hold(r.hypotheses)) return r;
  const Integer s = minimal_s(alpha, a);
  r.s = s;
  r.value = PowerProduct(Rational(factorial(n))) * precise_value(n, k, s, 1, std::nullopt, vol_divisor(a));
  return r;
}

Integer mc_divisor_exact(const DivisorClass& l) {
  const Integer sections = ring::h0(l);
  return sections <= 1 ? Integer(0) : Integer(sections - 1);
}

CiLowerBound mob_ci_lower(const DivisorClass& h, int k, int m) {
  const int n = h.variety().dimension();
  if (k < 0 || k >= n) throw std::invalid_argument("mob_ci_lower needs 0 <= k < n");
  if (m < 1) throw std::invalid_argument("mob_ci_lower needs m >= 1");
  if (!h.has_nonnegative_integer_coords()) throw std::invalid_argument("H must be an integral nef divisor");
  CiLowerBound out;
  const Integer sections = ring::h0(h * Rational(m));
  out.points = sections - 1 - (n - k);
  if (out.points < 0) out.points = 0;
  out.class_scale = pow(Integer(m), static_cast<unsigned long>(n - k));
  out.estimate = Rational(factorial(n) * out.points) / pow(Rational(m), n);
  return out;
}

CiPointsP3 ci_points_p3(int d) {
  if (d < 1) throw std::invalid_argument("ci_points_p3 needs d >= 1");
  const auto du = static_cast<unsigned long>(d);
  return {binomial(du + 3, 3) - 2, Integer(du) * du};
}

PerrinEstimate perrin_bound(int d) {
  if (d < 1) throw std::invalid_argument("perrin_bound needs d >= 1");
  return {PowerProduct(ratio(1, 2)) * PowerProduct::power(Rational(d), ratio(3, 2)),
          "leading term only; the O(d) correction has no explicit constant"};
}

Integer mc_family_dim_bound(const Integer& dim_w, int n, int k) {
  if (k < 0 || k >= n) throw std::invalid_argument("mc_family_dim_bound needs 0 <= k < n");
  if (dim_w < 0) throw std::invalid_argument("family dimension must be non-negative");
  return floor(ratio(dim_w, n - k));
}

Neighborhood continuity_neighborhood(const CycleClass& alpha, const DivisorClass& a, const Rational& mu, int bits) {
  const auto [n, k] = check_pair(alpha, a);
  if (!a.is_very_ample()) throw std::invalid_argument("continuity_neighborhood needs a very ample A");
  if (mu <= 0) throw std::invalid_argument("mu must be positive");
  if (bits < 2) throw std::invalid_argument("bits must be at least 2");

  Neighborhood out;
  out.s = minimal_s(alpha, a, Rational(2));
  out.tau = constants::tau(n, k);

  PowerProduct scale = PowerProduct(Rational(factorial(n)) * pow(Rational(2), k * n + 3 * n + 1) * vol_divisor(a));
  scale *= PowerProduct::power(Rational(out.s), ratio(n, n - k));
  out.threshold = (PowerProduct(mu) / scale).pow(1 / out.tau);

  auto admissible = [&](const Rational& delta) {
    return compare(scale * PowerProduct::power(delta, out.tau), PowerProduct(mu)) < 0;
  };

  // Truncate the threshold to a `bits`-bit mantissa, then step down until strict.
  const Rational approx = out.threshold.enclosure(Rounding::down, bits + 64);
  long exponent = 0;
  mpz_class num = approx.get_num();
  mpz_class den = approx.get_den();
  exponent = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // ulp so that the mantissa has at most `bits` bits
  const long shift = bits - exponent;
  const Rational unit = pow(Rational(2), -shift);
  Rational delta = Rational(floor(approx / unit)) * unit;
  while (delta > 0 && !admissible(delta)) delta -= unit;
  if (delta <= 0) throw std::logic_error("continuity_neighborhood failed to find a positive delta");
  out.delta = delta;
  return out;
}

}  // namespace cyclevol::mobility
