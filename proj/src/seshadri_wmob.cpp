#include "cyclevol/seshadri_wmob.hpp"

#include "cyclevol/bound_constants.hpp"

#include <stdexcept>

namespace cyclevol::seshadri {

using mobility::BoundReport;
using mobility::FormulaId;
using mobility::Hypothesis;
using ring::degree_against;
using ring::divisor_power;
using ring::is_pseudoeffective;
using ring::vol_divisor;

SeshadriEstimate seshadri_interval(const Integer& b, const DivisorClass& a) {
  if (b < 1) throw std::invalid_argument("seshadri_interval needs b >= 1");
  if (!a.is_very_ample()) throw std::invalid_argument("seshadri_interval needs a very ample divisor");
  const int n = a.variety().dimension();
  const Integer volume = vol_divisor(a).get_num();

  // Least t with t^n >= ceil(b / A^n).
  const Integer needed = ceil(ratio(b, volume));
  Integer t;
  mpz_root(t.get_mpz_t(), needed.get_mpz_t(), static_cast<unsigned long>(n));
  if (pow(t, static_cast<unsigned long>(n)) < needed) t += 1;
  if (t < 1) t = 1;

  SeshadriEstimate out;
  out.b = b;
  out.t = t;
  out.lo = ratio(1, t);
  out.hi = PowerProduct::power(ratio(volume, b), ratio(1, n));
  if (compare(PowerProduct(out.lo), out.hi) > 0) throw std::logic_error("seshadri interval is empty");
  out.collapsed = PowerProduct(out.lo) == out.hi;
  return out;
}

WmcUpper wmc_upper(const CycleClass& alpha, const DivisorClass& a) {
  if (!(alpha.variety() == a.variety())) throw std::invalid_argument("class and divisor live on different varieties");
  if (!a.is_very_ample()) throw std::invalid_argument("wmc_upper needs a very ample divisor");
  if (!is_pseudoeffective(alpha)) throw std::invalid_argument("wmc_upper needs a pseudo-effective class");
  const int n = alpha.variety().dimension();
  const int k = alpha.dim();
  if (k >= n) throw std::invalid_argument("wmc_upper needs k < n");

  const Rational volume = vol_divisor(a);
  const Rational pairing = degree_against(alpha, a);
  WmcUpper out;
  out.volume_branch = PowerProduct(volume);
  // (2 / V^{1/n})^{nk/(n-k)} = 2^{nk/(n-k)} V^{-k/(n-k)}
  out.growth_branch = PowerProduct::power(Rational(2), ratio(n * k, n - k)) *
                      PowerProduct::power(volume, ratio(-k, n - k)) *
                      (pairing == 0 ? PowerProduct() : PowerProduct::power(pairing, ratio(n, n - k)));
  out.value = out.growth_branch > out.volume_branch ? out.growth_branch : out.volume_branch;
  return out;
}

BoundReport wmc_upper_precise(const CycleClass& alpha, const DivisorClass& a, const Integer& s, int variant,
                              const std::optional<Integer>& t) {
  if (!(alpha.variety() == a.variety())) throw std::invalid_argument("class and divisor live on different varieties");
  const int n = alpha.variety().dimension();
  const int k = alpha.dim();
  if (k >= n) throw std::invalid_argument("wmc bounds need k < n");
  if (variant < 1 || variant > 3) throw std::invalid_argument("variant must be 1, 2 or 3");
  if (s < 1) throw std::invalid_argument("s must be a positive integer");
  if (t && *t < 1) throw std::invalid_argument("t must be a positive integer");

  BoundReport r;
  r.formula = variant == 1 ? FormulaId::weighted_1 : variant == 2 ? FormulaId::weighted_2 : FormulaId::weighted_3;
  r.statement = mobility::statement(r.formula);
  r.n = n;
  r.k = k;
  r.s = s;
  r.t = t;

  const Rational top = vol_divisor(a);
  const Rational boost = pow(Rational(2), n);
  const CycleClass boosted = alpha * boost;
  const CycleClass complete = divisor_power(a, n - k);
  r.hypotheses.push_back({"A very ample", a.is_very_ample()});
  r.hypotheses.push_back({"2^n alpha.A^k < s A^n", boost * degree_against(alpha, a) < Rational(s) * top});
  if (variant == 2) {
    r.hypotheses.push_back({"eps(n,k) defined", constants::defined(n, k)});
    r.hypotheses.push_back({"2^n alpha - [A]^(n-k) not pseudo-effective", !is_pseudoeffective(boosted - complete)});
  } else if (variant == 3) {
    r.hypotheses.push_back({"tau(n,k) defined", constants::defined(n, k)});
    r.hypotheses.push_back({"t given", t.has_value()});
    if (t) {
      r.hypotheses.push_back({"t <= s", *t <= s});
      r.hypotheses.push_back({"2^n alpha - t[A]^(n-k) not pseudo-effective",
                              !is_pseudoeffective(boosted - complete * Rational(*t))});
    }
  }
  for (const Hypothesis& h : r.hypotheses)
    if (!h.holds) return r;
  r.value = mobility::precise_value(n, k, s, variant, t, top);
  return r;
}

Rational WmobCiBounds::relative_gap(Rounding dir, int bits) const {
  const Rounding inner = dir == Rounding::up ? Rounding::down : Rounding::up;
  return 1 - ratio.enclosure(inner, bits);
}

WmobCiBounds wmob_ci_bounds(const DivisorClass& h, int k, const Integer& t) {
  const int n = h.variety().dimension();
  if (!h.is_very_ample()) throw std::invalid_argument("wmob_ci_bounds needs a very ample H");
  if (k <= 0 || k >= n) throw std::invalid_argument("wmob_ci_bounds needs 0 < k < n");
  if (t < 2) throw std::invalid_argument("wmob_ci_bounds needs t >= 2");

  const Rational volume = vol_divisor(h);
  WmobCiBounds out;
  out.t = t;
  out.points = pow(t, static_cast<unsigned long>(n)) * volume.get_num();
  out.class_scale = pow(t, static_cast<unsigned long>(n - k));
  out.ratio = PowerProduct::power(cyclevol::ratio(t - 1, t), cyclevol::ratio(k * n, n - k));
  out.lower = out.ratio * PowerProduct(volume);
  out.upper = volume;
  out.envelope = wmc_upper(divisor_power(h, n - k), h).growth_branch;
  return out;
}

Rational wmob_divisor(const DivisorClass& l) {
  if (!l.is_big_nef()) throw std::invalid_argument("wmob_divisor needs a big divisor");
  return vol_divisor(l);
}

}  // namespace cyclevol::seshadri
