#pragma once

#include "cyclevol/cycle_ring.hpp"
#include "cyclevol/power_product.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cyclevol::mobility {

using ring::CycleClass;
using ring::DivisorClass;

enum class FormulaId {
  generic_count,    ///< (n+1) 2^n (2(k+1)/c)^{n/(n-k)} (alpha.A^k)^{n/(n-k)} A^n
  precise_1,        ///< 2^{kn+3n} s^{n/(n-k)} A^n
  precise_2,        ///< 2^{kn+3n} s^{n/(n-k) - e(n,k)} A^n
  precise_3,        ///< 2^{kn+3n} s^{n/(n-k) - t(n,k)} t^{t(n,k)} A^n
  non_big,          ///< 2^{kn+3n} (k+1) s^{n/(n-k) - e(n,k)} A^n
  mob_precise_1,    ///< n! 2^{kn+3n} s^{n/(n-k)} A^n, the mobility-level form of precise_1
  weighted_1,
  weighted_2,
  weighted_3,
  weighted_growth,  ///< sup{ A^n, (2/(A^n)^{1/n})^{nk/(n-k)} (A^k.alpha)^{n/(n-k)} }
};

const char* to_string(FormulaId id);
/// Plain-text statement of the inequality a formula evaluates.
const char* statement(FormulaId id);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
FormulaId formula_from_string(const std::string& name);

struct Hypothesis {
  std::string name;
  bool holds = false;
};

/// Result of evaluating one bound formula. `value` is present only when every
/// hypothesis holds; the bound is then a strict upper bound for the
/// corresponding count (mc, wmc or mob).
struct BoundReport {
  FormulaId formula = FormulaId::precise_1;
  std::string statement;
  int n = 0;
  int k = 0;
  std::optional<Integer> s;
  std::optional<Integer> t;
  std::vector<Hypothesis> hypotheses;
  std::optional<PowerProduct> value;
  std::string note;

  bool applicable() const { return value.has_value(); }
  /// Outward (upward) rounded decimal of the value; empty when inapplicable.
  std::string decimal(int digits = 12) const;
};

/// Smallest positive integer s with factor * (alpha . A^k) < s * A^n.
Integer minimal_s(const CycleClass& alpha, const DivisorClass& a, const Rational& factor = 1);

/// Largest c of the form m / 2^bits with c < 1 and h0(mA) >= floor(c m^n) for
/// every m >= 1. Since h0(mA) is a polynomial in m with non-negative
/// coefficients and leading coefficient A^n/n!, the valid c are exactly those
/// with c <= A^n/n!.
Rational largest_valid_c(const DivisorClass& a, int bits = 20);

/// True iff h0(mA) >= floor(c m^n) for all m >= 1 (A very ample, 0 < c < 1).
bool c_is_valid(const DivisorClass& a, const Rational& c);

/// Shared evaluation of the three precise shapes, used by the weighted bounds too.
/// variant 1 ignores t; variant 2 ignores t; variant 3 requires t.
PowerProduct precise_value(int n, int k, const Integer& s, int variant, const std::optional<Integer>& t,
                           const Rational& top_degree);

/// Generic count bound with an explicit section-growth constant c.
/// Throws std::invalid_argument if c is outside (0, 1), alpha is not
/// pseudo-effective, or alpha has dimension >= n.
BoundReport mc_upper_generic(const CycleClass& alpha, const DivisorClass& a, const Rational& c);

/// Precise count bounds (variants 1, 2, 3). Failed hypotheses give an
/// inapplicable report rather than an exception.
BoundReport mc_upper_precise(const CycleClass& alpha, const DivisorClass& a, const Integer& s, int variant,
                             const std::optional<Integer>& t = std::nullopt);

/// Count bound for classes that are not big.
BoundReport mc_upper_nonbig(const CycleClass& alpha, const DivisorClass& a, const Integer& s);

/// n! 2^{kn+3n} s^{n/(n-k)} A^n at the minimal s; an upper bound for mob(alpha).
BoundReport mob_upper(const CycleClass& alpha, const DivisorClass& a);

/// Mobility count of the complete linear series |L|: h0(L) - 1 (0 when h0 <= 1).
Integer mc_divisor_exact(const DivisorClass& l);

struct CiLowerBound {
  Integer points;       ///< h0(mH) - 1 - (n - k), clamped at 0
  Integer class_scale;  ///< m^{n-k}
  Rational estimate;    ///< n! * points / m^n
};

/// Complete intersections of n-k members of |mH| through general points.
CiLowerBound mob_ci_lower(const DivisorClass& h, int k, int m);

struct CiPointsP3 {
  Integer points;        ///< C(d+3, 3) - 2
  Integer curve_degree;  ///< d^2
};

/// Complete intersections of two degree-d surfaces in P^3 through general points.
CiPointsP3 ci_points_p3(int d);

struct PerrinEstimate {
  PowerProduct leading;  ///< d^{3/2} / 2
  std::string note;
};

/// Leading term of the smooth-curve count estimate on P^3; the O(d) term has no stated constant.
PerrinEstimate perrin_bound(int d);

/// floor(dimW / (n - k)).
Integer mc_family_dim_bound(const Integer& dim_w, int n, int k);

struct Neighborhood {
  Rational delta;
  Integer s;
  Rational tau;
  PowerProduct threshold;  ///< exact supremum of admissible delta
};

/// Largest delta = m * 2^e with a `bits`-bit mantissa satisfying
/// n! 2^{kn+3n+1} s^{n/(n-k)} A^n delta^{t(n,k)} < mu, where s is the smallest
/// integer with alpha.A^k < (s/2) A^n.
Neighborhood continuity_neighborhood(const CycleClass& alpha, const DivisorClass& a, const Rational& mu,
                                     int bits = 32);

}  // namespace cyclevol::mobility
