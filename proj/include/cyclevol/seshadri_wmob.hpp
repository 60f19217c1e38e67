#pragma once

#include "cyclevol/cycle_ring.hpp"
#include "cyclevol/mobility_bounds.hpp"
#include "cyclevol/power_product.hpp"

#include <optional>

/// Seshadri-constant intervals at general points and the weighted mobility
/// count bounds built on them.
namespace cyclevol::seshadri {

using ring::CycleClass;
using ring::DivisorClass;

/// Interval [1/t, (A^n / b)^{1/n}] containing the Seshadri constant of a very
/// ample A along b general points, with t the least positive integer such
/// that b <= t^n A^n. Valid for general configurations only.
struct SeshadriEstimate {
  Integer b;
  Integer t;
  Rational lo;
  PowerProduct hi;
  /// lo == hi exactly (happens iff b == t^n A^n).
  bool collapsed = false;
};

SeshadriEstimate seshadri_interval(const Integer& b, const DivisorClass& a);

struct WmcUpper {
  PowerProduct volume_branch;  ///< A^n
  PowerProduct growth_branch;  ///< (2/(A^n)^{1/n})^{nk/(n-k)} (A^k.alpha)^{n/(n-k)}
  PowerProduct value;          ///< the larger of the two
};

/// Upper bound for the weighted mobility count; requires A very ample and
/// alpha pseudo-effective.
WmcUpper wmc_upper(const CycleClass& alpha, const DivisorClass& a);

/// Weighted analogues of the precise bounds: hypotheses carry the 2^n factor
/// (2^n alpha.A^k < s A^n and 2^n alpha - t[A]^{n-k} not pseudo-effective).
/// Rational classes are accepted.
mobility::BoundReport wmc_upper_precise(const CycleClass& alpha, const DivisorClass& a, const Integer& s, int variant,
                                        const std::optional<Integer>& t = std::nullopt);

struct WmobCiBounds {
  Integer t;
  Integer points;       ///< b = t^n vol(H)
  Integer class_scale;  ///< m = t^{n-k}
  PowerProduct ratio;   ///< ((t-1)/t)^{kn/(n-k)}
  PowerProduct lower;   ///< ratio * vol(H)
  Rational upper;       ///< vol(H)
  PowerProduct envelope;  ///< growth branch of wmc_upper at [H^{n-k}], the asymptotic weighted cap

  /// (upper - lower) / upper = 1 - ratio, rounded in the given direction.
  Rational relative_gap(Rounding dir, int bits = 128) const;
};

/// Two-sided weighted mobility estimate for the complete intersection class [H^{n-k}].
/// Requires H very ample, 0 < k < n and t >= 2.
WmobCiBounds wmob_ci_bounds(const DivisorClass& h, int k, const Integer& t);

/// vol(L) for big L; on this family every big divisor is nef so the
/// approximation argument behind the equality is exact on X.
Rational wmob_divisor(const DivisorClass& l);

}  // namespace cyclevol::seshadri
