#pragma once

#include "cyclevol/rational.hpp"

#include <map>
#include <optional>
#include <string>

namespace cyclevol {

enum class Rounding { down, nearest, up };

/// An exact real of the form  c * p_1^{e_1} * ... * p_m^{e_m}  with c rational,
/// p_i distinct primes (or unfactored cofactors) and e_i rational in (0, 1).
///
/// Every bound in the library with a fractional exponent (s^{n/(n-k)},
/// (A^n)^{1/n}, ...) is carried in this form, so equalities such as
/// homogeneity laws can be checked exactly and decimals are only produced
/// at the edge with a chosen rounding direction.
///
/// The representation is canonical: two values are equal iff their
/// coefficients and radical maps coincide. Integers with a prime factor above
/// the trial-division limit are kept as a single opaque base; two such bases
/// sharing a factor would break canonicity, which only matters for inputs far
/// larger than anything the bound formulas produce.
class PowerProduct {
 public:
  PowerProduct() : coeff_(0) {}
  PowerProduct(const Rational& value) : coeff_(value) {}  // NOLINT(implicit)
  PowerProduct(long value) : coeff_(value) {}             // NOLINT(implicit)

  /// base^exponent for base >= 0; 0^e requires e > 0.
  static PowerProduct power(const Rational& base, const Rational& exponent);

  const Rational& coefficient() const { return coeff_; }
  const std::map<Integer, Rational>& radicals() const { return radicals_; }

  bool is_zero() const { return coeff_ == 0; }
  bool is_rational() const { return radicals_.empty(); }
  std::optional<Rational> as_rational() const;
  int sign() const { return sgn(coeff_); }

  /// Raises to a rational power. Non-integer exponents need a non-negative value.
  PowerProduct pow(const Rational& exponent) const;
  PowerProduct inverse() const;

  PowerProduct& operator*=(const PowerProduct& rhs);
  PowerProduct& operator/=(const PowerProduct& rhs) { return *this *= rhs.inverse(); }
  friend PowerProduct operator*(PowerProduct lhs, const PowerProduct& rhs) { return lhs *= rhs; }
  friend PowerProduct operator/(PowerProduct lhs, const PowerProduct& rhs) { return lhs /= rhs; }
  friend PowerProduct operator-(PowerProduct v) {
    v.coeff_ = -v.coeff_;
    return v;
  }

  friend bool operator==(const PowerProduct& a, const PowerProduct& b) {
    return a.coeff_ == b.coeff_ && a.radicals_ == b.radicals_;
  }

  /// Exact three-way comparison; returns -1, 0 or 1.
  friend int compare(const PowerProduct& a, const PowerProduct& b);
  friend bool operator<(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) < 0; }
  friend bool operator<=(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) <= 0; }
  friend bool operator>(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) > 0; }
  friend bool operator>=(const PowerProduct& a, const PowerProduct& b) { return compare(a, b) >= 0; }

  /// Human-readable exact form, e.g. "4096*2^(1/2)".
  std::string to_string() const;

  /// Decimal with `digits` significant digits, rounded in the given direction.
  std::string decimal(int digits, Rounding dir) const;

  /// A rational r with r <= value (down) or r >= value (up), accurate to about `bits` bits.
  Rational enclosure(Rounding dir, int bits = 128) const;

  double approx() const;

 private:
  void absorb(const Integer& base, const Rational& exponent);
  void normalize();

  Rational coeff_;
  std::map<Integer, Rational> radicals_;
};

}  // namespace cyclevol
