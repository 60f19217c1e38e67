#pragma once

#include "cyclevol/rational.hpp"

#include <compare>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

/// Intersection theory on X = P^{n_1} x ... x P^{n_r}.
///
/// The numerical ring of X is Q[H_1, ..., H_r] / (H_i^{n_i + 1}), with H_i the
/// pullback of the hyperplane class of the i-th factor. A class of codimension
/// c is a rational combination of the monomials H^a with |a| = c and a_i <= n_i.
/// In every codimension the pseudo-effective cone and the nef cone both equal
/// the non-negative orthant in this monomial basis, so all cone tests reduce to
/// exact sign checks.
namespace cyclevol::ring {

class VarietySpec {
 public:
  /// Throws std::invalid_argument unless dims is non-empty with every entry >= 1.
  explicit VarietySpec(std::vector<int> dims);
  VarietySpec(std::initializer_list<int> dims) : VarietySpec(std::vector<int>(dims)) {}

  const std::vector<int>& dims() const { return dims_; }
  int factors() const { return static_cast<int>(dims_.size()); }
  int dimension() const { return n_; }

  friend bool operator==(const VarietySpec&, const VarietySpec&) = default;

 private:
  std::vector<int> dims_;
  int n_ = 0;
};

struct Monomial {
  std::vector<int> exponents;

  int degree() const;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Basis monomials of the given codimension in lexicographic order.
std::vector<Monomial> basis(const VarietySpec& x, int codim);

/// Monomial (n_1, ..., n_r), the class of a point.
Monomial point_monomial(const VarietySpec& x);

class CycleClass {
 public:
  using Terms = std::map<Monomial, Rational>;

  /// Validates every monomial against the variety and codimension; zero
  /// coefficients are dropped.
  CycleClass(VarietySpec variety, int codim, Terms terms = {});

  static CycleClass zero(const VarietySpec& x, int codim) { return CycleClass(x, codim); }
  static CycleClass fundamental(const VarietySpec& x);
  static CycleClass point(const VarietySpec& x);
  static CycleClass monomial(const VarietySpec& x, std::vector<int> exponents, const Rational& coeff = 1);

  const VarietySpec& variety() const { return variety_; }
  int codim() const { return codim_; }
  /// Dimension k = n - codim of the cycles the class represents.
  int dim() const { return variety_.dimension() - codim_; }
  const Terms& terms() const { return terms_; }

  Rational coefficient(const Monomial& m) const;
  /// Coefficients over the full lexicographic basis, zeros included.
  std::vector<Rational> dense() const;
  bool is_zero() const { return terms_.empty(); }
  bool is_integral() const;

  CycleClass& operator+=(const CycleClass& rhs);
  CycleClass& operator-=(const CycleClass& rhs);
  CycleClass& operator*=(const Rational& scalar);
  friend CycleClass operator+(CycleClass a, const CycleClass& b) { return a += b; }
  friend CycleClass operator-(CycleClass a, const CycleClass& b) { return a -= b; }
  friend CycleClass operator*(CycleClass a, const Rational& c) { return a *= c; }
  friend CycleClass operator*(const Rational& c, CycleClass a) { return a *= c; }
  friend bool operator==(const CycleClass&, const CycleClass&) = default;

 private:
  void check_compatible(const CycleClass& rhs) const;

  VarietySpec variety_;
  int codim_;
  Terms terms_;
};

/// A = sum x_i H_i.
class DivisorClass {
 public:
  DivisorClass(VarietySpec variety, std::vector<Rational> coords);

  const VarietySpec& variety() const { return variety_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_nef() const;
  /// All coordinates positive (ample, equivalently big and nef, on this family).
  bool is_big_nef() const;
  /// All coordinates integers >= 1.
  bool is_very_ample() const;
  bool has_nonnegative_integer_coords() const;

  CycleClass to_class() const;

  DivisorClass operator*(const Rational& c) const;
  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;

 private:
  VarietySpec variety_;
  std::vector<Rational> coords_;
};

/// H_1 + ... + H_r, i.e. O(1, ..., 1).
DivisorClass hyperplane_sum(const VarietySpec& x);

/// Product in the truncated polynomial ring. Throws on variety mismatch or
/// when codim(a) + codim(b) exceeds dim X.
CycleClass intersect(const CycleClass& a, const CycleClass& b);

/// Coefficient of the point class; requires codim(a) == dim X.
Rational degree(const CycleClass& a);

/// A^j; j = 0 gives the fundamental class. Throws if j > dim X.
CycleClass divisor_power(const DivisorClass& a, int j);

/// alpha . A^k where k = dim(alpha).
Rational degree_against(const CycleClass& alpha, const DivisorClass& a);

/// A^n for nef A, via the closed form multinomial(n; n_i) * prod x_i^{n_i}.
Rational vol_divisor(const DivisorClass& a);

bool is_pseudoeffective(const CycleClass& a);
bool is_nef_class(const CycleClass& a);
bool is_big(const CycleClass& a);

/// Dimension of the space of sections of O(d_1, ..., d_r): prod C(n_i + d_i, n_i).
Integer h0(const DivisorClass& l);

}  // namespace cyclevol::ring
