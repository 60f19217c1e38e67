#include "cyclevol/cycle_ring.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace cyclevol::ring {

namespace {

void enumerate(const std::vector<int>& dims, std::size_t index, int remaining, std::vector<int>& current,
               std::vector<Monomial>& out) {
  if (index == dims.size()) {
    if (remaining == 0) out.push_back(Monomial{current});
    return;
  }
  // Remaining factors can absorb at most this much degree.
  int tail_capacity = 0;
  for (std::size_t j = index + 1; j < dims.size(); ++j) tail_capacity += dims[j];
  for (int a = 0; a <= std::min(dims[index], remaining); ++a) {
    if (remaining - a > tail_capacity) continue;
    current[index] = a;
    enumerate(dims, index + 1, remaining - a, current, out);
  }
  current[index] = 0;
}

void check_monomial(const VarietySpec& x, int codim, const Monomial& m) {
  if (m.exponents.size() != x.dims().size())
    throw std::invalid_argument("monomial has " + std::to_string(m.exponents.size()) + " exponents, variety has " +
                                std::to_string(x.dims().size()) + " factors");
  for (std::size_t i = 0; i < m.exponents.size(); ++i) {
    if (m.exponents[i] < 0) throw std::invalid_argument("negative exponent in monomial");
    if (m.exponents[i] > x.dims()[i])
      throw std::invalid_argument("exponent " + std::to_string(m.exponents[i]) + " exceeds factor dimension " +
                                  std::to_string(x.dims()[i]));
  }
  if (m.degree() != codim)
    throw std::invalid_argument("monomial of degree " + std::to_string(m.degree()) + " in a class of codimension " +
                                std::to_string(codim));
}

}  // namespace

VarietySpec::VarietySpec(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("a variety needs at least one projective factor");
  for (int d : dims_)
    if (d < 1) throw std::invalid_argument("projective factor dimensions must be >= 1");
  n_ = std::accumulate(dims_.begin(), dims_.end(), 0);
}

int Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

std::vector<Monomial> basis(const VarietySpec& x, int codim) {
  std::vector<Monomial> out;
  if (codim < 0 || codim > x.dimension()) return out;
  std::vector<int> current(x.dims().size(), 0);
  enumerate(x.dims(), 0, codim, current, out);
  return out;
}

Monomial point_monomial(const VarietySpec& x) { return Monomial{x.dims()}; }

CycleClass::CycleClass(VarietySpec variety, int codim, Terms terms) : variety_(std::move(variety)), codim_(codim) {
  if (codim_ < 0 || codim_ > variety_.dimension())
    throw std::invalid_argument("codimension " + std::to_string(codim_) + " outside [0, " +
                                std::to_string(variety_.dimension()) + "]");
  for (auto& [m, q] : terms) {
    check_monomial(variety_, codim_, m);
    if (q != 0) terms_.emplace(m, q);
  }
}

CycleClass CycleClass::fundamental(const VarietySpec& x) {
  return monomial(x, std::vector<int>(x.dims().size(), 0));
}

CycleClass CycleClass::point(const VarietySpec& x) { return monomial(x, x.dims()); }

CycleClass CycleClass::monomial(const VarietySpec& x, std::vector<int> exponents, const Rational& coeff) {
  Monomial m{std::move(exponents)};
  const int c = m.degree();
  return CycleClass(x, c, Terms{{m, coeff}});
}

Rational CycleClass::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Rational> CycleClass::dense() const {
  std::vector<Rational> out;
  for (const auto& m : basis(variety_, codim_)) out.push_back(coefficient(m));
  return out;
}

bool CycleClass::is_integral() const {
  for (const auto& [m, q] : terms_)
    if (!is_integer(q)) return false;
  return true;
}

void CycleClass::check_compatible(const CycleClass& rhs) const {
  if (!(variety_ == rhs.variety_)) throw std::invalid_argument("classes live on different varieties");
  if (codim_ != rhs.codim_) throw std::invalid_argument("cannot add classes of different codimension");
}

CycleClass& CycleClass::operator+=(const CycleClass& rhs) {
  check_compatible(rhs);
  for (const auto& [m, q] : rhs.terms_) {
    Rational sum = coefficient(m) + q;
    if (sum == 0)
      terms_.erase(m);
    else
      terms_[m] = sum;
  }
  return *this;
}

CycleClass& CycleClass::operator-=(const CycleClass& rhs) { return *this += rhs * Rational(-1); }

CycleClass& CycleClass::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, q] : terms_) q *= scalar;
  return *this;
}

DivisorClass::DivisorClass(VarietySpec variety, std::vector<Rational> coords)
    : variety_(std::move(variety)), coords_(std::move(coords)) {
  if (coords_.size() != variety_.dims().size())
    throw std::invalid_argument("divisor has " + std::to_string(coords_.size()) + " coordinates, variety has " +
                                std::to_string(variety_.dims().size()) + " factors");
}

bool DivisorClass::is_nef() const {
  for (const auto& x : coords_)
    if (x < 0) return false;
  return true;
}

bool DivisorClass::is_big_nef() const {
  for (const auto& x : coords_)
    if (x <= 0) return false;
  return true;
}

bool DivisorClass::is_very_ample() const {
  for (const auto& x : coords_)
    if (!is_integer(x) || x < 1) return false;
  return true;
}

bool DivisorClass::has_nonnegative_integer_coords() const {
  for (const auto& x : coords_)
    if (!is_integer(x) || x < 0) return false;
  return true;
}

CycleClass DivisorClass::to_class() const {
  CycleClass::Terms terms;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    std::vector<int> e(coords_.size(), 0);
    e[i] = 1;
    terms.emplace(Monomial{e}, coords_[i]);
  }
  return CycleClass(variety_, 1, std::move(terms));
}

DivisorClass DivisorClass::operator*(const Rational& c) const {
  std::vector<Rational> scaled = coords_;
  for (auto& x : scaled) x *= c;
  return DivisorClass(variety_, std::move(scaled));
}

DivisorClass hyperplane_sum(const VarietySpec& x) {
  return DivisorClass(x, std::vector<Rational>(x.dims().size(), Rational(1)));
}

CycleClass intersect(const CycleClass& a, const CycleClass& b) {
  if (!(a.variety() == b.variety())) throw std::invalid_argument("intersecting classes on different varieties");
  const VarietySpec& x = a.variety();
  const int codim = a.codim() + b.codim();
  if (codim > x.dimension())
    throw std::invalid_argument("total codimension " + std::to_string(codim) + " exceeds dim X = " +
                                std::to_string(x.dimension()));
  CycleClass::Terms product;
  const auto& dims = x.dims();
  for (const auto& [ma, qa] : a.terms()) {
    for (const auto& [mb, qb] : b.terms()) {
      Monomial m{ma.exponents};
      bool vanishes = false;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        m.exponents[i] += mb.exponents[i];
        if (m.exponents[i] > dims[i]) vanishes = true;
      }
      if (vanishes) continue;
      product[m] += qa * qb;
    }
  }
  return CycleClass(x, codim, std::move(product));
}

Rational degree(const CycleClass& a) {
  if (a.codim() != a.variety().dimension())
    throw std::invalid_argument("degree needs a zero-dimensional class, got codimension " +
                                std::to_string(a.codim()));
  return a.coefficient(point_monomial(a.variety()));
}

CycleClass divisor_power(const DivisorClass& a, int j) {
  const VarietySpec& x = a.variety();
  if (j < 0 || j > x.dimension())
    throw std::invalid_argument("divisor power " + std::to_string(j) + " outside [0, " +
                                std::to_string(x.dimension()) + "]");
  CycleClass::Terms terms;
  for (const auto& m : basis(x, j)) {
    Rational c(multinomial(m.exponents));
    for (std::size_t i = 0; i < m.exponents.size(); ++i) c *= pow(a.coords()[i], m.exponents[i]);
    terms.emplace(m, c);
  }
  return CycleClass(x, j, std::move(terms));
}

Rational degree_against(const CycleClass& alpha, const DivisorClass& a) {
  return degree(intersect(alpha, divisor_power(a, alpha.dim())));
}

Rational vol_divisor(const DivisorClass& a) {
  if (!a.is_nef()) throw std::invalid_argument("vol_divisor requires a nef divisor");
  const auto& dims = a.variety().dims();
  Rational v(multinomial(dims));
  for (std::size_t i = 0; i < dims.size(); ++i) v *= pow(a.coords()[i], dims[i]);
  return v;
}

bool is_pseudoeffective(const CycleClass& a) {
  for (const auto& [m, q] : a.terms())
    if (q < 0) return false;
  return true;
}

bool is_nef_class(const CycleClass& a) { return is_pseudoeffective(a); }

bool is_big(const CycleClass& a) {
  for (const auto& m : basis(a.variety(), a.codim()))
    if (a.coefficient(m) <= 0) return false;
  return true;
}

Integer h0(const DivisorClass& l) {
  if (!l.has_nonnegative_integer_coords()) throw std::invalid_argument("h0 needs non-negative integer coordinates");
  Integer out = 1;
  const auto& dims = l.variety().dims();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const unsigned long d = l.coords()[i].get_num().get_ui();
    out *= binomial(static_cast<unsigned long>(dims[i]) + d, static_cast<unsigned long>(dims[i]));
  }
  return out;
}

}  // namespace cyclevol::ring
