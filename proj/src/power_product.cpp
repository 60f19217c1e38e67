#include "cyclevol/power_product.hpp"

#include <mpfr.h>

#include <cstdlib>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cyclevol {

namespace {

constexpr unsigned long kTrialDivisionLimit = 1UL << 20;

std::vector<std::pair<Integer, unsigned long>> factor(Integer n) {
  std::vector<std::pair<Integer, unsigned long>> out;
  auto strip = [&](unsigned long d) {
    unsigned long count = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
      ++count;
    }
    if (count > 0) out.emplace_back(Integer(d), count);
  };
  strip(2);
  for (unsigned long d = 3; d <= kTrialDivisionLimit; d += 2) {
    if (Integer(d) * d > n) break;
    strip(d);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

struct Mpfr {
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(value, prec); }
  ~Mpfr() { mpfr_clear(value); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_t value;
};

mpfr_rnd_t to_mpfr(Rounding dir) {
  switch (dir) {
    case Rounding::down: return MPFR_RNDD;
    case Rounding::up: return MPFR_RNDU;
    case Rounding::nearest: break;
  }
  return MPFR_RNDN;
}

Rounding flip(Rounding dir) {
  if (dir == Rounding::down) return Rounding::up;
  if (dir == Rounding::up) return Rounding::down;
  return dir;
}

// |coeff| * prod p^e evaluated with every step rounded in `dir`; all factors
// are positive so the directed rounding composes.
void evaluate_magnitude(mpfr_t out, const Rational& coeff, const std::map<Integer, Rational>& radicals,
                        Rounding dir) {
  const mpfr_rnd_t rnd = to_mpfr(dir);
  Rational magnitude = abs(coeff);
  mpfr_set_q(out, magnitude.get_mpq_t(), rnd);
  Mpfr factor_value(mpfr_get_prec(out));
  for (const auto& [base, exponent] : radicals) {
    Integer lifted = pow(base, exponent.get_num().get_ui());
    mpfr_set_z(factor_value.value, lifted.get_mpz_t(), rnd);
    mpfr_rootn_ui(factor_value.value, factor_value.value, exponent.get_den().get_ui(), rnd);
    mpfr_mul(out, out, factor_value.value, rnd);
  }
}

void evaluate(mpfr_t out, const PowerProduct& v, Rounding dir) {
  if (v.sign() >= 0) {
    evaluate_magnitude(out, v.coefficient(), v.radicals(), dir);
  } else {
    evaluate_magnitude(out, v.coefficient(), v.radicals(), flip(dir));
    mpfr_neg(out, out, MPFR_RNDN);
  }
}

}  // namespace

PowerProduct PowerProduct::power(const Rational& base, const Rational& exponent) {
  if (base < 0) throw std::domain_error("power of a negative base");
  if (base == 0) {
    if (exponent <= 0) throw std::domain_error("zero raised to a non-positive power");
    return PowerProduct();
  }
  PowerProduct out(1);
  for (const auto& [p, m] : factor(base.get_num())) out.absorb(p, exponent * Rational(m));
  for (const auto& [p, m] : factor(base.get_den())) out.absorb(p, -exponent * Rational(m));
  out.normalize();
  return out;
}

std::optional<Rational> PowerProduct::as_rational() const {
  if (!radicals_.empty()) return std::nullopt;
  return coeff_;
}

void PowerProduct::absorb(const Integer& base, const Rational& exponent) {
  if (base == 1 || exponent == 0) return;
  auto [it, inserted] = radicals_.try_emplace(base, exponent);
  if (!inserted) it->second += exponent;
}

void PowerProduct::normalize() {
  if (coeff_ == 0) {
    radicals_.clear();
    return;
  }
  for (auto it = radicals_.begin(); it != radicals_.end();) {
    Integer whole = floor(it->second);
    if (whole != 0) {
      coeff_ *= cyclevol::pow(Rational(it->first), whole.get_si());
      it->second -= whole;
    }
    if (it->second == 0)
      it = radicals_.erase(it);
    else
      ++it;
  }
}

PowerProduct PowerProduct::pow(const Rational& exponent) const {
  if (is_zero()) {
    if (exponent <= 0) throw std::domain_error("zero raised to a non-positive power");
    return PowerProduct();
  }
  PowerProduct out;
  if (is_integer(exponent)) {
    out.coeff_ = cyclevol::pow(coeff_, exponent.get_num().get_si());
  } else {
    if (coeff_ < 0) throw std::domain_error("fractional power of a negative value");
    out = power(coeff_, exponent);
  }
  for (const auto& [base, e] : radicals_) out.absorb(base, e * exponent);
  out.normalize();
  return out;
}

PowerProduct PowerProduct::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  PowerProduct out(1 / coeff_);
  for (const auto& [base, e] : radicals_) out.absorb(base, -e);
  out.normalize();
  return out;
}

PowerProduct& PowerProduct::operator*=(const PowerProduct& rhs) {
  coeff_ *= rhs.coeff_;
  for (const auto& [base, e] : rhs.radicals_) absorb(base, e);
  normalize();
  return *this;
}

int compare(const PowerProduct& a, const PowerProduct& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  if (sa < 0) return compare(-b, -a);
  if (a == b) return 0;

  const PowerProduct ratio = a / b;
  if (ratio.is_rational()) return cmp(ratio.coefficient(), 1) < 0 ? -1 : 1;

  // Raise ratio to the lcm of the radical denominators; that power is rational.
  Integer power = 1;
  double estimated_bits = 0;
  for (const auto& [base, e] : ratio.radicals()) power = lcm(power, e.get_den());
  const double p = power.get_d();
  estimated_bits += p * (static_cast<double>(mpz_sizeinbase(ratio.coefficient().get_num_mpz_t(), 2)) +
                         static_cast<double>(mpz_sizeinbase(ratio.coefficient().get_den_mpz_t(), 2)));
  for (const auto& [base, e] : ratio.radicals())
    estimated_bits += p * e.get_d() * static_cast<double>(mpz_sizeinbase(base.get_mpz_t(), 2));

  if (estimated_bits < 4.0e6 && power.fits_ulong_p()) {
    const long d = power.get_si();
    Rational lifted = pow(ratio.coefficient(), d);
    for (const auto& [base, e] : ratio.radicals()) {
      Rational scaled = e * Rational(power);
      lifted *= pow(Rational(base), scaled.get_num().get_si());
    }
    const int c = cmp(lifted, 1);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }

  // The ratio is irrational, so it differs from one; refine until the enclosure decides.
  for (int bits = 256; bits <= (1 << 20); bits *= 4) {
    if (ratio.enclosure(Rounding::down, bits) > 1) return 1;
    if (ratio.enclosure(Rounding::up, bits) < 1) return -1;
  }
  throw std::runtime_error("PowerProduct comparison did not resolve");
}

std::string PowerProduct::to_string() const {
  std::string out = cyclevol::to_string(coeff_);
  if (radicals_.empty()) return out;
  std::string tail;
  for (const auto& [base, e] : radicals_) {
    if (!tail.empty()) tail += "*";
    tail += base.get_str() + "^(" + cyclevol::to_string(e) + ")";
  }
  if (coeff_ == 1) return tail;
  if (coeff_ == -1) return "-" + tail;
  if (!is_integer(coeff_)) out = "(" + out + ")";
  return out + "*" + tail;
}

std::string PowerProduct::decimal(int digits, Rounding dir) const {
  if (digits < 1) throw std::invalid_argument("decimal precision must be positive");
  Mpfr value(static_cast<mpfr_prec_t>(digits * 4 + 64));
  evaluate(value.value, *this, dir);
  char* buffer = nullptr;
  const char* format = dir == Rounding::up ? "%.*RUg" : (dir == Rounding::down ? "%.*RDg" : "%.*RNg");
  if (mpfr_asprintf(&buffer, format, digits, value.value) < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::unique_ptr<char, decltype(&mpfr_free_str)> guard(buffer, &mpfr_free_str);
  return std::string(buffer);
}

Rational PowerProduct::enclosure(Rounding dir, int bits) const {
  Mpfr value(static_cast<mpfr_prec_t>(bits + 32));
  evaluate(value.value, *this, dir);
  Rational out;
  mpfr_get_q(out.get_mpq_t(), value.value);
  return out;
}

double PowerProduct::approx() const {
  Mpfr value(96);
  evaluate(value.value, *this, Rounding::nearest);
  return mpfr_get_d(value.value, MPFR_RNDN);
}

}  // namespace cyclevol
