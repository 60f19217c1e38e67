#include "cyclevol/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace cyclevol {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!is_digits(body)) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational ratio(const Integer& p, const Integer& q) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  Rational out(p, q);
  out.canonicalize();
  return out;
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (!(whole.empty() || is_digits(whole)) || !(frac.empty() || is_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    Integer num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    Integer den = pow(Integer(10), frac.size());
    Rational q(negative ? Integer(-num) : num, den);
    q.canonicalize();
    return q;
  }

  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero raised to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(num, den);
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer factorial(unsigned long n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Integer multinomial(std::span<const int> parts) {
  Integer out = 1;
  unsigned long running = 0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial with negative part");
    running += static_cast<unsigned long>(p);
    out *= binomial(running, static_cast<unsigned long>(p));
  }
  return out;
}

Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer ceil(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite double cannot be made rational");
  Rational q(x);
  return q;
}

Rational dyadic_floor(double x, int bits) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite double cannot be made rational");
  Rational scaled = from_double(x) * pow(Rational(2), bits);
  return Rational(floor(scaled)) / pow(Rational(2), bits);
}

}  // namespace cyclevol
