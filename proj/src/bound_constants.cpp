#include "cyclevol/bound_constants.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cyclevol::constants {

namespace {

void check_range(int n, int k) {
  if (n < 1 || k < 0 || k >= n)
    throw std::invalid_argument("constants need 0 <= k < n, got n = " + std::to_string(n) +
                                ", k = " + std::to_string(k));
}

// ((n-k-1)/(n-k) prev) / ((n-1)/(n-k-1) - prev)
Rational step(int n, int k, const Rational& prev) {
  const Rational numer = ratio(n - k - 1, n - k) * prev;
  const Rational denom = ratio(n - 1, n - k - 1) - prev;
  if (denom == 0)
    throw std::domain_error("recursion denominator vanishes at n = " + std::to_string(n) + ", k = " + std::to_string(k));
  Rational out = numer / denom;
  out.canonicalize();
  return out;
}

}  // namespace

RecursionTable& RecursionTable::shared() {
  static RecursionTable table;
  return table;
}

Rational RecursionTable::epsilon(int n, int k) {
  check_range(n, k);
  std::lock_guard lock(mutex_);
  return epsilon_locked(n, k);
}

Rational RecursionTable::tau(int n, int k) {
  check_range(n, k);
  std::lock_guard lock(mutex_);
  return tau_locked(n, k);
}

Rational RecursionTable::epsilon_locked(int n, int k) {
  if (k == n - 1) return Rational(1);
  if (auto it = epsilon_.find({n, k}); it != epsilon_.end()) return it->second;
  Rational value = step(n, k, epsilon_locked(n - 1, k));
  epsilon_.emplace(std::pair{n, k}, value);
  return value;
}

Rational RecursionTable::tau_locked(int n, int k) {
  if (k == n - 1) return Rational(1);
  if (auto it = tau_.find({n, k}); it != tau_.end()) return it->second;
  const Rational prev = tau_locked(n - 1, k);
  Rational shrink = ratio(n - k - 1, n - 1) * prev;
  shrink.canonicalize();
  Rational value = std::min(shrink, step(n, k, prev));
  tau_.emplace(std::pair{n, k}, value);
  return value;
}

Rational epsilon(int n, int k) { return RecursionTable::shared().epsilon(n, k); }
Rational tau(int n, int k) { return RecursionTable::shared().tau(n, k); }

bool defined(int n, int k) { return n >= 1 && k >= 0 && k < n && (k >= 1 || n == 1); }

}  // namespace cyclevol::constants
