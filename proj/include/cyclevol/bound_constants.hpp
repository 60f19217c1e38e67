#pragma once

#include "cyclevol/rational.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace cyclevol::constants {

/// Exponent-correction constants for the mobility-count bounds, defined for
/// 0 <= k < n by e(n, n-1) = t(n, n-1) = 1 and
///
///   e(n,k) = ((n-k-1)/(n-k) e(n-1,k)) / ((n-1)/(n-k-1) - e(n-1,k))
///   t(n,k) = min{ (n-k-1)/(n-1) t(n-1,k),
///                 ((n-k-1)/(n-k) t(n-1,k)) / ((n-1)/(n-k-1) - t(n-1,k)) }
///
/// Values satisfy 0 < t(n,k) <= e(n,k) <= 1/(n-k). The upper inequality is
/// attained for k = 1 (e(n,1) = 1/(n-1)), so it is not strict in general.
///
/// For k = 0 and n >= 2 the first step divides by (n-1)/(n-1) - 1 = 0, so the
/// recursion has no value there; lookups throw std::domain_error.
///
/// The table memoizes both recursions behind a mutex; lookups are safe from
/// any thread.
class RecursionTable {
 public:
  Rational epsilon(int n, int k);
  Rational tau(int n, int k);

  /// Process-wide table.
  static RecursionTable& shared();

 private:
  Rational epsilon_locked(int n, int k);
  Rational tau_locked(int n, int k);

  std::mutex mutex_;
  std::map<std::pair<int, int>, Rational> epsilon_;
  std::map<std::pair<int, int>, Rational> tau_;
};

/// Throws std::invalid_argument unless 0 <= k < n, std::domain_error when
/// the recursion is undefined (see defined()).
Rational epsilon(int n, int k);
Rational tau(int n, int k);

/// True iff 0 <= k < n and the recursion has a value: k >= 1 or n == 1.
bool defined(int n, int k);

}  // namespace cyclevol::constants
