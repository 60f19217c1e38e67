#pragma once

#include "cyclevol/cycle_ring.hpp"
#include "cyclevol/power_product.hpp"

#include <optional>
#include <string>

/// The intersection-theoretic volume of a class alpha of dimension k,
///
///   sup { A^n : A big and nef, alpha - [A^{n-k}] pseudo-effective },
///
/// optimized over divisors on X itself (no birational models), and for curve
/// classes the dual infimum (A.alpha / vol(A)^{1/n})^{n/(n-1)} over nef A.
namespace cyclevol::volhat {

using ring::CycleClass;
using ring::DivisorClass;

enum class Status { converged, boundary, infeasible };

const char* to_string(Status s);
Status status_from_string(const std::string& name);

struct Options {
  Rational tol = ratio(1, 1000000);
  /// Seeds per simplex axis for the multi-start stages.
  int grid = 16;
  int max_iterations = 10000;
};

struct OptimizationResult {
  /// Optimal value to double precision (0 when infeasible or on the boundary).
  double value = 0;
  /// Exact optimum when the solver can certify one.
  std::optional<PowerProduct> exact;
  /// Rational optimizer re-verified in exact arithmetic.
  std::optional<DivisorClass> argopt;
  /// Objective at argopt: a lower bound for sup problems, an upper bound for inf problems.
  std::optional<PowerProduct> witness;
  /// Best value seen on the seed grid alone (independent of the main solver).
  std::optional<double> grid_value;
  Status status = Status::infeasible;
  Rational tolerance;
  int iterations = 0;
  std::string note;
};

/// Maximizes A^n over nef A subject to alpha - [A^{n-k}] pseudo-effective.
///
/// With x_i = exp(y_i) the constraints coefficient-wise read
/// a.y <= log(alpha_a / multinomial(n-k; a)) and the objective is
/// sum n_i y_i, a linear program in y. It is solved by enumerating bases of the
/// primal and dual programs; the dual optimum gives the exact value as a
/// product of rational powers and the primal vertex gives the optimizer,
/// which is rounded to rationals and re-checked exactly.
///
/// Throws std::invalid_argument if alpha has codimension 0, or
/// std::length_error if the basis enumeration would be too large.
OptimizationResult volhat_sup(const CycleClass& alpha, const Options& options = {});

/// Minimizes (A.alpha)^n / vol(A) over nef A on the simplex and reports the
/// (n-1)-th root. Smooth and convex in log coordinates; solved by damped Newton
/// from every seed of the simplex grid.
OptimizationResult volhat_curve_xiao(const CycleClass& alpha, const Options& options = {});

struct KtResult {
  Rational lhs;      ///< A^{n-k} . B^k
  PowerProduct rhs;  ///< vol(A)^{(n-k)/n} vol(B)^{k/n}
  bool holds = false;
};

/// Khovanskii-Teissier inequality A^{n-k} B^k >= vol(A)^{(n-k)/n} vol(B)^{k/n},
/// compared exactly.
KtResult kt_check(const DivisorClass& a, const DivisorClass& b, int k);

struct HomogeneityResult {
  double base;     ///< volhat(alpha)
  double scaled;   ///< volhat(c alpha)
  double expected; ///< c^{n/(n-k)} volhat(alpha)
  bool holds = false;
};

/// |volhat(c alpha) - c^{n/(n-k)} volhat(alpha)| <= tol (1 + volhat(alpha)).
HomogeneityResult volhat_homogeneity_check(const CycleClass& alpha, const Rational& c, const Options& options = {});

struct DualityResult {
  double sup_value = 0;
  double inf_value = 0;
  double gap = 0;
  bool holds = false;  ///< sup <= inf + tol
};

/// Runs both formulations on a curve class.
DualityResult weak_duality_check(const CycleClass& alpha, const Options& options = {});

}  // namespace cyclevol::volhat
