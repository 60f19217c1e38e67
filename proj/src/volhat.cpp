#include "cyclevol/volhat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cyclevol::volhat {

using ring::basis;
using ring::Monomial;

namespace {

constexpr double kEnumerationLimit = 2.0e6;
constexpr int kRationalBits = 48;

double log_of(const Rational& q) {
  long num_exp = 0;
  long den_exp = 0;
  const double num = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  const double den = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  return std::log(num) - std::log(den) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

// Rational r <= x > 0 agreeing with x to about kRationalBits significant bits.
Rational rational_below(double x) {
  if (!(x > 0) || !std::isfinite(x)) throw std::domain_error("expected a positive finite value");
  int exponent = 0;
  std::frexp(x, &exponent);
  const int bits = kRationalBits - exponent;
  Rational scale = pow(Rational(2), bits);
  Rational out = Rational(floor(from_double(x) * scale)) / scale;
  if (out <= 0) out = Rational(1) / pow(Rational(2), bits + 1);
  return out;
}

// Continued-fraction convergent of x > 0 within rel * x, or nullopt if none has
// a denominator below 10^9.
std::optional<Rational> simplest_near(double x, double rel) {
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  for (int i = 0; i < 64; ++i) {
    const double whole = std::floor(rest);
    const Integer a(whole);
    const Integer p2 = a * p1 + p0;
    const Integer q2 = a * q1 + q0;
    if (q2 > 1000000000) break;
    const Rational candidate = ratio(p2, q2);
    if (candidate > 0 && std::abs(candidate.get_d() - x) <= rel * x) return candidate;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    if (rest - whole <= 0) break;
    rest = 1 / (rest - whole);
  }
  return std::nullopt;
}

template <class T>
bool is_zero_pivot(const T& v) {
  if constexpr (std::is_same_v<T, double>)
    return std::abs(v) < 1e-12;
  else
    return v == 0;
}

template <class T>
T magnitude(const T& v) {
  if constexpr (std::is_same_v<T, double>)
    return std::abs(v);
  else
    return abs(v);
}

// Gaussian elimination; nullopt when the matrix is singular.
template <class T>
std::optional<std::vector<T>> solve(std::vector<std::vector<T>> m, std::vector<T> rhs) {
  const std::size_t size = rhs.size();
  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < size; ++row)
      if (magnitude(m[row][col]) > magnitude(m[pivot][col])) pivot = row;
    if (is_zero_pivot(m[pivot][col])) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = 0; row < size; ++row) {
      if (row == col || m[row][col] == T(0)) continue;
      const T factor = m[row][col] / m[col][col];
      for (std::size_t j = col; j < size; ++j) m[row][j] -= factor * m[col][j];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::vector<T> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = rhs[i] / m[i][i];
  return out;
}

std::size_t rank_of(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t row = rank + 1; row < m.size(); ++row) {
      if (m[row][col] == 0) continue;
      const Rational factor = m[row][col] / m[rank][col];
      for (std::size_t j = col; j < cols; ++j) m[row][j] -= factor * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Calls visit(indices) for every size-`choose` subset of [0, total).
void for_each_subset(std::size_t total, std::size_t choose, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (choose > total) return;
  std::vector<std::size_t> idx(choose);
  for (std::size_t i = 0; i < choose; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = choose;
    while (i > 0 && idx[i - 1] == total - choose + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < choose; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Positive compositions of `total` into `parts` parts, as fractions of total.
std::vector<std::vector<double>> simplex_seeds(int parts, int total, std::size_t cap = 200000) {
  std::vector<std::vector<double>> out;
  total = std::max(total, parts);
  std::vector<int> current(static_cast<std::size_t>(parts), 0);
  std::function<void(int, int)> rec = [&](int index, int remaining) {
    if (out.size() >= cap) return;
    if (index == parts - 1) {
      current[static_cast<std::size_t>(index)] = remaining;
      std::vector<double> u;
      for (int v : current) u.push_back(static_cast<double>(v) / total);
      out.push_back(std::move(u));
      return;
    }
    for (int v = 1; v <= remaining - (parts - 1 - index); ++v) {
      current[static_cast<std::size_t>(index)] = v;
      rec(index + 1, remaining - v);
    }
  };
  rec(0, total);
  return out;
}

struct Constraint {
  std::vector<int> exponents;
  Rational bound;  // alpha_a / multinomial(c; a)
  double log_bound;
};

OptimizationResult infeasible(const Options& options, std::string note) {
  OptimizationResult r;
  r.status = Status::infeasible;
  r.value = 0;
  r.exact = PowerProduct();
  r.tolerance = options.tol;
  r.note = std::move(note);
  return r;
}

// Exact: alpha - [A^c] pseudo-effective, i.e. multinomial(c; a) x^a <= alpha_a for all a.
Rational feasibility_slack(const std::vector<Constraint>& constraints, const std::vector<Rational>& x) {
  Rational slack = -1;
  for (const auto& con : constraints) {
    Rational monomial = 1;
    for (std::size_t i = 0; i < x.size(); ++i) monomial *= pow(x[i], con.exponents[i]);
    const Rational s = con.bound / monomial;
    if (slack < 0 || s < slack) slack = s;
  }
  return slack;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::boundary: return "boundary";
    case Status::infeasible: return "infeasible";
  }
  return "unknown";
}

Status status_from_string(const std::string& name) {
  if (name == "converged") return Status::converged;
  if (name == "boundary") return Status::boundary;
  if (name == "infeasible") return Status::infeasible;
  throw std::invalid_argument("unknown status '" + name + "'");
}

OptimizationResult volhat_sup(const CycleClass& alpha, const Options& options) {
  const auto& x = alpha.variety();
  const int c = alpha.codim();
  if (c == 0) throw std::invalid_argument("volhat needs a class of dimension k < n");
  const std::size_t r = x.dims().size();

  if (!ring::is_pseudoeffective(alpha)) return infeasible(options, "alpha is not pseudo-effective");

  std::vector<Constraint> constraints;
  for (const Monomial& m : basis(x, c)) {
    const Rational coeff = alpha.coefficient(m);
    if (coeff == 0)
      return infeasible(options, "alpha is on the boundary of the pseudo-effective cone; no big nef A is feasible");
    const Rational bound = coeff / Rational(multinomial(m.exponents));
    constraints.push_back({m.exponents, bound, log_of(bound)});
  }

  const std::vector<int>& target = x.dims();
  const Rational top_multinomial(multinomial(target));
  std::vector<std::vector<int>> rows;
  for (const auto& con : constraints) rows.push_back(con.exponents);
  const std::size_t rank = rank_of(rows);
  const double subsets = binomial(constraints.size(), rank).get_d();
  if (subsets > kEnumerationLimit)
    throw std::length_error("basis enumeration of " + std::to_string(subsets) + " subsets exceeds the solver limit");

  OptimizationResult result;
  result.tolerance = options.tol;

  struct DualCandidate {
    double log_value;
    std::vector<std::size_t> subset;
    std::vector<Rational> weights;
  };
  std::vector<DualCandidate> duals;
  double best_primal = -std::numeric_limits<double>::infinity();
  std::vector<double> best_y;

  for_each_subset(constraints.size(), rank, [&](const std::vector<std::size_t>& subset) {
    ++result.iterations;
    const std::size_t size = subset.size();
    std::vector<std::vector<Rational>> gram(size, std::vector<Rational>(size));
    std::vector<std::vector<double>> gram_d(size, std::vector<double>(size));
    std::vector<Rational> projected(size);
    std::vector<double> rhs_primal(size);
    for (std::size_t i = 0; i < size; ++i) {
      const auto& ai = constraints[subset[i]].exponents;
      for (std::size_t j = 0; j < size; ++j) {
        const auto& aj = constraints[subset[j]].exponents;
        long dot = 0;
        for (std::size_t l = 0; l < r; ++l) dot += static_cast<long>(ai[l]) * aj[l];
        gram[i][j] = dot;
        gram_d[i][j] = static_cast<double>(dot);
      }
      long dot = 0;
      for (std::size_t l = 0; l < r; ++l) dot += static_cast<long>(ai[l]) * target[l];
      projected[i] = dot;
      rhs_primal[i] = constraints[subset[i]].log_bound;
    }

    auto weights = solve(gram, projected);
    if (!weights) return;  // dependent subset

    // Dual: sum weights_b * b == target with weights >= 0.
    bool nonnegative = true;
    for (const auto& w : *weights)
      if (w < 0) nonnegative = false;
    if (nonnegative) {
      std::vector<Rational> combo(r, Rational(0));
      for (std::size_t i = 0; i < size; ++i)
        for (std::size_t l = 0; l < r; ++l) combo[l] += (*weights)[i] * constraints[subset[i]].exponents[l];
      bool matches = true;
      for (std::size_t l = 0; l < r; ++l)
        if (combo[l] != target[l]) matches = false;
      if (matches) {
        double log_value = 0;
        for (std::size_t i = 0; i < size; ++i) log_value += (*weights)[i].get_d() * constraints[subset[i]].log_bound;
        duals.push_back({log_value, subset, *weights});
      }
    }

    // Primal vertex inside the span of the chosen rows.
    auto z = solve(gram_d, rhs_primal);
    if (!z) return;
    std::vector<double> y(r, 0.0);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t l = 0; l < r; ++l) y[l] += (*z)[i] * constraints[subset[i]].exponents[l];
    for (const auto& con : constraints) {
      double lhs = 0;
      for (std::size_t l = 0; l < r; ++l) lhs += con.exponents[l] * y[l];
      if (lhs > con.log_bound + 1e-9 * (1 + std::abs(con.log_bound))) return;
    }
    double objective = 0;
    for (std::size_t l = 0; l < r; ++l) objective += target[l] * y[l];
    if (objective > best_primal) {
      best_primal = objective;
      best_y = y;
    }
  });

  if (duals.empty()) throw std::logic_error("volhat_sup: no dual-feasible basis; the program should always be bounded");

  // Exact optimum: smallest dual value, ties in double precision resolved exactly.
  double best_log = std::numeric_limits<double>::infinity();
  for (const auto& d : duals) best_log = std::min(best_log, d.log_value);
  std::optional<PowerProduct> exact;
  for (const auto& d : duals) {
    if (d.log_value > best_log + 1e-9 * (1 + std::abs(best_log))) continue;
    PowerProduct value(top_multinomial);
    for (std::size_t i = 0; i < d.subset.size(); ++i)
      if (d.weights[i] != 0) value *= PowerProduct::power(constraints[d.subset[i]].bound, d.weights[i]);
    if (!exact || value < *exact) exact = value;
  }
  result.exact = exact;
  result.value = exact->approx();

  // Optimizer: exponentiate the primal vertex, round to rationals, shrink until exactly feasible.
  std::vector<double> point(r, 1.0);
  if (!best_y.empty())
    for (std::size_t l = 0; l < r; ++l) point[l] = std::exp(best_y[l]);
  std::vector<Rational> coords;
  for (double v : point) coords.push_back(rational_below(v));
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Rational slack = feasibility_slack(constraints, coords);
    if (slack >= 1) break;
    const double shrink = std::pow(slack.get_d(), 1.0 / c) * (1 - 1e-12);
    const Rational factor = rational_below(shrink);
    for (auto& v : coords) v *= factor;
  }
  if (feasibility_slack(constraints, coords) < 1) throw std::logic_error("volhat_sup: could not certify a feasible optimizer");
  DivisorClass optimizer(x, coords);
  const Rational achieved = ring::vol_divisor(optimizer);
  result.argopt = optimizer;
  result.witness = PowerProduct(achieved);

  // Independent grid of rays, each pushed to the feasibility boundary.
  double grid_best = 0;
  const double log_top = log_of(top_multinomial);
  for (const auto& u : simplex_seeds(static_cast<int>(r), options.grid)) {
    double log_scale = std::numeric_limits<double>::infinity();
    for (const auto& con : constraints) {
      double lhs = 0;
      for (std::size_t l = 0; l < r; ++l) lhs += con.exponents[l] * std::log(u[l]);
      log_scale = std::min(log_scale, (con.log_bound - lhs) / c);
    }
    double log_value = log_top;
    for (std::size_t l = 0; l < r; ++l) log_value += target[l] * (std::log(u[l]) + log_scale);
    grid_best = std::max(grid_best, std::exp(log_value));
  }
  result.grid_value = grid_best;

  const double gap = result.value - achieved.get_d();
  const double allowed = options.tol.get_d() * std::max(1.0, result.value);
  result.status = Status::converged;
  if (gap > allowed) result.note = "rounded optimizer loses more than the tolerance against the exact optimum";
  return result;
}

OptimizationResult volhat_curve_xiao(const CycleClass& alpha, const Options& options) {
  const auto& x = alpha.variety();
  const int n = x.dimension();
  if (alpha.dim() != 1) throw std::invalid_argument("the curve formulation needs a class of dimension 1");
  const std::size_t r = x.dims().size();
  const std::vector<int>& dims = x.dims();

  if (!ring::is_pseudoeffective(alpha)) return infeasible(options, "alpha is not pseudo-effective");

  // A.alpha = sum_i x_i * weight_i with weight_i the coefficient of H^{N - e_i}.
  std::vector<Rational> weights(r);
  for (std::size_t i = 0; i < r; ++i) {
    Monomial m{dims};
    m.exponents[i] -= 1;
    weights[i] = alpha.coefficient(m);
  }
  const Rational top_multinomial(multinomial(dims));
  const Rational root = ratio(1, n - 1);

  auto exact_objective = [&](const std::vector<Rational>& coords) {
    Rational pairing = 0;
    Rational volume = top_multinomial;
    for (std::size_t i = 0; i < r; ++i) {
      pairing += coords[i] * weights[i];
      volume *= pow(coords[i], dims[i]);
    }
    return PowerProduct(pow(pairing, n) / volume).pow(root);
  };

  OptimizationResult result;
  result.tolerance = options.tol;

  std::vector<std::size_t> vanishing;
  for (std::size_t i = 0; i < r; ++i)
    if (weights[i] == 0) vanishing.push_back(i);

  if (!vanishing.empty()) {
    result.status = Status::boundary;
    result.value = 0;
    result.exact = PowerProduct();
    if (vanishing.size() == r) {
      result.note = "alpha is zero";
      result.argopt = ring::hyperplane_sum(x);
      result.witness = PowerProduct();
      return result;
    }
    // Push the mass onto the factors alpha does not see until the objective drops below tol.
    Rational small = ratio(1, 2);
    for (int step = 0; step < 4096; ++step, ++result.iterations) {
      std::vector<Rational> coords(r, small);
      for (auto i : vanishing) coords[i] = 1;
      PowerProduct value = exact_objective(coords);
      if (value.approx() <= options.tol.get_d() || step == 4095) {
        result.argopt = DivisorClass(x, coords);
        result.witness = value;
        break;
      }
      small /= 2;
    }
    result.note = "infimum 0 approached along a nef ray where alpha has no weight";
    return result;
  }

  std::vector<double> w_weights;
  for (const auto& w : weights) w_weights.push_back(w.get_d());
  const double nd = n;

  // f(w) = n log sum_i c_i e^{w_i} - sum_i n_i w_i, invariant under w -> w + t(1,...,1).
  auto f = [&](const std::vector<double>& w) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r; ++i) peak = std::max(peak, std::log(w_weights[i]) + w[i]);
    double sum = 0;
    for (std::size_t i = 0; i < r; ++i) sum += std::exp(std::log(w_weights[i]) + w[i] - peak);
    double out = nd * (peak + std::log(sum));
    for (std::size_t i = 0; i < r; ++i) out -= dims[i] * w[i];
    return out;
  };

  std::vector<double> best_w(r, 0.0);
  double best_f = std::numeric_limits<double>::infinity();
  double best_seed_f = std::numeric_limits<double>::infinity();
  const std::size_t free_vars = r - 1;

  for (const auto& seed : simplex_seeds(static_cast<int>(r), options.grid)) {
    std::vector<double> w(r);
    for (std::size_t i = 0; i < r; ++i) w[i] = std::log(seed[i]) - std::log(seed[r - 1]);
    double current = f(w);
    best_seed_f = std::min(best_seed_f, current);
    for (int iter = 0; iter < options.max_iterations && free_vars > 0; ++iter) {
      ++result.iterations;
      double peak = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < r; ++i) peak = std::max(peak, std::log(w_weights[i]) + w[i]);
      std::vector<double> p(r);
      double total = 0;
      for (std::size_t i = 0; i < r; ++i) total += (p[i] = std::exp(std::log(w_weights[i]) + w[i] - peak));
      for (auto& v : p) v /= total;

      std::vector<double> grad(free_vars);
      std::vector<std::vector<double>> hess(free_vars, std::vector<double>(free_vars));
      for (std::size_t i = 0; i < free_vars; ++i) {
        grad[i] = nd * p[i] - dims[i];
        for (std::size_t j = 0; j < free_vars; ++j) hess[i][j] = nd * ((i == j ? p[i] : 0.0) - p[i] * p[j]);
      }
      std::vector<double> neg_grad(free_vars);
      for (std::size_t i = 0; i < free_vars; ++i) neg_grad[i] = -grad[i];
      auto direction = solve(hess, neg_grad);
      if (!direction) direction = neg_grad;
      double slope = 0;
      for (std::size_t i = 0; i < free_vars; ++i) slope += grad[i] * (*direction)[i];
      if (slope >= 0) {
        direction = neg_grad;
        slope = 0;
        for (std::size_t i = 0; i < free_vars; ++i) slope -= grad[i] * grad[i];
      }
      if (-slope / 2 < 1e-15) break;

      double step = 1;
      std::vector<double> trial(w);
      double trial_f = current;
      for (int halving = 0; halving < 60; ++halving, step /= 2) {
        for (std::size_t i = 0; i < free_vars; ++i) trial[i] = w[i] + step * (*direction)[i];
        trial_f = f(trial);
        if (trial_f <= current + 0.25 * step * slope) break;
      }
      if (!(trial_f < current)) break;
      const double improvement = std::exp(current / (nd - 1)) - std::exp(trial_f / (nd - 1));
      w = trial;
      current = trial_f;
      if (improvement < options.tol.get_d() * 1e-6 * std::max(1.0, std::exp(current / (nd - 1)))) break;
    }
    if (current < best_f) {
      best_f = current;
      best_w = w;
    }
  }

  // Back to the simplex, rounded to rationals; the objective there is an exact upper bound.
  double norm = 0;
  for (double v : best_w) norm += std::exp(v);
  std::vector<Rational> coords;
  std::vector<Rational> simple;
  for (double v : best_w) {
    const double target = std::exp(v) / norm;
    coords.push_back(rational_below(target));
    simple.push_back(simplest_near(target, 1e-8).value_or(coords.back()));
  }
  PowerProduct witness = exact_objective(coords);
  if (const PowerProduct alt = exact_objective(simple); alt <= witness) {
    witness = alt;
    coords = simple;
  }
  result.argopt = DivisorClass(x, coords);
  result.witness = witness;
  result.grid_value = std::exp((best_seed_f - log_of(top_multinomial)) / (nd - 1));
  result.value = witness.approx();
  result.status = Status::converged;
  return result;
}

KtResult kt_check(const DivisorClass& a, const DivisorClass& b, int k) {
  if (!(a.variety() == b.variety())) throw std::invalid_argument("divisors live on different varieties");
  if (!a.is_nef() || !b.is_nef()) throw std::invalid_argument("kt_check needs nef divisors");
  const int n = a.variety().dimension();
  if (k < 0 || k > n) throw std::invalid_argument("kt_check needs 0 <= k <= n");
  KtResult out;
  out.lhs = ring::degree(ring::intersect(ring::divisor_power(a, n - k), ring::divisor_power(b, k)));
  auto factor = [&](const DivisorClass& d, int numerator) {
    if (numerator == 0) return PowerProduct(1);
    return PowerProduct::power(ring::vol_divisor(d), ratio(numerator, n));
  };
  out.rhs = factor(a, n - k) * factor(b, k);
  out.holds = compare(PowerProduct(out.lhs), out.rhs) >= 0;
  return out;
}

HomogeneityResult volhat_homogeneity_check(const CycleClass& alpha, const Rational& c, const Options& options) {
  if (c <= 0) throw std::invalid_argument("homogeneity needs c > 0");
  const int n = alpha.variety().dimension();
  const int k = alpha.dim();
  const OptimizationResult base = volhat_sup(alpha, options);
  const OptimizationResult scaled = volhat_sup(alpha * c, options);
  HomogeneityResult out;
  out.base = base.value;
  out.scaled = scaled.value;
  out.expected = PowerProduct::power(c, ratio(n, n - k)).approx() * base.value;
  out.holds = std::abs(out.scaled - out.expected) <= options.tol.get_d() * (1 + out.base);
  return out;
}

DualityResult weak_duality_check(const CycleClass& alpha, const Options& options) {
  const OptimizationResult sup = volhat_sup(alpha, options);
  const OptimizationResult inf = volhat_curve_xiao(alpha, options);
  DualityResult out;
  out.sup_value = sup.value;
  out.inf_value = inf.value;
  out.gap = inf.value - sup.value;
  out.holds = sup.value <= inf.value + options.tol.get_d();
  return out;
}

}  // namespace cyclevol::volhat
