#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>

#include "softpen/builders.hpp"
#include "softpen/softplus.hpp"
#include "softpen/zoo/instance.hpp"

namespace softpen {

/// Box radius of the trust region attached to the entrywise linear family.
inline constexpr double kEntrywiseLinearBox = 1e3;

namespace detail {

inline void check_entrywise_sizes(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) {
    throw DomainError("entrywise instances need 1 <= m <= n (got n=" +
                      std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
}

/// −xᵢ ≤ 0 for i < m, with (L_a, C0, C1) = (0, 1, 0).
inline std::vector<Constraint> nonnegativity_constraints(std::size_t n,
                                                         std::size_t m) {
  std::vector<Constraint> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Vec a = Vec::Zero(static_cast<Eigen::Index>(n));
    a[static_cast<Eigen::Index>(i)] = -1.0;
    out.push_back(linear_constraint(a, 0.0));
  }
  return out;
}

inline ReferenceSolution entrywise_reference(std::size_t n, std::size_t m,
                                             double tail_value,
                                             double f_star) {
  ReferenceSolution ref;
  ref.x_star = Vec::Zero(static_cast<Eigen::Index>(n));
  ref.x_star.tail(static_cast<Eigen::Index>(n - m)).setConstant(tail_value);
  ref.f_star = f_star;
  ref.multipliers = Vec::Ones(static_cast<Eigen::Index>(m));
  std::vector<std::size_t> active(m);
  for (std::size_t i = 0; i < m; ++i) active[i] = i;
  ref.active_set = active;
  return ref;
}

}  // namespace detail

/**
 * Root of 1 + t − ξ·σ(−t/δ) = 0 on [−ξ, 0], the per-coordinate minimizer of
 * the penalized entrywise quadratic family. Bisection runs until the bracket
 * stops shrinking in floating point.
 */
inline double entrywise_quadratic_root(double xi, double delta) {
  if (!(xi >= 1.0 && xi < 2.0)) {
    throw DomainError("entrywise quadratic oracle needs xi in [1, 2)");
  }
  if (!(delta > 0.0)) throw DomainError("entrywise oracle needs delta > 0");
  auto phi = [&](double t) { return 1.0 + t - xi * softplus_deriv(delta, -t); };
  double lo = -xi;
  double hi = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (phi(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(phi(lo)) <= std::abs(phi(hi)) ? lo : hi;
}

/**
 * min Σ_{i<m} xᵢ  s.t.  xᵢ ≥ 0 (i < m), with ψ the indicator of
 * ‖x‖∞ ≤ 10³ so the general convex solvers see a compact domain. The box is
 * inactive at every penalized optimum the oracle accepts.
 *
 * x* = 0, F* = 0, λ* = e (ξ̄ = 1). For ξ ∈ (1, 2) and δ > 0 the penalized
 * minimizer has xᵢ = δ·log(ξ − 1) for i < m and 0 elsewhere.
 */
inline ZooInstance make_entrywise_linear(std::size_t n, std::size_t m,
                                         double xi_hint = 1.5) {
  detail::check_entrywise_sizes(n, m);
  const auto nn = static_cast<Eigen::Index>(n);
  auto problem = std::make_shared<ConstrainedProblem>();
  problem->name = "entrywise_linear";
  problem->dimension = nn;
  QuadraticForm objective;
  objective.b = Vec::Zero(nn);
  objective.b.head(static_cast<Eigen::Index>(m)).setOnes();
  problem->components.push_back(quadratic_component(objective, 0.0));
  problem->proximal = ProximalTerm::box(kEntrywiseLinearBox);
  problem->constraints = detail::nonnegativity_constraints(n, m);
  problem->mu = 0.0;
  problem->smoothness = 0.0;
  problem->slater = SlaterPoint{Vec::Ones(nn), 1.0};
  problem->validate();

  ZooInstance inst;
  inst.problem = problem;
  inst.reference = detail::entrywise_reference(n, m, 0.0, 0.0);
  inst.generator = {"entrywise_linear",
                    0,
                    {{"n", static_cast<double>(n)},
                     {"m", static_cast<double>(m)},
                     {"xi_hint", xi_hint}}};
  inst.exact_penalized_solution = [n, m](double xi, double delta) {
    if (!(xi > 1.0 && xi < 2.0)) {
      throw DomainError("entrywise linear oracle needs xi in (1, 2)");
    }
    if (!(delta > 0.0)) throw DomainError("entrywise oracle needs delta > 0");
    Vec x = Vec::Zero(static_cast<Eigen::Index>(n));
    x.head(static_cast<Eigen::Index>(m)).setConstant(delta * std::log(xi - 1.0));
    return x;
  };
  return inst;
}

/**
 * min ½‖x‖² + eᵀx  s.t.  xᵢ ≥ 0 (i < m); μ = L_f = 1.
 *
 * x*ᵢ = 0 for i < m and −1 otherwise, F* = −(n − m)/2, λ* = e (ξ̄ = 1). The
 * penalized minimizer has xᵢ = entrywise_quadratic_root(ξ, δ) for i < m.
 */
inline ZooInstance make_entrywise_quadratic(std::size_t n, std::size_t m) {
  detail::check_entrywise_sizes(n, m);
  const auto nn = static_cast<Eigen::Index>(n);
  auto problem = std::make_shared<ConstrainedProblem>();
  problem->name = "entrywise_quadratic";
  problem->dimension = nn;
  QuadraticForm objective;
  objective.Q = Mat::Identity(nn, nn);
  objective.b = Vec::Ones(nn);
  problem->components.push_back(quadratic_component(objective, 1.0));
  problem->constraints = detail::nonnegativity_constraints(n, m);
  problem->mu = 1.0;
  problem->smoothness = 1.0;
  problem->slater = SlaterPoint{Vec::Ones(nn), 1.0};
  problem->validate();

  ZooInstance inst;
  inst.problem = problem;
  inst.reference = detail::entrywise_reference(
      n, m, -1.0, -0.5 * static_cast<double>(n - m));
  inst.generator = {"entrywise_quadratic",
                    0,
                    {{"n", static_cast<double>(n)},
                     {"m", static_cast<double>(m)}}};
  inst.exact_penalized_solution = [n, m](double xi, double delta) {
    Vec x = Vec::Constant(static_cast<Eigen::Index>(n), -1.0);
    x.head(static_cast<Eigen::Index>(m))
        .setConstant(entrywise_quadratic_root(xi, delta));
    return x;
  };
  return inst;
}

}  // namespace softpen
