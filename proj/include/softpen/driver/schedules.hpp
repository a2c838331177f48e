#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>

#include "softpen/errors.hpp"
#include "softpen/softplus.hpp"

namespace softpen {

/// Inputs of the strongly convex δ schedule and the violation bound.
struct ScheduleInputs {
  double epsilon = 0.0;
  std::size_t m = 0;
  double mu = 0.0;
  double xi = 0.0;
  /// Growth aggregate U = 2·C1_max·‖A(x*)‖∞ + 2m·C0_max, or an upper bound.
  double U = 0.0;
  double c0_max = 0.0;
  double c1_max = 0.0;
};

/// U = 2·C1·‖A(x*)‖∞ + 2m·C0.
inline double growth_aggregate(std::size_t m, double c0_max, double c1_max,
                               double constraint_inf_norm) {
  return 2.0 * c1_max * constraint_inf_norm +
         2.0 * static_cast<double>(m) * c0_max;
}

/// δ_ε = ε/(4m·log 2), the general convex schedule.
inline double delta_schedule_convex(double epsilon, std::size_t m) {
  if (!(epsilon > 0.0)) throw ScheduleError("epsilon must be > 0");
  if (m < 1) throw ScheduleError("need at least one constraint");
  return epsilon / (4.0 * static_cast<double>(m) * kLog2);
}

/// Upper end Uξe⁻²/μ of the δ range on which the violation bound is claimed.
inline double delta_window_cap(double U, double xi, double mu) {
  return U * xi * std::exp(-2.0) / mu;
}

/**
 * Largest Δ_max ≤ Uξe⁻²/μ such that 2m·C1·δ·log(Uξ/(μδ)) ≤ U for every
 * δ ≤ Δ_max. The left side is increasing on the capped interval, so plain
 * bisection applies (relative tolerance 1e-12, at most 200 halvings). The
 * returned end always satisfies the inequality.
 */
inline double delta_validity_window(std::size_t m, double U, double xi,
                                    double mu, double c1_max) {
  if (!(mu > 0.0)) throw DomainError("validity window requires mu > 0");
  if (!(U > 0.0) || !(xi > 0.0)) {
    throw DomainError("validity window requires U > 0 and xi > 0");
  }
  const double cap = delta_window_cap(U, xi, mu);
  if (c1_max <= 0.0) return cap;
  const double scale = U * xi / mu;
  auto lhs = [&](double d) {
    return 2.0 * static_cast<double>(m) * c1_max * d * std::log(scale / d);
  };
  if (lhs(cap) <= U) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) <= U) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// √m·δ·log(Uξ/(μδ)); zero at δ = 0. Rejects δ outside the validity window.
inline double theorem_violation_bound(std::size_t m, double delta, double U,
                                      double xi, double mu,
                                      double c1_max = 0.0) {
  if (!(mu > 0.0)) throw DomainError("violation bound requires mu > 0");
  if (delta < 0.0) throw DomainError("delta must be >= 0");
  if (delta == 0.0) return 0.0;
  const double window = delta_validity_window(m, U, xi, mu, c1_max);
  if (delta > window * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "delta = " << delta << " lies outside the validity window [0, "
        << window << "]";
    throw DomainError(msg.str());
  }
  return std::sqrt(static_cast<double>(m)) * delta *
         std::log(U * xi / (mu * delta));
}

/// Largest ε accepted by the strongly convex schedule: √m·U·ξ·e⁻²/μ.
inline double strongly_convex_epsilon_max(const ScheduleInputs& in) {
  return std::sqrt(static_cast<double>(in.m)) * in.U * in.xi * std::exp(-2.0) /
         in.mu;
}

/**
 * δ_ε = ε/(4√m) · log(2√m·U·ξ/(μ·ε))⁻¹ for μ > 0.
 *
 * Before returning, checks 2√m·δ_ε·log(Uξ/(μδ_ε)) ≤ ε and that δ_ε lies in
 * the validity window; either failing is reported as a ScheduleError.
 */
inline double delta_schedule_strongly_convex(const ScheduleInputs& in) {
  if (!(in.mu > 0.0)) throw ScheduleError("strongly convex schedule needs mu > 0");
  if (in.m < 1) throw ScheduleError("need at least one constraint");
  if (!(in.U > 0.0) || !(in.xi > 0.0)) {
    throw ScheduleError("strongly convex schedule needs U > 0 and xi > 0");
  }
  const double eps_max = strongly_convex_epsilon_max(in);
  if (!(in.epsilon > 0.0) || in.epsilon > eps_max) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "epsilon = " << in.epsilon << " outside the admissible interval (0, "
        << eps_max << "]";
    throw ScheduleError(msg.str());
  }
  const double rm = std::sqrt(static_cast<double>(in.m));
  const double delta =
      in.epsilon / (4.0 * rm) /
      std::log(2.0 * rm * in.U * in.xi / (in.mu * in.epsilon));
  const double achieved =
      2.0 * rm * delta * std::log(in.U * in.xi / (in.mu * delta));
  if (achieved > in.epsilon * (1.0 + 1e-12)) {
    throw ScheduleError("schedule guarantee 2*sqrt(m)*delta*log(U*xi/(mu*delta)) "
                        "<= epsilon failed");
  }
  const double window =
      delta_validity_window(in.m, in.U, in.xi, in.mu, in.c1_max);
  if (delta > window) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "scheduled delta = " << delta
        << " exceeds the validity window end " << window
        << "; decrease epsilon";
    throw ScheduleError(msg.str());
  }
  return delta;
}

/// (−ξ‖Ā‖₁, m·ξ·δ·log 2): the interval holding F(x*_{ξ,δ}) − F*.
inline std::pair<double, double> value_gap_bounds(double xi, std::size_t m,
                                                  double delta,
                                                  double violation_l1) {
  return {-xi * violation_l1, static_cast<double>(m) * xi * delta * kLog2};
}

/// (penalized_gap + m·ξ·δ·log 2)/(ξ − ξ̄), a certified bound on ‖Ā(x̂)‖₁.
inline double prop3_l1_bound(double xi, double xi_bar, std::size_t m,
                             double delta, double penalized_gap) {
  if (!(xi > xi_bar)) {
    throw DomainError("l1 violation bound requires xi > xi_bar");
  }
  return (penalized_gap + static_cast<double>(m) * xi * delta * kLog2) /
         (xi - xi_bar);
}

}  // namespace softpen
