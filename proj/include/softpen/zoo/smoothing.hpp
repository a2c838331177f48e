#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "softpen/builders.hpp"
#include "softpen/errors.hpp"
#include "softpen/zoo/instance.hpp"

namespace softpen {

namespace detail {

/// Stable δ'·log Σ exp(vⱼ/δ') and the softmax weights.
inline double log_sum_exp(const Vec& v, double delta_prime, Vec* weights) {
  const double top = v.maxCoeff();
  Vec w = ((v.array() - top) / delta_prime).exp().matrix();
  const double s = w.sum();
  if (weights) *weights = w / s;
  return top + delta_prime * std::log(s);
}

}  // namespace detail

/// â = δ'·log Σⱼ exp(gⱼ/δ') together with its pieces and Δ = δ'·log k.
struct SmoothedConstraint {
  std::vector<Constraint> pieces;
  double delta_prime = 0.0;
  double approx_error = 0.0;
  Constraint constraint;

  double value(const Vec& x) const { return constraint.value(x); }

  /// max_j gⱼ(x), the non-smooth constraint being approximated.
  double max_piece(const Vec& x) const {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& g : pieces) top = std::max(top, g.value(x));
    return top;
  }
};

/**
 * Wraps max_j gⱼ ≤ 0 into the smooth constraint â ≤ 0.
 *
 * `gradient_bound` is G ≥ ‖∇gⱼ‖ on the region of interest. Metadata:
 *   L_a = max L_g + G²/δ',
 *   C1  = max C1ⱼ,
 *   C0  = max C0ⱼ + C1·(Δ + k·δ'/e).
 * The C0 offset covers Σ wⱼ|gⱼ| ≤ |â| + Δ + k·δ'/e for the softmax weights w.
 */
inline SmoothedConstraint smooth_max_constraint(std::vector<Constraint> pieces,
                                                double delta_prime,
                                                double gradient_bound) {
  if (pieces.empty()) throw DomainError("smooth_max_constraint: no pieces");
  if (!(delta_prime > 0.0)) {
    throw DomainError("smooth_max_constraint: delta_prime must be > 0");
  }
  if (!(gradient_bound >= 0.0)) {
    throw DomainError("smooth_max_constraint: gradient bound must be >= 0");
  }
  const auto k = static_cast<double>(pieces.size());
  double l_max = 0.0;
  double c0_max = 0.0;
  double c1_max = 0.0;
  bool quadratic = true;
  LogSumExpForm lse;
  lse.delta_prime = delta_prime;
  for (const auto& g : pieces) {
    if (!g.value || !g.gradient) {
      throw DomainError("smooth_max_constraint: piece without oracle");
    }
    l_max = std::max(l_max, g.smoothness);
    c0_max = std::max(c0_max, g.growth_c0);
    c1_max = std::max(c1_max, g.growth_c1);
    if (const auto* f = std::get_if<QuadraticForm>(&g.form)) {
      lse.pieces.push_back(*f);
    } else {
      quadratic = false;
    }
  }

  SmoothedConstraint out;
  out.delta_prime = delta_prime;
  out.approx_error = delta_prime * std::log(k);
  auto shared = std::make_shared<const std::vector<Constraint>>(pieces);
  out.pieces = std::move(pieces);

  Constraint& a = out.constraint;
  a.value = [shared, delta_prime](const Vec& x) {
    Vec v(static_cast<Eigen::Index>(shared->size()));
    for (std::size_t j = 0; j < shared->size(); ++j) {
      v[static_cast<Eigen::Index>(j)] = (*shared)[j].value(x);
    }
    return detail::log_sum_exp(v, delta_prime, nullptr);
  };
  a.gradient = [shared, delta_prime](const Vec& x) {
    Vec v(static_cast<Eigen::Index>(shared->size()));
    for (std::size_t j = 0; j < shared->size(); ++j) {
      v[static_cast<Eigen::Index>(j)] = (*shared)[j].value(x);
    }
    Vec w;
    detail::log_sum_exp(v, delta_prime, &w);
    Vec g = Vec::Zero(x.size());
    for (std::size_t j = 0; j < shared->size(); ++j) {
      const double wj = w[static_cast<Eigen::Index>(j)];
      if (wj > 0.0) g += wj * (*shared)[j].gradient(x);
    }
    return g;
  };
  a.smoothness = l_max + gradient_bound * gradient_bound / delta_prime;
  a.growth_c1 = c1_max;
  a.growth_c0 =
      c0_max + c1_max * (out.approx_error + k * delta_prime * std::exp(-1.0));
  if (quadratic) a.form = lse;
  return out;
}

/// Constraint backed directly by a LogSumExpForm, with given metadata.
inline Constraint log_sum_exp_constraint(LogSumExpForm form, double smoothness,
                                         double c0, double c1) {
  if (form.pieces.empty()) throw DomainError("log-sum-exp form has no pieces");
  if (!(form.delta_prime > 0.0)) {
    throw DomainError("log-sum-exp form needs delta_prime > 0");
  }
  for (const auto& p : form.pieces) p.validate("smoothed_max piece");
  auto shared = std::make_shared<const LogSumExpForm>(std::move(form));
  Constraint a;
  a.value = [shared](const Vec& x) {
    Vec v(static_cast<Eigen::Index>(shared->pieces.size()));
    for (std::size_t j = 0; j < shared->pieces.size(); ++j) {
      v[static_cast<Eigen::Index>(j)] = shared->pieces[j].value(x);
    }
    return detail::log_sum_exp(v, shared->delta_prime, nullptr);
  };
  a.gradient = [shared](const Vec& x) {
    Vec v(static_cast<Eigen::Index>(shared->pieces.size()));
    for (std::size_t j = 0; j < shared->pieces.size(); ++j) {
      v[static_cast<Eigen::Index>(j)] = shared->pieces[j].value(x);
    }
    Vec w;
    detail::log_sum_exp(v, shared->delta_prime, &w);
    Vec g = Vec::Zero(x.size());
    for (std::size_t j = 0; j < shared->pieces.size(); ++j) {
      g += w[static_cast<Eigen::Index>(j)] * shared->pieces[j].gradient(x);
    }
    return g;
  };
  a.smoothness = smoothness;
  a.growth_c0 = c0;
  a.growth_c1 = c1;
  a.form = *shared;
  return a;
}

/**
 * min ½‖x − d·e₁‖²  s.t.  max_j (uⱼᵀx − 1) ≤ 0, with u₁, u₂, u₃ unit vectors
 * 120° apart in the first two coordinates, so the feasible set is a
 * triangular prism. The single constraint is the log-sum-exp smoothing of
 * the three pieces; μ = L_f = 1.
 *
 * The reference describes the non-smooth problem: for d > 1, x* = e₁,
 * F* = ½(d − 1)², λ* = d − 1.
 */
inline ZooInstance make_smoothed_triangle(std::size_t n, double delta_prime,
                                          double distance = 2.0) {
  if (n < 2) throw DomainError("smoothed triangle needs n >= 2");
  if (!(distance > 1.0)) throw DomainError("smoothed triangle needs distance > 1");
  const auto nn = static_cast<Eigen::Index>(n);
  std::vector<Constraint> pieces;
  for (int j = 0; j < 3; ++j) {
    const double angle = 2.0 * std::acos(-1.0) * j / 3.0;
    Vec u = Vec::Zero(nn);
    u[0] = std::cos(angle);
    u[1] = std::sin(angle);
    pieces.push_back(linear_constraint(u, 1.0));
  }
  SmoothedConstraint smoothed =
      smooth_max_constraint(std::move(pieces), delta_prime, 1.0);

  auto problem = std::make_shared<ConstrainedProblem>();
  problem->name = "smoothed_triangle";
  problem->dimension = nn;
  QuadraticForm objective;
  objective.Q = Mat::Identity(nn, nn);
  objective.b = Vec::Zero(nn);
  objective.b[0] = -distance;
  objective.c = 0.5 * distance * distance;
  problem->components.push_back(quadratic_component(objective, 1.0));
  problem->constraints.push_back(smoothed.constraint);
  problem->mu = 1.0;
  problem->smoothness = 1.0;
  problem->slater = SlaterPoint{Vec::Zero(nn), -smoothed.value(Vec::Zero(nn))};
  problem->validate();

  ZooInstance inst;
  inst.problem = problem;
  inst.reference.x_star = Vec::Zero(nn);
  inst.reference.x_star[0] = 1.0;
  inst.reference.f_star = 0.5 * (distance - 1.0) * (distance - 1.0);
  inst.reference.multipliers = Vec::Constant(1, distance - 1.0);
  inst.reference.active_set = std::vector<std::size_t>{0};
  inst.generator = {"smoothed_triangle",
                    0,
                    {{"n", static_cast<double>(n)},
                     {"delta_prime", delta_prime},
                     {"distance", distance}}};
  return inst;
}

}  // namespace softpen
