#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "softpen/builders.hpp"
#include "softpen/errors.hpp"
#include "softpen/zoo/instance.hpp"
#include "softpen/zoo/smoothing.hpp"

namespace softpen {

inline constexpr int kInverseKktMaxAttempts = 50;

namespace detail {

/// Minimizes t·log Σ exp(aᵢ(x)/t) from `start` by backtracking gradient
/// descent and returns the point with the smallest max aᵢ seen.
inline Vec interior_search(const std::vector<Constraint>& cons, const Vec& start,
                           double* best_max) {
  const double t = 0.05;
  auto values = [&](const Vec& x) {
    Vec v(static_cast<Eigen::Index>(cons.size()));
    for (std::size_t i = 0; i < cons.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = cons[i].value(x);
    }
    return v;
  };
  Vec x = start;
  Vec v = values(x);
  Vec best = x;
  *best_max = v.maxCoeff();
  double step = 1.0;
  for (int it = 0; it < 2000; ++it) {
    Vec w;
    const double phi = log_sum_exp(v, t, &w);
    Vec g = Vec::Zero(x.size());
    for (std::size_t i = 0; i < cons.size(); ++i) {
      g += w[static_cast<Eigen::Index>(i)] * cons[i].gradient(x);
    }
    const double g2 = g.squaredNorm();
    if (g2 < 1e-24) break;
    step = std::min(1.0, 4.0 * step);
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec trial = x - step * g;
      const Vec tv = values(trial);
      if (log_sum_exp(tv, t, nullptr) <= phi - 0.5 * step * g2) {
        x = trial;
        v = tv;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    if (v.maxCoeff() < *best_max) {
      *best_max = v.maxCoeff();
      best = x;
    }
    if (*best_max <= -0.25) break;
  }
  return best;
}

}  // namespace detail

/**
 * Random strongly convex instance with a planted KKT pair (x*, λ*).
 *
 * Constraint i is aᵢ(x) = ½(x − cᵢ)ᵀQᵢ(x − cᵢ) + bᵢᵀx + dᵢ with
 * Qᵢ = BBᵀ/n + 0.1·I. dᵢ puts aᵢ(x*) at 0 on the active set and uniformly in
 * [−2, −0.5] elsewhere; λ*ᵢ ~ U[0.5, 2] on the active set. The objective is
 * (μ/2)‖x − x*‖² + gᵀ(x − x*) with g = −Σ λ*ᵢ∇aᵢ(x*).
 *
 * Growth constants: L_a = λ_max(Qᵢ), C1 = 2L_a and
 * C0 = 2L_a·|aᵢ*| + ‖∇aᵢ(x*)‖², aᵢ* being the closed-form minimum value;
 * ‖∇a‖² ≤ 2L_a(a − aᵢ*) makes this valid everywhere.
 *
 * A Slater point is searched from x*; when the margin found is below 1e-6
 * the whole draw is repeated, up to 50 times, then GenerationError.
 */
inline ZooInstance make_inverse_kkt(std::uint64_t seed, std::size_t n,
                                    std::size_t m, double mu,
                                    std::size_t n_active) {
  if (n < 1 || m < 1) throw DomainError("inverse_kkt needs n >= 1 and m >= 1");
  if (n_active > std::min(m, n)) {
    throw DomainError("inverse_kkt needs n_active <= min(m, n)");
  }
  if (!(mu > 0.0)) throw DomainError("inverse_kkt needs mu > 0");
  const auto nn = static_cast<Eigen::Index>(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto gaussian = [&](Eigen::Index size) {
    Vec v(size);
    for (Eigen::Index i = 0; i < size; ++i) v[i] = normal(rng);
    return v;
  };

  for (int attempt = 0; attempt < kInverseKktMaxAttempts; ++attempt) {
    const Vec x_star = gaussian(nn);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    std::vector<bool> active(m, false);
    for (std::size_t k = 0; k < n_active; ++k) active[order[k]] = true;

    std::vector<Constraint> cons;
    Vec lambda = Vec::Zero(static_cast<Eigen::Index>(m));
    Vec g = Vec::Zero(nn);
    for (std::size_t i = 0; i < m; ++i) {
      Mat B(nn, nn);
      for (Eigen::Index r = 0; r < nn; ++r) B.row(r) = gaussian(nn).transpose();
      const Mat Q = B * B.transpose() / static_cast<double>(n) +
                    0.1 * Mat::Identity(nn, nn);
      const Vec c = x_star + 0.5 * gaussian(nn);
      const Vec b = 0.3 * gaussian(nn);
      const double at_star =
          0.5 * (x_star - c).dot(Q * (x_star - c)) + b.dot(x_star);
      const double target = active[i] ? 0.0 : -(0.5 + 1.5 * uniform(rng));
      const double d = target - at_star;

      QuadraticForm form;
      form.Q = Q;
      form.b = b - Q * c;
      form.c = 0.5 * c.dot(Q * c) + d;
      Eigen::SelfAdjointEigenSolver<Mat> eig(Q, Eigen::EigenvaluesOnly);
      const double l_a = eig.eigenvalues().maxCoeff();
      const double a_min = form.c - 0.5 * form.b.dot(Q.ldlt().solve(form.b));
      const Vec grad_star = form.gradient(x_star);
      const double c0 = 2.0 * l_a * std::abs(a_min) + grad_star.squaredNorm();
      cons.push_back(quadratic_constraint(form, l_a, c0, 2.0 * l_a));

      if (active[i]) {
        const double li = 0.5 + 1.5 * uniform(rng);
        lambda[static_cast<Eigen::Index>(i)] = li;
        g -= li * grad_star;
      }
    }

    double worst = 0.0;
    const Vec slater = detail::interior_search(cons, x_star, &worst);
    if (!(worst < -1e-6)) continue;

    auto problem = std::make_shared<ConstrainedProblem>();
    problem->name = "inverse_kkt";
    problem->dimension = nn;
    QuadraticForm objective;
    objective.Q = mu * Mat::Identity(nn, nn);
    objective.b = g - mu * x_star;
    objective.c = 0.5 * mu * x_star.squaredNorm() - g.dot(x_star);
    problem->components.push_back(quadratic_component(objective, mu));
    problem->constraints = std::move(cons);
    problem->mu = mu;
    problem->smoothness = mu;
    problem->slater = SlaterPoint{slater, -worst};
    problem->validate();

    ZooInstance inst;
    inst.problem = problem;
    inst.reference.x_star = x_star;
    inst.reference.f_star = eval_objective(*problem, x_star);
    inst.reference.multipliers = lambda;
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < m; ++i) {
      if (active[i]) act.push_back(i);
    }
    inst.reference.active_set = act;
    inst.generator = {"inverse_kkt",
                      seed,
                      {{"n", static_cast<double>(n)},
                       {"m", static_cast<double>(m)},
                       {"mu", mu},
                       {"n_active", static_cast<double>(n_active)}}};
    return inst;
  }
  throw GenerationError("inverse_kkt: no strictly feasible point found after " +
                        std::to_string(kInverseKktMaxAttempts) + " draws (seed " +
                        std::to_string(seed) + ")");
}

}  // namespace softpen
