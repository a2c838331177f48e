#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "softpen/rng.hpp"
#include "softpen/solvers/svrg.hpp"
#include "softpen/solvers/types.hpp"

namespace softpen {

/// s(x) + (κ/2)‖x − center‖² + ψ(x). The quadratic is added to every
/// component, so the component average still equals the smooth part.
template <FiniteSumObjective Objective>
class ProximallyRegularized {
 public:
  ProximallyRegularized(const Objective& base, Vec center, double kappa)
      : base_(&base), center_(std::move(center)), kappa_(kappa) {}

  Eigen::Index dimension() const { return base_->dimension(); }
  double smooth_value(const Vec& x) const {
    return base_->smooth_value(x) + 0.5 * kappa_ * (x - center_).squaredNorm();
  }
  double value(const Vec& x) const {
    return base_->value(x) + 0.5 * kappa_ * (x - center_).squaredNorm();
  }
  Vec smooth_gradient(const Vec& x) const {
    return base_->smooth_gradient(x) + kappa_ * (x - center_);
  }
  Vec prox(const Vec& x, double tau) const { return base_->prox(x, tau); }
  double smoothness() const { return base_->smoothness() + kappa_; }
  double strong_convexity() const { return base_->strong_convexity() + kappa_; }
  std::size_t num_components() const { return base_->num_components(); }
  Vec component_gradient(std::size_t k, const Vec& x) const {
    return base_->component_gradient(k, x) + kappa_ * (x - center_);
  }
  double component_smoothness(std::size_t k) const {
    return base_->component_smoothness(k) + kappa_;
  }

 private:
  const Objective* base_;
  Vec center_;
  double kappa_;
};

/**
 * Catalyst acceleration around prox-SVRG for μ > 0.
 *
 * Stage k approximately minimizes F(x) + (κ/2)‖x − yₖ₋₁‖² with prox-SVRG,
 * warm-started at the previous stage's point, to tolerance
 * εₖ = ε₀·(1 − ρ)ᵏ. The extrapolation uses q = μ/(μ + κ):
 *   αₖ² = (1 − αₖ)αₖ₋₁² + qαₖ,  βₖ = αₖ₋₁(1 − αₖ₋₁)/(αₖ₋₁² + αₖ),
 *   yₖ = xₖ + βₖ(xₖ − xₖ₋₁).
 * After each stage the μ-based certificate for F is checked at xₖ.
 *
 * `iterations_used` counts stages.
 */
template <FiniteSumObjective Objective>
SolverReport catalyst_solve(const Objective& objective,
                            const SolverConfig& config) {
  config.validate();
  const double mu = config.mu > 0.0 ? config.mu : objective.strong_convexity();
  if (!(mu > 0.0)) throw DomainError("catalyst_solve requires mu > 0");
  const double L =
      config.smoothness > 0.0 ? config.smoothness : objective.smoothness();
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw DomainError("catalyst_solve: smoothness L must be finite and > 0");
  }
  const std::size_t n_comp = objective.num_components();
  const CatalystOptions& opt = config.catalyst;
  double kappa = opt.kappa;
  if (!(kappa > 0.0)) {
    kappa = L / static_cast<double>(n_comp) - mu;
    if (!(kappa > 0.0)) kappa = mu;
  }
  const double q = mu / (mu + kappa);
  const double rho = opt.decay > 0.0 ? opt.decay : 0.9 * std::sqrt(q);

  SolverReport report;
  report.solver = "catalyst";
  report.step_smoothness = L;
  detail::Stopwatch clock;
  OracleCalls& calls = report.oracle_calls;

  // Certificate for F at p: returns (x⁺, ‖G‖, bound).
  struct Check {
    Vec xp;
    double gmap;
    double bound;
  };
  auto certify = [&](const Vec& p) {
    Vec full = Vec::Zero(objective.dimension());
    for (std::size_t k = 0; k < n_comp; ++k) {
      full += objective.component_gradient(k, p);
    }
    full /= static_cast<double>(n_comp);
    calls.component_gradients += n_comp;
    ++calls.full_gradients;
    ++calls.prox_calls;
    Check c;
    c.xp = objective.prox(p - full / L, 1.0 / L);
    c.gmap = L * (p - c.xp).norm();
    c.bound = detail::strongly_convex_gap_bound(c.gmap, L, mu);
    return c;
  };
  auto finish = [&](const Check& c, Termination why) {
    report.termination = why;
    report.gradmap_norm = c.gmap;
    report.certified_gap = c.bound;
    report.final_point = c.xp;
    ++calls.function_values;
    report.final_objective = objective.value(c.xp);
    return report;
  };

  const Vec start = config.x0 ? *config.x0 : Vec::Zero(objective.dimension());
  if (start.size() != objective.dimension()) {
    throw DimensionError("catalyst_solve: x0 has wrong dimension");
  }
  ++calls.prox_calls;
  Vec x = objective.prox(start, 1.0 / L);
  Check check = certify(x);
  if (config.record_trace) {
    report.trace.push_back({0, calls.component_gradients, objective.value(x),
                            check.gmap, clock.seconds()});
  }
  if (check.bound <= config.target_gap) {
    return finish(check, Termination::GapCertified);
  }
  const double eps0 = opt.initial_tolerance > 0.0
                          ? opt.initial_tolerance
                          : (2.0 / 9.0) * check.bound;

  Vec y = x;
  double alpha = std::sqrt(q);
  double tolerance = eps0;
  const CounterRng stage_streams(config.seed);

  for (std::size_t stage = 1; stage <= opt.max_stages; ++stage) {
    report.iterations_used = stage;
    report.stages = stage;
    tolerance *= (1.0 - rho);
    tolerance = std::max(tolerance, std::numeric_limits<double>::min());

    ProximallyRegularized<Objective> inner(objective, y, kappa);
    SolverConfig inner_config;
    inner_config.max_iterations = opt.max_inner_epochs;
    inner_config.target_gap = tolerance;
    inner_config.seed = stage_streams.split(stage - 1).seed();
    inner_config.epoch_length = config.epoch_length;
    inner_config.x0 = x;
    inner_config.record_trace = false;
    const SolverReport r = prox_svrg_solve(inner, inner_config);
    calls += r.oracle_calls;
    if (r.termination == Termination::Stalled) {
      report.termination = Termination::Stalled;
      report.diagnostic =
          "inner solver stalled at stage " + std::to_string(stage) + ": " +
          r.diagnostic;
      report.final_point = x;
      report.final_objective = objective.value(x);
      return report;
    }

    const Vec x_new = r.final_point;
    check = certify(x_new);
    report.gradmap_norm = check.gmap;
    report.certified_gap = check.bound;
    if (config.record_trace) {
      ++calls.function_values;
      report.trace.push_back({stage, calls.component_gradients,
                              objective.value(x_new), check.gmap,
                              clock.seconds()});
    }
    if (check.bound <= config.target_gap) {
      return finish(check, Termination::GapCertified);
    }

    const double a2 = alpha * alpha;
    const double b = a2 - q;
    const double alpha_next = 0.5 * (-b + std::sqrt(b * b + 4.0 * a2));
    const double beta = alpha * (1.0 - alpha) / (a2 + alpha_next);
    y = x_new + beta * (x_new - x);
    x = x_new;
    alpha = alpha_next;
  }
  report.termination = Termination::MaxIter;
  report.final_point = x;
  ++calls.function_values;
  report.final_objective = objective.value(x);
  return report;
}

}  // namespace softpen
