#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "softpen/solvers/types.hpp"

namespace softpen {

/**
 * Accelerated proximal gradient with step 1/L.
 *
 * General convex mode runs monotone FISTA: the momentum sequence tₖ is kept,
 * but the iterate only moves when the prox-gradient candidate does not
 * increase F. Strongly convex mode uses the constant momentum
 * (√L − √μ)/(√L + √μ) and restarts (drops momentum and retries from the last
 * accepted point) whenever a candidate would increase F. A plain
 * prox-gradient step from the accepted point is always taken: with step 1/L
 * it cannot increase F, and near the optimum the measured F is mostly noise.
 *
 * Every iteration evaluates the prox-gradient map at the accepted point x:
 *   μ > 0:  F(x⁺) − F* ≤ ‖G‖²·max((1 + L/μ)/(2μ), 2/μ)
 *   μ = 0:  max(2L‖x₀ − x‖²/(k + 1)², 2‖G‖·max(1, ‖x₀ − x‖))
 * The μ = 0 value replaces the unknown ‖x₀ − x*‖ with ‖x₀ − x‖, so it is a
 * surrogate rather than a proof; the report's caveat says so. When it drops
 * below target_gap the solver returns x⁺ = prox(x − ∇s(x)/L).
 */
template <CompositeObjective Objective>
SolverReport apg_solve(const Objective& objective, const SolverConfig& config) {
  config.validate();
  const double L =
      config.smoothness > 0.0 ? config.smoothness : objective.smoothness();
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw DomainError("apg_solve: smoothness L must be finite and > 0");
  }
  const bool strongly = config.momentum == MomentumMode::StronglyConvex;
  const double mu = config.mu > 0.0 ? config.mu : objective.strong_convexity();
  if (strongly && !(mu > 0.0)) {
    throw DomainError("apg_solve: strongly convex momentum requires mu > 0");
  }

  SolverReport report;
  report.solver = "apg";
  report.step_smoothness = L;
  if (!strongly) {
    report.caveat =
        "general-convex certificate uses ||x0 - x|| in place of ||x0 - x*||";
  }
  detail::Stopwatch clock;
  OracleCalls& calls = report.oracle_calls;
  const auto n_comp = [&]() -> std::uint64_t {
    if constexpr (FiniteSumObjective<Objective>) {
      return objective.num_components();
    } else {
      return 1;
    }
  }();
  auto grad = [&](const Vec& p) {
    ++calls.full_gradients;
    calls.component_gradients += n_comp;
    return objective.smooth_gradient(p);
  };
  auto prox_step = [&](const Vec& p, const Vec& g) {
    ++calls.prox_calls;
    return objective.prox(p - g / L, 1.0 / L);
  };
  auto value = [&](const Vec& p) {
    ++calls.function_values;
    return objective.value(p);
  };

  const Vec start =
      config.x0 ? *config.x0 : Vec::Zero(objective.dimension());
  if (start.size() != objective.dimension()) {
    throw DimensionError("apg_solve: x0 has wrong dimension");
  }
  ++calls.prox_calls;
  Vec x = objective.prox(start, 1.0 / L);
  const Vec anchor = x;
  double fx = value(x);
  if (!std::isfinite(fx)) {
    report.termination = Termination::Stalled;
    report.diagnostic = "objective is not finite at the initial point";
    report.final_point = x;
    report.final_objective = fx;
    return report;
  }

  const double beta_sc =
      strongly ? (std::sqrt(L) - std::sqrt(mu)) / (std::sqrt(L) + std::sqrt(mu))
               : 0.0;
  // Candidates that raise F by no more than rounding noise count as
  // descent; otherwise high-accuracy runs stall on the last few digits.
  auto noise = [](double f) {
    return 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f));
  };
  Vec y = x;
  double t = 1.0;
  bool y_is_x = true;
  std::size_t stale = 0;
  double best_gmap = std::numeric_limits<double>::infinity();
  std::size_t gmap_stale = 0;
  const std::size_t gmap_patience =
      strongly ? std::max<std::size_t>(1000, static_cast<std::size_t>(
                                                 50.0 * std::sqrt(L / mu)))
               : 0;

  for (std::size_t k = 1; k <= config.max_iterations; ++k) {
    report.iterations_used = k;
    const Vec z = prox_step(y, grad(y));
    const double fz = value(z);
    if (!std::isfinite(fz) && !(fz == std::numeric_limits<double>::infinity())) {
      report.termination = Termination::Stalled;
      report.diagnostic =
          "non-finite objective at iteration " + std::to_string(k);
      break;
    }

    bool progressed = true;
    if (strongly) {
      // Restart needs both a higher F and momentum pointing uphill; either
      // test alone fires on rounding once F is flat.
      if (!y_is_x && fz > fx + noise(fx) && (y - z).dot(z - x) > 0.0) {
        y = x;
        y_is_x = true;
        ++report.restarts;
        progressed = false;
      } else {
        const Vec x_prev = x;
        x = z;
        fx = fz;
        y = x + beta_sc * (x - x_prev);
        y_is_x = false;
      }
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const Vec x_prev = x;
      if (fz <= fx + noise(fx)) {
        x = z;
        fx = fz;
      } else {
        progressed = false;
      }
      y = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_prev);
      t = t_next;
    }
    stale = progressed ? 0 : stale + 1;

    // Certificate at the accepted point.
    const Vec xp = prox_step(x, grad(x));
    const double gmap = L * (x - xp).norm();
    double bound;
    if (strongly) {
      bound = detail::strongly_convex_gap_bound(gmap, L, mu);
    } else {
      const double dist = (anchor - x).norm();
      const double kk = static_cast<double>(k + 1);
      bound = std::max(2.0 * L * dist * dist / (kk * kk),
                       2.0 * gmap * std::max(1.0, dist));
    }
    report.gradmap_norm = gmap;
    report.certified_gap = bound;
    if (gmap < 0.999 * best_gmap) {
      best_gmap = gmap;
      gmap_stale = 0;
    } else {
      ++gmap_stale;
    }
    if (config.record_trace) {
      report.trace.push_back(
          {k, calls.component_gradients, fx, gmap, clock.seconds()});
    }
    if (bound <= config.target_gap) {
      report.termination = Termination::GapCertified;
      report.final_point = xp;
      report.final_objective = value(xp);
      if (report.final_objective > fx) {
        report.final_point = x;
        report.final_objective = fx;
      }
      return report;
    }
    // The gradient map stopped shrinking (μ > 0) or no candidate decreased F
    // for a long time (μ = 0): only rounding is left to fight.
    if ((strongly && gmap_stale >= gmap_patience) || (!strongly && stale >= 1000)) {
      report.termination = Termination::Stalled;
      report.diagnostic = "no decrease at iteration " + std::to_string(k) +
                          "; certified gap " + std::to_string(bound);
      break;
    }
  }
  if (report.termination != Termination::Stalled) {
    report.termination = Termination::MaxIter;
  }
  report.final_point = x;
  report.final_objective = fx;
  return report;
}

}  // namespace softpen
