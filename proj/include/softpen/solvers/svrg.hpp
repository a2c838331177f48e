#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "softpen/rng.hpp"
#include "softpen/solvers/types.hpp"

namespace softpen {

/**
 * Proximal SVRG on s(x) = (1/N)Σ hₖ(x) plus ψ.
 *
 * Each epoch computes the full gradient at the snapshot (N component
 * gradients), checks the μ-based gradient-map certificate there, then takes
 * `epoch_length` variance-reduced steps of size 1/(3·max Lₖ). Component k at
 * (epoch, step) is drawn from a counter-based stream keyed by the seed, so a
 * run is a deterministic function of (objective, config).
 *
 * `iterations_used` counts epochs.
 */
template <FiniteSumObjective Objective>
SolverReport prox_svrg_solve(const Objective& objective,
                             const SolverConfig& config) {
  config.validate();
  const double mu = config.mu > 0.0 ? config.mu : objective.strong_convexity();
  if (!(mu > 0.0)) {
    throw DomainError(
        "prox_svrg_solve requires mu > 0 (use apg_solve for mu = 0)");
  }
  const double L =
      config.smoothness > 0.0 ? config.smoothness : objective.smoothness();
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw DomainError("prox_svrg_solve: smoothness L must be finite and > 0");
  }
  const std::size_t n_comp = objective.num_components();
  if (n_comp == 0) throw DomainError("prox_svrg_solve: no components");
  double l_max = 0.0;
  for (std::size_t k = 0; k < n_comp; ++k) {
    l_max = std::max(l_max, objective.component_smoothness(k));
  }
  if (!(l_max > 0.0)) l_max = L;
  const double eta = 1.0 / (3.0 * l_max);
  const std::size_t epoch_length =
      config.epoch_length > 0 ? config.epoch_length : 2 * n_comp;
  const CounterRng rng(config.seed);

  SolverReport report;
  report.solver = "svrg";
  report.step_smoothness = l_max;
  detail::Stopwatch clock;
  OracleCalls& calls = report.oracle_calls;
  auto cgrad = [&](std::size_t k, const Vec& p) {
    ++calls.component_gradients;
    return objective.component_gradient(k, p);
  };

  const Vec start = config.x0 ? *config.x0 : Vec::Zero(objective.dimension());
  if (start.size() != objective.dimension()) {
    throw DimensionError("prox_svrg_solve: x0 has wrong dimension");
  }
  ++calls.prox_calls;
  Vec snapshot = objective.prox(start, 1.0 / L);
  Vec full(objective.dimension());

  for (std::size_t epoch = 0; epoch < config.max_iterations; ++epoch) {
    report.iterations_used = epoch;
    full.setZero();
    for (std::size_t k = 0; k < n_comp; ++k) full += cgrad(k, snapshot);
    full /= static_cast<double>(n_comp);
    ++calls.full_gradients;
    if (config.epoch_observer) config.epoch_observer(snapshot, full);

    ++calls.prox_calls;
    const Vec xp = objective.prox(snapshot - full / L, 1.0 / L);
    const double gmap = L * (snapshot - xp).norm();
    const double bound = detail::strongly_convex_gap_bound(gmap, L, mu);
    report.gradmap_norm = gmap;
    report.certified_gap = bound;
    if (config.record_trace) {
      ++calls.function_values;
      report.trace.push_back({epoch, calls.component_gradients,
                              objective.value(snapshot), gmap,
                              clock.seconds()});
    }
    if (!std::isfinite(gmap)) {
      report.termination = Termination::Stalled;
      report.diagnostic = "non-finite gradient at epoch " + std::to_string(epoch);
      report.final_point = snapshot;
      report.final_objective = objective.value(snapshot);
      return report;
    }
    if (bound <= config.target_gap) {
      report.termination = Termination::GapCertified;
      report.final_point = xp;
      ++calls.function_values;
      report.final_objective = objective.value(xp);
      return report;
    }

    Vec x = snapshot;
    for (std::size_t s = 0; s < epoch_length; ++s) {
      const std::size_t k = rng.index(epoch, s, n_comp);
      Vec v = cgrad(k, x);
      v -= cgrad(k, snapshot);
      v += full;
      ++calls.prox_calls;
      x = objective.prox(x - eta * v, eta);
    }
    if (!x.allFinite()) {
      report.termination = Termination::Stalled;
      report.diagnostic = "non-finite iterate in epoch " + std::to_string(epoch);
      report.final_point = snapshot;
      report.final_objective = objective.value(snapshot);
      return report;
    }
    snapshot = std::move(x);
    report.iterations_used = epoch + 1;
  }
  report.termination = Termination::MaxIter;
  report.final_point = snapshot;
  ++calls.function_values;
  report.final_objective = objective.value(snapshot);
  return report;
}

}  // namespace softpen
