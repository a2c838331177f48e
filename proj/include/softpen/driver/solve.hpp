#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "softpen/driver/schedules.hpp"
#include "softpen/model.hpp"
#include "softpen/penalized.hpp"
#include "softpen/solvers/apg.hpp"
#include "softpen/solvers/catalyst.hpp"
#include "softpen/solvers/svrg.hpp"

namespace softpen {

enum class SolverChoice { Apg, Svrg, Catalyst };

inline std::string to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::Apg:
      return "apg";
    case SolverChoice::Svrg:
      return "svrg";
    case SolverChoice::Catalyst:
      return "catalyst";
  }
  return "apg";
}

inline SolverChoice parse_solver_choice(const std::string& s) {
  if (s == "apg") return SolverChoice::Apg;
  if (s == "svrg") return SolverChoice::Svrg;
  if (s == "catalyst") return SolverChoice::Catalyst;
  throw DomainError("unknown solver '" + s + "' (expected apg, svrg, catalyst)");
}

struct SolveOptions {
  /// Upper bound on U. Takes precedence over anything derived below.
  std::optional<double> U;
  /// Known optimum; enables measured ε_F and the exact U.
  std::optional<ReferenceSolution> reference;
  /// When given, the ξ ≥ 2ξ̄ (μ = 0) or ξ ≥ ξ̄ (μ > 0) requirement is checked.
  std::optional<double> xi_bar;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 1000000;
  std::optional<Vec> x0;
  bool record_trace = true;
};

/// Approximate-solution certificate for a point x̃ with respect to the q-norm.
struct Certificate {
  Vec point;
  QNorm q = QNorm::L2;
  double eps_A_measured = 0.0;
  /// F(x̃) − F*, present when the reference optimum is known.
  std::optional<double> eps_F_measured;
  double objective_value = 0.0;
  /// Solver-certified bound on F_{ξ,δ}(x̃) − F*_{ξ,δ}.
  double certified_penalized_gap = 0.0;
  double target_gap = 0.0;
  double theoretical_eps_A = 0.0;
  double theoretical_eps_F = 0.0;
  bool certified = false;
  std::string solver;
  std::uint64_t seed = 0;
  PenaltyConfig penalty;
  ScheduleInputs schedule;
  std::string U_source;
  std::vector<std::string> warnings;
  SolverReport report;

  /// True when the measured values respect the promised ones (+ slack).
  bool within_theory(double slack = 1e-7) const {
    if (eps_A_measured > theoretical_eps_A + slack) return false;
    if (eps_F_measured && *eps_F_measured > theoretical_eps_F + slack) {
      return false;
    }
    return true;
  }
};

/// Fills the measured fields of a certificate at `x`.
inline void measure_point(const ConstrainedProblem& problem, const Vec& x,
                          QNorm q, const std::optional<ReferenceSolution>& ref,
                          Certificate& cert) {
  cert.point = x;
  cert.q = q;
  cert.eps_A_measured = violation_norm(problem, x, q);
  cert.objective_value = eval_objective(problem, x);
  if (ref) {
    cert.eps_F_measured = cert.objective_value - ref->f_star;
  } else {
    cert.eps_F_measured.reset();
  }
}

namespace detail {

inline double resolve_U(const ConstrainedProblem& problem,
                        const SolveOptions& options, Certificate& cert) {
  const std::size_t m = problem.num_constraints();
  if (options.U) {
    cert.U_source = "supplied";
    return *options.U;
  }
  if (problem.max_c1() == 0.0) {
    cert.U_source = "exact_c1_zero";
    return growth_aggregate(m, problem.max_c0(), 0.0, 0.0);
  }
  if (options.reference) {
    cert.U_source = "reference";
    const Vec a = eval_constraints(problem, options.reference->x_star);
    return growth_aggregate(m, problem.max_c0(), problem.max_c1(),
                            a.cwiseAbs().maxCoeff());
  }
  if (problem.slater) {
    cert.U_source = "slater_heuristic";
    cert.warnings.push_back(
        "U computed from ||A(slater_point)||_inf; this is a heuristic, not a "
        "certified upper bound on ||A(x*)||_inf");
    const Vec a = eval_constraints(problem, problem.slater->point);
    return growth_aggregate(m, problem.max_c0(), problem.max_c1(),
                            a.cwiseAbs().maxCoeff());
  }
  throw ScheduleError(
      "U is unknown: supply an upper bound, a reference solution or a Slater "
      "point");
}

template <FiniteSumObjective Objective>
SolverReport run_solver(SolverChoice choice, const Objective& objective,
                        const SolverConfig& config) {
  switch (choice) {
    case SolverChoice::Apg:
      return apg_solve(objective, config);
    case SolverChoice::Svrg:
      return prox_svrg_solve(objective, config);
    case SolverChoice::Catalyst:
      return catalyst_solve(objective, config);
  }
  return apg_solve(objective, config);
}

}  // namespace detail

/**
 * Picks δ_ε for the requested accuracy, solves the penalty reformulation to
 * the matching inner accuracy and measures the result.
 *
 * μ = 0: δ_ε = ε/(4m·log 2), target gap m·ξ·δ_ε·log 2, APG only; promises
 *        (ε, ξε) in the 1-norm when ξ ≥ 2ξ̄.
 * μ > 0: δ_ε from the strongly convex schedule, target gap
 *        Δ_ε = μ·ε²/(8m·(C0_max + C1_max·(b + ε))) with b the violation
 *        bound at δ_ε. b + ε caps aᵢ⁺ on the segment between x*_{ξ,δ} and x̃,
 *        so strong convexity gives aᵢ⁺(x̃) − aᵢ⁺(x*_{ξ,δ}) ≤ ε/(2√m);
 *        promises (ε, √m·ξ·ε) in the 2-norm when ξ ≥ ξ̄.
 *
 * Throws ScheduleError when a precondition fails; no solve is attempted then.
 */
inline Certificate solve_constrained(
    const std::shared_ptr<const ConstrainedProblem>& problem, double xi,
    double epsilon, QNorm q, SolverChoice solver,
    const SolveOptions& options = {}) {
  if (!problem) throw DomainError("solve_constrained: null problem");
  problem->validate();
  if (!(epsilon > 0.0)) throw ScheduleError("epsilon must be > 0");
  if (!(xi > 0.0)) throw ScheduleError("xi must be > 0");
  const std::size_t m = problem->num_constraints();
  const double mu = problem->mu;

  Certificate cert;
  cert.solver = to_string(solver);
  cert.seed = options.seed;
  cert.schedule.epsilon = epsilon;
  cert.schedule.m = m;
  cert.schedule.mu = mu;
  cert.schedule.xi = xi;
  cert.schedule.c0_max = problem->max_c0();
  cert.schedule.c1_max = problem->max_c1();

  SolverConfig config;
  config.seed = options.seed;
  config.max_iterations = options.max_iterations;
  config.x0 = options.x0;
  config.record_trace = options.record_trace;

  if (mu > 0.0) {
    if (options.xi_bar && xi < *options.xi_bar) {
      throw ScheduleError("xi must be >= xi_bar on the strongly convex path");
    }
    cert.schedule.U = detail::resolve_U(*problem, options, cert);
    const double delta = delta_schedule_strongly_convex(cert.schedule);
    const double bound = theorem_violation_bound(m, delta, cert.schedule.U, xi,
                                                 mu, cert.schedule.c1_max);
    cert.penalty = {xi, delta, DeltaProvenance::ScheduleStronglyConvex};
    cert.target_gap =
        mu * epsilon * epsilon /
        (8.0 * static_cast<double>(m) *
         (cert.schedule.c0_max + cert.schedule.c1_max * (bound + epsilon)));
    cert.theoretical_eps_A = epsilon;
    cert.theoretical_eps_F = std::sqrt(static_cast<double>(m)) * xi * epsilon;
    config.momentum = MomentumMode::StronglyConvex;
  } else {
    if (solver != SolverChoice::Apg) {
      throw ScheduleError("mu = 0 path supports only the apg solver");
    }
    if (options.xi_bar && xi < 2.0 * *options.xi_bar) {
      throw ScheduleError("xi must be >= 2*xi_bar on the general convex path");
    }
    const double delta = delta_schedule_convex(epsilon, m);
    cert.penalty = {xi, delta, DeltaProvenance::ScheduleConvex};
    cert.target_gap = static_cast<double>(m) * xi * delta * kLog2;
    cert.theoretical_eps_A = epsilon;
    cert.theoretical_eps_F = xi * epsilon;
    cert.U_source = "unused";
    config.momentum = MomentumMode::GeneralConvex;
  }
  config.target_gap = cert.target_gap;

  const PenalizedOracle oracle(problem, cert.penalty);
  cert.report = detail::run_solver(solver, oracle, config);
  cert.certified = cert.report.certified();
  cert.certified_penalized_gap = cert.report.certified_gap;
  if (!cert.report.caveat.empty()) cert.warnings.push_back(cert.report.caveat);
  measure_point(*problem, cert.report.final_point, q, options.reference, cert);
  return cert;
}

}  // namespace softpen
