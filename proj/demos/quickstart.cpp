// Builds a small strongly convex problem, solves it through the penalty
// driver and prints the certificate.
#include <iostream>

#include "softpen/softpen.hpp"

int main() {
  using namespace softpen;

  // min ½‖x − (2, 1)‖²  s.t.  x₁ + x₂ ≤ 1,  −x₁ ≤ 0.
  auto problem = std::make_shared<ConstrainedProblem>();
  problem->name = "quickstart";
  problem->dimension = 2;
  QuadraticForm f;
  f.Q = Mat::Identity(2, 2);
  f.b = Vec(2);
  f.b << -2.0, -1.0;
  f.c = 2.5;
  problem->components.push_back(quadratic_component(f, 1.0));
  Vec a1(2);
  a1 << 1.0, 1.0;
  Vec a2(2);
  a2 << -1.0, 0.0;
  problem->constraints.push_back(linear_constraint(a1, 1.0));
  problem->constraints.push_back(linear_constraint(a2, 0.0));
  problem->mu = 1.0;
  problem->smoothness = 1.0;

  // Known optimum: projection of (2, 1) onto the feasible set.
  ReferenceSolution ref;
  ref.x_star = Vec(2);
  ref.x_star << 1.0, 0.0;
  ref.f_star = eval_objective(*problem, ref.x_star);
  ref.multipliers = Vec(2);
  (*ref.multipliers) << 1.0, 0.0;

  SolveOptions options;
  options.reference = ref;
  options.xi_bar = 1.0;
  const Certificate cert =
      solve_constrained(problem, 1.5, 1e-3, QNorm::L2, SolverChoice::Apg, options);

  std::cout << "x        = " << cert.point.transpose() << "\n"
            << "delta    = " << cert.penalty.delta << "\n"
            << "||A+||_2 = " << cert.eps_A_measured << " (promised "
            << cert.theoretical_eps_A << ")\n"
            << "F - F*   = " << *cert.eps_F_measured << " (promised "
            << cert.theoretical_eps_F << ")\n"
            << "certified: " << (cert.certified ? "yes" : "no") << ", "
            << cert.report.oracle_calls.component_gradients
            << " component gradients\n";
  return cert.certified && cert.within_theory() ? 0 : 1;
}
