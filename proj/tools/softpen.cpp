// softpen command-line harness.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "softpen/cli/commands.hpp"

namespace cli = softpen::cli;

int main(int argc, char** argv) {
  CLI::App app{"softpen: softplus penalty solvers and bound checks"};
  app.set_version_flag("--version", std::string(SOFTPEN_VERSION));
  app.require_subcommand(1);

  cli::SolveArgs solve;
  double solve_U = 0.0;
  auto* s = app.add_subcommand("solve", "solve a problem spec to (eps_A, eps_F) accuracy");
  s->add_option("spec", solve.spec_path, "problem spec JSON")->required();
  s->add_option("--xi", solve.xi, "penalty weight")->required();
  s->add_option("--epsilon", solve.epsilon, "target accuracy")->required();
  s->add_option("--q", solve.q, "violation norm: 1, 2 or inf");
  s->add_option("--solver", solve.solver, "apg, svrg or catalyst");
  s->add_option("--seed", solve.seed, "seed of the stochastic solvers");
  auto* u_opt = s->add_option("--U", solve_U, "upper bound on the growth aggregate U");
  s->add_option("--out", solve.out, "run record JSON path");
  s->add_option("--trace", solve.trace, "trace CSV path (default <out>.trace.csv)");

  cli::ReproduceArgs rep;
  auto* r = app.add_subcommand("reproduce-example", "reproduce the tight examples");
  r->add_option("--example", rep.example, "1 or 2")->required();
  r->add_option("--m", rep.m, "number of constraints");
  r->add_option("--n", rep.n, "dimension");
  r->add_option("--xi", rep.xi, "penalty weight");
  r->add_option("--delta-grid", rep.delta_grid, "comma-separated delta values");

  cli::CheckBoundsArgs cb;
  auto* c = app.add_subcommand("check-bounds", "verify the violation bound and value sandwich");
  c->add_option("--family", cb.family, "instance family");
  c->add_option("--seeds", cb.seeds, "'a:b' range or comma list");
  c->add_option("--m-grid", cb.m_grid, "comma-separated constraint counts");
  c->add_option("--delta-grid", cb.delta_grid, "comma-separated delta values");
  c->add_option("--n", cb.n, "dimension");
  c->add_option("--mu", cb.mu, "strong convexity modulus");
  c->add_option("--xi-factor", cb.xi_factor, "xi as a multiple of ||lambda*||_inf");

  cli::GradcheckArgs gc;
  auto* g = app.add_subcommand("gradcheck", "finite-difference audit of every oracle");
  g->add_option("spec", gc.spec_path, "problem spec JSON")->required();
  g->add_option("--points", gc.points, "number of sample points");
  g->add_option("--seed", gc.seed, "sampling seed");
  g->add_option("--tol", gc.tolerance, "relative error tolerance");

  cli::SweepArgs sw;
  double sweep_U = 0.0;
  auto* d = app.add_subcommand("sweep-delta", "violation versus delta at fixed xi");
  d->add_option("spec", sw.spec_path, "problem spec JSON")->required();
  d->add_option("--xi", sw.xi, "penalty weight")->required();
  d->add_option("--delta-grid", sw.delta_grid, "comma-separated delta values")->required();
  auto* su_opt = d->add_option("--U", sweep_U, "upper bound on U");
  d->add_option("--out", sw.out, "CSV path (default stdout)");

  cli::GenerateArgs gen;
  std::size_t n_active = 0;
  auto* e = app.add_subcommand("generate", "write a zoo instance as a problem spec");
  e->add_option("--family", gen.family,
                "entrywise_linear, entrywise_quadratic, inverse_kkt, smoothed_triangle")
      ->required();
  e->add_option("--n", gen.n, "dimension");
  e->add_option("--m", gen.m, "number of constraints");
  e->add_option("--seed", gen.seed, "generator seed");
  e->add_option("--mu", gen.mu, "strong convexity modulus (inverse_kkt)");
  auto* na_opt = e->add_option("--n-active", n_active, "active constraints (inverse_kkt)");
  e->add_option("--delta-prime", gen.delta_prime, "smoothing (smoothed_triangle)");
  e->add_option("--out", gen.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return cli::kParseError;
  }

  if (s->parsed()) {
    if (u_opt->count() > 0) solve.U = solve_U;
    return cli::cmd_solve(solve, std::cout, std::cerr);
  }
  if (r->parsed()) return cli::cmd_reproduce_example(rep, std::cout, std::cerr);
  if (c->parsed()) return cli::cmd_check_bounds(cb, std::cout, std::cerr);
  if (g->parsed()) return cli::cmd_gradcheck(gc, std::cout, std::cerr);
  if (d->parsed()) {
    if (su_opt->count() > 0) sw.U = sweep_U;
    return cli::cmd_sweep_delta(sw, std::cout, std::cerr);
  }
  if (e->parsed()) {
    if (na_opt->count() > 0) gen.n_active = n_active;
    return cli::cmd_generate(gen, std::cout, std::cerr);
  }
  return cli::kParseError;
}
