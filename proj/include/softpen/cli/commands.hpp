#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "softpen/driver/solve.hpp"
#include "softpen/gradcheck.hpp"
#include "softpen/io/problem_json.hpp"
#include "softpen/io/records.hpp"
#include "softpen/zoo/entrywise.hpp"
#include "softpen/zoo/inverse_kkt.hpp"
#include "softpen/zoo/smoothing.hpp"

#ifndef SOFTPEN_VERSION
#define SOFTPEN_VERSION "0.1.0"
#endif

namespace softpen::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParseError = 2,
  kScheduleError = 3,
  kNotConverged = 4,
};

// ---------------------------------------------------------------- helpers

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline double parse_number(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(field, "'" + s + "' is not a number");
  }
}

/// "1e-1,1e-2" → {0.1, 0.01}. An empty grid is a parse error.
inline std::vector<double> parse_grid(const std::string& text,
                                      const std::string& field) {
  std::vector<double> grid;
  for (const auto& s : split_list(text)) grid.push_back(parse_number(s, field));
  if (grid.empty()) throw ParseError(field, "empty grid");
  return grid;
}

/// "a:b" is the half-open range [a, b); otherwise a comma list.
inline std::vector<std::uint64_t> parse_seeds(const std::string& text,
                                              const std::string& field) {
  std::vector<std::uint64_t> seeds;
  const auto colon = text.find(':');
  try {
    if (colon != std::string::npos) {
      const std::uint64_t a = std::stoull(text.substr(0, colon));
      const std::uint64_t b = std::stoull(text.substr(colon + 1));
      for (std::uint64_t s = a; s < b; ++s) seeds.push_back(s);
    } else {
      for (const auto& s : split_list(text)) seeds.push_back(std::stoull(s));
    }
  } catch (const std::exception&) {
    throw ParseError(field, "expected 'a:b' or a comma list of integers");
  }
  if (seeds.empty()) throw ParseError(field, "no seeds");
  return seeds;
}

inline std::vector<std::size_t> parse_sizes(const std::string& text,
                                            const std::string& field) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(text)) {
    const double v = parse_number(s, field);
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw ParseError(field, "expected positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ParseError(field, "empty list");
  return out;
}

/// SOFTPEN_THREADS caps the worker count; default is the hardware count.
inline std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SOFTPEN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) {
      hw = std::min(hw, static_cast<std::size_t>(v));
    } else {
      hw = 1;
    }
  }
  return hw;
}

/// Runs f(0..n-1) on a small pool; results come back in index order
/// whatever the completion order.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& f,
                            std::size_t workers) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Target gap of the reference solves: 1e-12·(1 + |F(x₀)|), and when a
/// distance tolerance is given (μ > 0) also μ·tol²/2.
inline double high_accuracy_target(double f0, double mu,
                                   std::optional<double> distance_tol = {}) {
  double target = 1e-12 * (1.0 + std::abs(f0));
  if (distance_tol && mu > 0.0) {
    target = std::min(target, 0.5 * mu * *distance_tol * *distance_tol);
  }
  return target;
}

inline SolverReport high_accuracy_solve(const PenalizedOracle& oracle,
                                        std::optional<double> distance_tol = {},
                                        std::size_t max_iterations = 1000000) {
  SolverConfig config;
  config.max_iterations = max_iterations;
  config.record_trace = false;
  const double mu = oracle.strong_convexity();
  config.momentum =
      mu > 0.0 ? MomentumMode::StronglyConvex : MomentumMode::GeneralConvex;
  const Vec x0 = oracle.prox(Vec::Zero(oracle.dimension()), 1.0);
  config.target_gap = high_accuracy_target(oracle.value(x0), mu, distance_tol);
  return apg_solve(oracle, config);
}

/// Maps library exceptions to exit codes and prints one "error:" line.
inline int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const ScheduleError& e) {
    err << "error: " << e.what() << "\n";
    return kScheduleError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

inline std::string fmt(double v) { return format_double(v); }

// ------------------------------------------------------------------ solve

struct SolveArgs {
  std::string spec_path;
  double xi = 0.0;
  double epsilon = 0.0;
  std::string q = "2";
  std::string solver = "apg";
  std::uint64_t seed = 0;
  std::optional<double> U;
  std::string out;
  std::string trace;
};

/// Writes a RunRecord (and the trace CSV); stdout gets "key value" lines.
/// Exit 0 iff the certificate is certified.
inline int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&]() -> int {
        const auto started = std::chrono::steady_clock::now();
        const ProblemSpec spec = load_problem(args.spec_path);
        QNorm q;
        SolverChoice solver;
        try {
          q = parse_qnorm(args.q);
        } catch (const Error& e) {
          throw ParseError("--q", e.what());
        }
        try {
          solver = parse_solver_choice(args.solver);
        } catch (const Error& e) {
          throw ParseError("--solver", e.what());
        }
        SolveOptions options;
        options.seed = args.seed;
        options.U = args.U;
        options.reference = spec.reference;
        if (spec.reference && spec.reference->multipliers) {
          options.xi_bar = spec.reference->multipliers->cwiseAbs().maxCoeff();
        }
        const Certificate cert =
            solve_constrained(spec.problem, args.xi, args.epsilon, q, solver, options);

        RunRecord record;
        record.command = "solve";
        record.config = {{"spec", args.spec_path},
                         {"xi", io::number(args.xi)},
                         {"epsilon", io::number(args.epsilon)},
                         {"q", to_string(q)},
                         {"solver", to_string(solver)},
                         {"seed", args.seed}};
        if (args.U) record.config["U"] = io::number(*args.U);
        record.instance_hash = json_hash(
            export_problem(*spec.problem, spec.reference, spec.generator));
        record.penalty = cert.penalty;
        record.certificate = cert;
        record.tool_version = SOFTPEN_VERSION;
        std::string trace_path = args.trace;
        if (trace_path.empty() && !args.out.empty()) trace_path = args.out + ".trace.csv";
        record.trace_path = trace_path;
        if (!trace_path.empty()) {
          write_text_file(trace_path, trace_csv(cert.report.trace));
        }
        record.wall_time = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
        if (!args.out.empty()) {
          write_text_file(args.out, to_json(record).dump(2) + "\n");
        }

        out << "certified " << (cert.certified ? "true" : "false") << "\n"
            << "termination " << to_string(cert.report.termination) << "\n"
            << "q " << to_string(cert.q) << "\n"
            << "eps_A_measured " << fmt(cert.eps_A_measured) << "\n"
            << "eps_F_measured "
            << (cert.eps_F_measured ? fmt(*cert.eps_F_measured) : "null") << "\n"
            << "theoretical_eps_A " << fmt(cert.theoretical_eps_A) << "\n"
            << "theoretical_eps_F " << fmt(cert.theoretical_eps_F) << "\n"
            << "xi " << fmt(cert.penalty.xi) << "\n"
            << "delta " << fmt(cert.penalty.delta) << "\n"
            << "target_gap " << fmt(cert.target_gap) << "\n"
            << "certified_gap " << fmt(cert.certified_penalized_gap) << "\n"
            << "iterations " << cert.report.iterations_used << "\n"
            << "component_gradients " << cert.report.oracle_calls.component_gradients
            << "\n"
            << "instance_hash " << record.instance_hash << "\n";
        for (const auto& w : cert.warnings) err << "warning: " << w << "\n";
        if (!cert.certified) {
          err << "error: solver did not certify the target gap ("
              << cert.report.diagnostic << ")\n";
          return kNotConverged;
        }
        return kOk;
      },
      err);
}

// ------------------------------------------------------- reproduce-example

struct ReproduceArgs {
  int example = 2;
  std::size_t m = 10;
  std::size_t n = 10;
  double xi = 1.5;
  std::string delta_grid = "1e-1,1e-2,1e-3,1e-4";
};

struct ReproduceRow {
  double delta = 0.0;
  double violation_l1 = 0.0;
  double violation_l2 = 0.0;
  double oracle_violation_l1 = 0.0;
  double oracle_violation_l2 = 0.0;
  double max_coord_diff = 0.0;
  double f_gap = 0.0;
  double oracle_f_gap = 0.0;
  std::optional<double> bound;
  std::optional<double> ratio;
  bool match = false;
  Vec point;
  Vec oracle_point;
};

/// Solves Example 1 or 2 at every δ of the grid and compares with the exact
/// penalized minimizer. Coordinate tolerance is 1e-6.
inline std::vector<ReproduceRow> reproduce_example(const ReproduceArgs& args) {
  if (args.example != 1 && args.example != 2) {
    throw ParseError("--example", "expected 1 or 2");
  }
  if (args.m < 1 || args.m > args.n) throw ParseError("--m", "need 1 <= m <= n");
  const std::vector<double> grid = parse_grid(args.delta_grid, "--delta-grid");
  for (double d : grid) {
    if (!(d > 0.0)) throw ParseError("--delta-grid", "delta values must be > 0");
  }
  if (args.example == 1 && !(args.xi > 1.0 && args.xi < 2.0)) {
    throw ScheduleError("example 1 needs xi in (1, 2)");
  }
  if (args.example == 2 && !(args.xi >= 1.0 && args.xi < 2.0)) {
    throw ScheduleError("example 2 needs xi in [1, 2)");
  }
  const ZooInstance inst = args.example == 1
                               ? make_entrywise_linear(args.n, args.m, args.xi)
                               : make_entrywise_quadratic(args.n, args.m);
  const double U = 2.0 * static_cast<double>(args.m);
  std::vector<ReproduceRow> rows;
  for (double delta : grid) {
    const PenalizedOracle oracle(inst.problem,
                                 {args.xi, delta, DeltaProvenance::Manual});
    const SolverReport r = high_accuracy_solve(
        oracle, args.example == 2 ? std::optional<double>(1e-9) : std::nullopt);
    ReproduceRow row;
    row.delta = delta;
    row.point = r.final_point;
    row.oracle_point = inst.exact_penalized_solution(args.xi, delta);
    const Vec a = eval_constraints(*inst.problem, row.point);
    const Vec a_star = eval_constraints(*inst.problem, row.oracle_point);
    row.violation_l1 = violation_norm(a, QNorm::L1);
    row.violation_l2 = violation_norm(a, QNorm::L2);
    row.oracle_violation_l1 = violation_norm(a_star, QNorm::L1);
    row.oracle_violation_l2 = violation_norm(a_star, QNorm::L2);
    row.max_coord_diff = (row.point - row.oracle_point).cwiseAbs().maxCoeff();
    row.f_gap = eval_objective(*inst.problem, row.point) - inst.reference.f_star;
    row.oracle_f_gap =
        eval_objective(*inst.problem, row.oracle_point) - inst.reference.f_star;
    if (args.example == 1) {
      row.bound = prop3_l1_bound(args.xi, inst.xi_bar(), args.m, delta,
                                 std::max(0.0, r.certified_gap));
      if (row.violation_l1 > 0.0) row.ratio = *row.bound / row.violation_l1;
    } else if (delta <= delta_validity_window(args.m, U, args.xi, 1.0, 0.0)) {
      row.bound = theorem_violation_bound(args.m, delta, U, args.xi, 1.0);
      if (row.violation_l2 > 0.0) row.ratio = *row.bound / row.violation_l2;
    }
    row.match = r.termination == Termination::GapCertified &&
                row.max_coord_diff <= 1e-6;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline int cmd_reproduce_example(const ReproduceArgs& args, std::ostream& out,
                                 std::ostream& err) {
  return guarded(
      [&]() -> int {
        const auto rows = reproduce_example(args);
        out << "delta,violation_l1,violation_l2,oracle_violation_l1,"
               "oracle_violation_l2,max_coord_diff,f_gap,oracle_f_gap,bound,"
               "ratio,match\n";
        bool all = true;
        for (const auto& r : rows) {
          out << fmt(r.delta) << ',' << fmt(r.violation_l1) << ','
              << fmt(r.violation_l2) << ',' << fmt(r.oracle_violation_l1) << ','
              << fmt(r.oracle_violation_l2) << ',' << fmt(r.max_coord_diff) << ','
              << fmt(r.f_gap) << ',' << fmt(r.oracle_f_gap) << ','
              << (r.bound ? fmt(*r.bound) : "") << ','
              << (r.ratio ? fmt(*r.ratio) : "") << ',' << (r.match ? 1 : 0) << "\n";
          all = all && r.match;
        }
        out << "# example=" << args.example << " m=" << args.m << " n=" << args.n
            << " xi=" << fmt(args.xi) << "\n";
        out << (all ? "# PASS" : "# FAIL") << "\n";
        return all ? kOk : kCheckFailed;
      },
      err);
}

// ------------------------------------------------------------ check-bounds

struct CheckBoundsArgs {
  std::string family = "inverse_kkt";
  std::string seeds = "0:20";
  std::string m_grid = "2,5,10";
  std::string delta_grid = "1e-1,3e-2,1e-2,3e-3,1e-3";
  std::size_t n = 10;
  double mu = 1.0;
  double xi_factor = 1.5;
};

struct BoundCell {
  std::uint64_t seed = 0;
  std::size_t m = 0;
  double delta = 0.0;
  bool in_window = false;
  double violation_l1 = 0.0;
  double violation_l2 = 0.0;
  double theorem_bound = 0.0;
  double f_gap = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double solver_gap = 0.0;
  bool certified = false;
  bool theorem_ok = true;
  bool sandwich_ok = true;
};

/**
 * One inverse-KKT instance per (seed, m) with n_active = ⌈m/2⌉ (capped at
 * n) and ξ = xi_factor·ξ̄. For every δ inside the validity window the
 * penalized problem is solved to high accuracy; then
 *   bound:      ‖Ā(x̃)‖₂ ≤ bound + 1e-7 + √m·G·√(2·gap/μ),
 *   sandwich:   −ξ‖Ā(x̃)‖₁ − 1e-7 ≤ F(x̃) − F* ≤ mξδ·log 2 + gap + 1e-7,
 * with G = max √(C0 + C1·(|aᵢ(x̃)| + 1)) the local gradient bound.
 */
inline std::vector<BoundCell> check_bounds(const CheckBoundsArgs& args,
                                           std::size_t workers) {
  if (args.family != "inverse_kkt") {
    throw ParseError("--family", "only 'inverse_kkt' is a mu > 0 family");
  }
  if (!(args.mu > 0.0)) throw ParseError("--mu", "must be > 0");
  if (!(args.xi_factor >= 1.0)) throw ParseError("--xi-factor", "must be >= 1");
  const auto seeds = parse_seeds(args.seeds, "--seeds");
  const auto ms = parse_sizes(args.m_grid, "--m-grid");
  const auto deltas = parse_grid(args.delta_grid, "--delta-grid");
  struct Key {
    std::uint64_t seed;
    std::size_t m;
    double delta;
  };
  std::vector<Key> keys;
  for (auto seed : seeds) {
    for (auto m : ms) {
      for (auto d : deltas) keys.push_back({seed, m, d});
    }
  }
  std::function<BoundCell(std::size_t)> run = [&](std::size_t i) {
    const Key& k = keys[i];
    const std::size_t n_active = std::min(args.n, (k.m + 1) / 2);
    const ZooInstance inst = make_inverse_kkt(k.seed, args.n, k.m, args.mu, n_active);
    const ConstrainedProblem& p = *inst.problem;
    const double xi = args.xi_factor * inst.xi_bar();
    const Vec a_star = eval_constraints(p, inst.reference.x_star);
    const double U = growth_aggregate(k.m, p.max_c0(), p.max_c1(),
                                      a_star.cwiseAbs().maxCoeff());
    BoundCell cell;
    cell.seed = k.seed;
    cell.m = k.m;
    cell.delta = k.delta;
    const double window = delta_validity_window(k.m, U, xi, args.mu, p.max_c1());
    cell.in_window = k.delta > 0.0 && k.delta <= window;
    if (!cell.in_window) return cell;
    const PenalizedOracle oracle(inst.problem, {xi, k.delta, DeltaProvenance::Manual});
    const SolverReport r = high_accuracy_solve(oracle);
    cell.certified = r.termination == Termination::GapCertified;
    cell.solver_gap = r.certified_gap;
    const Vec a = eval_constraints(p, r.final_point);
    cell.violation_l1 = violation_norm(a, QNorm::L1);
    cell.violation_l2 = violation_norm(a, QNorm::L2);
    cell.theorem_bound =
        theorem_violation_bound(k.m, k.delta, U, xi, args.mu, p.max_c1());
    cell.f_gap = eval_objective(p, r.final_point) - inst.reference.f_star;
    const auto [lo, hi] = value_gap_bounds(xi, k.m, k.delta, cell.violation_l1);
    cell.lower = lo;
    cell.upper = hi;
    double g = 0.0;
    for (std::size_t j = 0; j < p.constraints.size(); ++j) {
      const auto& c = p.constraints[j];
      g = std::max(g, std::sqrt(c.growth_c0 +
                                c.growth_c1 *
                                    (std::abs(a[static_cast<Eigen::Index>(j)]) + 1.0)));
    }
    const double dist = std::sqrt(2.0 * std::max(0.0, cell.solver_gap) / args.mu);
    const double slack_a =
        1e-7 + std::sqrt(static_cast<double>(k.m)) * g * dist;
    cell.theorem_ok = cell.certified && cell.violation_l2 <= cell.theorem_bound + slack_a;
    cell.sandwich_ok = cell.certified && cell.f_gap >= lo - 1e-7 &&
                       cell.f_gap <= hi + std::max(0.0, cell.solver_gap) + 1e-7;
    return cell;
  };
  return parallel_map<BoundCell>(keys.size(), run, workers);
}

inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline int cmd_check_bounds(const CheckBoundsArgs& args, std::ostream& out,
                            std::ostream& err) {
  return guarded(
      [&]() -> int {
        const auto cells = check_bounds(args, worker_count());
        out << "seed,m,delta,in_window,violation_l2,theorem_bound,tightness,"
               "f_gap,lower,upper,solver_gap,theorem_ok,sandwich_ok\n";
        std::size_t checked = 0;
        std::size_t skipped = 0;
        std::size_t theorem_bad = 0;
        std::size_t sandwich_bad = 0;
        std::vector<double> tightness;
        for (const auto& c : cells) {
          if (!c.in_window) {
            ++skipped;
            out << c.seed << ',' << c.m << ',' << fmt(c.delta) << ",0,,,,,,,,,\n";
            continue;
          }
          ++checked;
          theorem_bad += c.theorem_ok ? 0 : 1;
          sandwich_bad += c.sandwich_ok ? 0 : 1;
          const double t = c.violation_l2 / c.theorem_bound;
          tightness.push_back(t);
          out << c.seed << ',' << c.m << ',' << fmt(c.delta) << ",1,"
              << fmt(c.violation_l2) << ',' << fmt(c.theorem_bound) << ','
              << fmt(t) << ',' << fmt(c.f_gap) << ',' << fmt(c.lower) << ','
              << fmt(c.upper) << ',' << fmt(c.solver_gap) << ','
              << (c.theorem_ok ? 1 : 0) << ',' << (c.sandwich_ok ? 1 : 0) << "\n";
        }
        out << "# cells=" << checked << " skipped=" << skipped
            << " theorem_violations=" << theorem_bad
            << " sandwich_violations=" << sandwich_bad << "\n";
        out << "# tightness q10=" << fmt(quantile(tightness, 0.1))
            << " q50=" << fmt(quantile(tightness, 0.5))
            << " q90=" << fmt(quantile(tightness, 0.9)) << "\n";
        const bool ok = theorem_bad == 0 && sandwich_bad == 0;
        out << (ok ? "# PASS" : "# FAIL") << "\n";
        return ok ? kOk : kCheckFailed;
      },
      err);
}

// --------------------------------------------------------------- gradcheck

struct GradcheckArgs {
  std::string spec_path;
  std::size_t points = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-5;
};

struct GradcheckLine {
  std::string oracle;
  GradientCheck result;
};

inline std::vector<GradcheckLine> gradcheck_problem(
    const std::shared_ptr<const ConstrainedProblem>& problem,
    const std::vector<Vec>& points) {
  std::vector<GradcheckLine> lines;
  for (std::size_t k = 0; k < problem->components.size(); ++k) {
    const auto& f = problem->components[k];
    lines.push_back({"component[" + std::to_string(k) + "]",
                     check_gradient(f.value, f.gradient, points)});
  }
  for (std::size_t i = 0; i < problem->constraints.size(); ++i) {
    const auto& a = problem->constraints[i];
    lines.push_back({"constraint[" + std::to_string(i) + "]",
                     check_gradient(a.value, a.gradient, points)});
  }
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const PenalizedOracle oracle(problem, {1.0, delta, DeltaProvenance::Manual});
    lines.push_back(
        {"penalized[delta=" + fmt(delta) + "]",
         check_gradient([&](const Vec& x) { return oracle.smooth_value(x); },
                        [&](const Vec& x) { return oracle.smooth_gradient(x); },
                        points)});
  }
  return lines;
}

/// Sample center: Slater point, else reference x*, else the origin.
inline Vec sample_center(const ProblemSpec& spec) {
  if (spec.problem->slater) return spec.problem->slater->point;
  if (spec.reference) return spec.reference->x_star;
  return Vec::Zero(spec.problem->dimension);
}

inline int cmd_gradcheck(const GradcheckArgs& args, std::ostream& out,
                         std::ostream& err) {
  return guarded(
      [&]() -> int {
        if (args.points == 0) throw ParseError("--points", "must be >= 1");
        const ProblemSpec spec = load_problem(args.spec_path);
        const auto pts = sample_points(args.seed, sample_center(spec), 1.0, args.points);
        const auto lines = gradcheck_problem(spec.problem, pts);
        out << "oracle,worst_rel_error,status\n";
        double worst = 0.0;
        std::string worst_name;
        bool ok = true;
        for (const auto& l : lines) {
          const bool pass = l.result.passed(args.tolerance);
          ok = ok && pass;
          if (l.result.worst_error >= worst) {
            worst = l.result.worst_error;
            worst_name = l.oracle;
          }
          out << l.oracle << ',' << fmt(l.result.worst_error) << ','
              << (pass ? "pass" : "fail") << "\n";
        }
        out << "# worst=" << fmt(worst) << " oracle=" << worst_name << "\n";
        out << (ok ? "# PASS" : "# FAIL") << "\n";
        return ok ? kOk : kCheckFailed;
      },
      err);
}

// ------------------------------------------------------------- sweep-delta

struct SweepArgs {
  std::string spec_path;
  double xi = 0.0;
  std::string delta_grid;
  std::optional<double> U;
  std::string out;
};

struct SweepRow {
  double delta = 0.0;
  bool in_window = false;
  double violation_l1 = 0.0;
  double violation_l2 = 0.0;
  std::optional<double> f_gap;
  std::optional<double> theorem_bound;
  bool certified = false;
};

/// Least-squares slope of log y on log x; empty with fewer than two points.
inline std::optional<double> loglog_slope(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

inline std::vector<SweepRow> sweep_delta(const ProblemSpec& spec, double xi,
                                         const std::vector<double>& grid,
                                         std::optional<double> U_supplied,
                                         std::size_t workers) {
  const ConstrainedProblem& p = *spec.problem;
  if (!(p.mu > 0.0)) throw ScheduleError("sweep-delta needs mu > 0");
  if (!(xi > 0.0)) throw ParseError("--xi", "must be > 0");
  for (double d : grid) {
    if (!(d > 0.0)) throw ParseError("--delta-grid", "delta values must be > 0");
  }
  Certificate scratch;
  SolveOptions options;
  options.U = U_supplied;
  options.reference = spec.reference;
  const double U = detail::resolve_U(p, options, scratch);
  const std::size_t m = p.num_constraints();
  const double window = delta_validity_window(m, U, xi, p.mu, p.max_c1());
  std::function<SweepRow(std::size_t)> run = [&](std::size_t i) {
    SweepRow row;
    row.delta = grid[i];
    row.in_window = row.delta <= window;
    const PenalizedOracle oracle(spec.problem, {xi, row.delta, DeltaProvenance::Manual});
    const SolverReport r = high_accuracy_solve(oracle);
    row.certified = r.termination == Termination::GapCertified;
    const Vec a = eval_constraints(p, r.final_point);
    row.violation_l1 = violation_norm(a, QNorm::L1);
    row.violation_l2 = violation_norm(a, QNorm::L2);
    if (spec.reference) {
      row.f_gap = eval_objective(p, r.final_point) - spec.reference->f_star;
    }
    if (row.in_window) {
      row.theorem_bound = theorem_violation_bound(m, row.delta, U, xi, p.mu, p.max_c1());
    }
    return row;
  };
  return parallel_map<SweepRow>(grid.size(), run, workers);
}

inline int cmd_sweep_delta(const SweepArgs& args, std::ostream& out,
                           std::ostream& err) {
  return guarded(
      [&]() -> int {
        const auto grid = parse_grid(args.delta_grid, "--delta-grid");
        const ProblemSpec spec = load_problem(args.spec_path);
        const auto rows = sweep_delta(spec, args.xi, grid, args.U, worker_count());
        std::ostringstream csv;
        csv << "delta,violation_l1,violation_l2,f_gap,theorem_bound,in_window,"
               "certified\n";
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& r : rows) {
          csv << fmt(r.delta) << ',' << fmt(r.violation_l1) << ','
              << fmt(r.violation_l2) << ',' << (r.f_gap ? fmt(*r.f_gap) : "") << ','
              << (r.theorem_bound ? fmt(*r.theorem_bound) : "") << ','
              << (r.in_window ? 1 : 0) << ',' << (r.certified ? 1 : 0) << "\n";
          if (r.in_window) {
            xs.push_back(r.delta);
            ys.push_back(r.violation_l2);
          }
        }
        const auto slope = loglog_slope(xs, ys);
        csv << "# slope=" << (slope ? fmt(*slope) : "") << "\n";
        if (args.out.empty()) {
          out << csv.str();
        } else {
          write_text_file(args.out, csv.str());
        }
        return kOk;
      },
      err);
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family;
  std::size_t n = 10;
  std::size_t m = 10;
  std::uint64_t seed = 0;
  double mu = 1.0;
  std::optional<std::size_t> n_active;
  double delta_prime = 0.05;
  std::string out;
};

inline ZooInstance generate_instance(const GenerateArgs& args) {
  try {
    if (args.family == "entrywise_linear") return make_entrywise_linear(args.n, args.m);
    if (args.family == "entrywise_quadratic") {
      return make_entrywise_quadratic(args.n, args.m);
    }
    if (args.family == "inverse_kkt") {
      return make_inverse_kkt(args.seed, args.n, args.m, args.mu,
                              args.n_active.value_or(std::min(args.n, (args.m + 1) / 2)));
    }
    if (args.family == "smoothed_triangle") {
      return make_smoothed_triangle(args.n, args.delta_prime);
    }
  } catch (const DomainError& e) {
    throw ParseError("--family", e.what());
  }
  throw ParseError("--family",
                   "expected entrywise_linear, entrywise_quadratic, inverse_kkt or "
                   "smoothed_triangle");
}

inline int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&]() -> int {
        const ZooInstance inst = generate_instance(args);
        const std::string text = export_instance(inst).dump(2) + "\n";
        if (args.out.empty()) {
          out << text;
        } else {
          write_text_file(args.out, text);
        }
        return kOk;
      },
      err);
}

}  // namespace softpen::cli
