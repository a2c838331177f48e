#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace softpen {
namespace {

using test::Gen;

std::shared_ptr<ConstrainedProblem> shifted_quadratic_1d() {
  auto p = std::make_shared<ConstrainedProblem>();
  p->dimension = 1;
  QuadraticForm f;
  f.Q = Mat::Identity(1, 1);
  f.b = Vec::Constant(1, -3.0);
  f.c = 4.5;
  p->components.push_back(quadratic_component(f, 1.0));
  p->constraints.push_back(linear_constraint(Vec::Constant(1, 1.0), 10.0));
  p->mu = 1.0;
  p->smoothness = 1.0;
  return p;
}

TEST(Apg, UnconstrainedQuadratic) {
  const PenalizedOracle oracle(shifted_quadratic_1d(), {0.0, 1.0, DeltaProvenance::Manual});
  SolverConfig config;
  config.target_gap = 1e-20;
  config.x0 = Vec::Zero(1);
  const SolverReport r = apg_solve(oracle, config);
  EXPECT_TRUE(r.certified());
  EXPECT_NEAR(r.final_point[0], 3.0, 1e-9);
}

TEST(Apg, EntrywiseQuadraticMatchesRoot) {
  const auto inst = make_entrywise_quadratic(4, 4);
  const double xi = 1.5;
  const double delta = 0.01;
  const PenalizedOracle oracle(inst.problem, {xi, delta, DeltaProvenance::Manual});
  SolverConfig config;
  config.target_gap = 0.5 * 1e-18;  // distance ≤ √(2·gap/μ) = 1e-9
  const SolverReport r = apg_solve(oracle, config);
  ASSERT_TRUE(r.certified()) << r.diagnostic;
  const double root = entrywise_quadratic_root(xi, delta);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(r.final_point[i], root, 1e-8);
}

TEST(Apg, EntrywiseLinearGeneralConvex) {
  const auto inst = make_entrywise_linear(10, 10);
  const double xi = 1.5;
  const double delta = 0.01;
  const PenalizedOracle oracle(inst.problem, {xi, delta, DeltaProvenance::Manual});
  SolverConfig config;
  config.momentum = MomentumMode::GeneralConvex;
  config.target_gap = 1e-12;
  const SolverReport r = apg_solve(oracle, config);
  ASSERT_TRUE(r.certified()) << r.diagnostic;
  EXPECT_FALSE(r.caveat.empty());
  for (Eigen::Index i = 0; i < 10; ++i) {
    EXPECT_NEAR(r.final_point[i], delta * std::log(xi - 1.0), 1e-6);
  }
}

TEST(Apg, NeverAboveStartAndTraceMonotone) {
  Gen gen(41);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = make_inverse_kkt(seed, 6, 4, 1.0, 2);
    for (auto mode : {MomentumMode::StronglyConvex, MomentumMode::GeneralConvex}) {
      const PenalizedOracle oracle(inst.problem,
                                   {1.5 * inst.xi_bar(), 0.01, DeltaProvenance::Manual});
      SolverConfig config;
      config.momentum = mode;
      config.target_gap = 1e-8;
      config.x0 = gen.normal_vec(6, 2.0);
      const SolverReport r = apg_solve(oracle, config);
      EXPECT_LE(r.final_objective, oracle.value(*config.x0) + 1e-9);
      for (std::size_t k = 1; k < r.trace.size(); ++k) {
        const double prev = r.trace[k - 1].objective;
        EXPECT_LE(r.trace[k].objective,
                  prev + 8.0 * std::numeric_limits<double>::epsilon() * (1 + std::abs(prev)));
        EXPECT_TRUE(std::isfinite(r.trace[k].objective));
      }
    }
  }
}

TEST(Apg, CertificateActuallyFired) {
  const auto inst = make_inverse_kkt(7, 8, 5, 1.0, 3);
  const PenalizedOracle oracle(inst.problem, {2.0 * inst.xi_bar(), 0.01, DeltaProvenance::Manual});
  SolverConfig config;
  config.target_gap = 1e-9;
  const SolverReport r = apg_solve(oracle, config);
  ASSERT_TRUE(r.certified());
  const double L = oracle.smoothness();
  const double mu = 1.0;
  EXPECT_LE(r.gradmap_norm * r.gradmap_norm, 2.0 * mu * config.target_gap / (1.0 + L / mu));
}

TEST(Apg, IterationsScaleWithSquareRootCondition) {
  // f = ½Σ dᵢxᵢ² + bᵀx with spectrum in [1, 400]: √(L/μ) = 20.
  const Eigen::Index n = 20;
  auto p = std::make_shared<ConstrainedProblem>();
  p->dimension = n;
  QuadraticForm f;
  f.Q = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f.Q(i, i) = std::pow(400.0, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  f.b = Vec::Ones(n);
  p->components.push_back(quadratic_component(f, 400.0));
  p->constraints.push_back(linear_constraint(Vec::Ones(n), 1e3));
  p->mu = 1.0;
  p->smoothness = 400.0;
  const PenalizedOracle oracle(p, {0.0, 1.0, DeltaProvenance::Manual});
  std::vector<double> logs;
  std::vector<double> iters;
  for (double gap : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
    SolverConfig config;
    config.target_gap = gap;
    const SolverReport r = apg_solve(oracle, config);
    ASSERT_TRUE(r.certified());
    logs.push_back(std::log(1.0 / gap));
    iters.push_back(static_cast<double>(r.iterations_used));
  }
  const double n_pts = static_cast<double>(logs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    mx += logs[i] / n_pts;
    my += iters[i] / n_pts;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    sxy += (logs[i] - mx) * (iters[i] - my);
    sxx += (logs[i] - mx) * (logs[i] - mx);
  }
  const double slope = sxy / sxx;
  EXPECT_GE(slope, 0.5 * 20.0);
  EXPECT_LE(slope, 2.0 * 20.0);
}

TEST(Apg, RejectsZeroMuInStronglyConvexMode) {
  const auto inst = make_entrywise_linear(3, 3);
  const PenalizedOracle oracle(inst.problem, {1.5, 0.1, DeltaProvenance::Manual});
  SolverConfig config;
  EXPECT_THROW(apg_solve(oracle, config), DomainError);
  config.target_gap = 0.0;
  config.momentum = MomentumMode::GeneralConvex;
  EXPECT_THROW(apg_solve(oracle, config), DomainError);
}

TEST(Svrg, BitIdenticalForSameSeed) {
  const auto p = test::least_squares_problem(42, 5, 4, 2, 0.1);
  const PenalizedOracle oracle(p, {1.0, 0.05, DeltaProvenance::Manual});
  SolverConfig config;
  config.target_gap = 1e-9;
  config.seed = 77;
  const SolverReport a = prox_svrg_solve(oracle, config);
  const SolverReport b = prox_svrg_solve(oracle, config);
  ASSERT_TRUE(a.certified());
  EXPECT_EQ(a.final_point, b.final_point);
  EXPECT_EQ(a.final_objective, b.final_objective);
  EXPECT_EQ(a.iterations_used, b.iterations_used);
  EXPECT_EQ(a.oracle_calls, b.oracle_calls);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    EXPECT_EQ(a.trace[k].objective, b.trace[k].objective);
  }
  config.seed = 78;
  const SolverReport c = prox_svrg_solve(oracle, config);
  EXPECT_NE(a.oracle_calls.component_gradients + a.final_point.sum(),
            c.oracle_calls.component_gradients + c.final_point.sum());
}

TEST(Svrg, AgreesWithApg) {
  const auto p = test::least_squares_problem(43, 4, 3, 2, 0.05);
  const PenalizedOracle oracle(p, {2.0, 0.02, DeltaProvenance::Manual});
  SolverConfig config;
  config.target_gap = 1e-9;
  const SolverReport apg = apg_solve(oracle, config);
  const SolverReport svrg = prox_svrg_solve(oracle, config);
  ASSERT_TRUE(apg.certified());
  ASSERT_TRUE(svrg.certified());
  EXPECT_NEAR(svrg.final_objective, apg.final_objective, 1e-6);
}

TEST(Svrg, SnapshotGradientIsFullGradient) {
  const auto p = test::least_squares_problem(44, 3, 1, 1, 0.2);
  const PenalizedOracle oracle(p, {1.0, 0.1, DeltaProvenance::Manual});
  ASSERT_EQ(oracle.num_components(), 2u);
  std::size_t epochs = 0;
  double worst = 0.0;
  SolverConfig config;
  config.target_gap = 1e-10;
  config.epoch_observer = [&](const Vec& snapshot, const Vec& full) {
    ++epochs;
    worst = std::max(worst, (full - oracle.smooth_gradient(snapshot)).norm() /
                                (1.0 + full.norm()));
  };
  const SolverReport r = prox_svrg_solve(oracle, config);
  EXPECT_TRUE(r.certified());
  EXPECT_GT(epochs, 1u);
  EXPECT_LE(worst, 1e-14);
}

TEST(Svrg, SeedSpreadWithinTenTargets) {
  const auto inst = make_entrywise_quadratic(6, 4);
  const PenalizedOracle oracle(inst.problem, {1.5, 0.05, DeltaProvenance::Manual});
  const double target = 1e-8;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolverConfig config;
    config.target_gap = target;
    config.seed = seed;
    const SolverReport r = prox_svrg_solve(oracle, config);
    ASSERT_TRUE(r.certified());
    lo = std::min(lo, r.final_objective);
    hi = std::max(hi, r.final_objective);
  }
  EXPECT_LE(hi - lo, 10.0 * target);
}

TEST(Svrg, RequiresStrongConvexity) {
  const auto inst = make_entrywise_linear(3, 3);
  const PenalizedOracle oracle(inst.problem, {1.5, 0.1, DeltaProvenance::Manual});
  EXPECT_THROW(prox_svrg_solve(oracle, SolverConfig{}), DomainError);
  EXPECT_THROW(catalyst_solve(oracle, SolverConfig{}), DomainError);
}

TEST(Catalyst, VanishingKappaReducesToSvrg) {
  const auto p = test::least_squares_problem(45, 4, 3, 2, 0.1);
  const PenalizedOracle oracle(p, {1.0, 0.05, DeltaProvenance::Manual});
  SolverConfig config;
  config.target_gap = 1e-12;
  config.seed = 5;
  const SolverReport plain = prox_svrg_solve(oracle, config);
  config.catalyst.kappa = 1e-14;
  config.catalyst.max_stages = 1;
  config.catalyst.decay = 0.5;
  config.catalyst.initial_tolerance = 2.0 * config.target_gap;
  const SolverReport cat = catalyst_solve(oracle, config);
  ASSERT_TRUE(plain.certified());
  ASSERT_TRUE(cat.certified());
  EXPECT_EQ(cat.stages, 1u);
  EXPECT_LE((cat.final_point - plain.final_point).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Catalyst, AgreesWithApg) {
  const auto inst = make_inverse_kkt(8, 8, 4, 1.0, 2);
  const PenalizedOracle oracle(inst.problem, {1.5 * inst.xi_bar(), 0.02, DeltaProvenance::Manual});
  SolverConfig config;
  config.target_gap = 1e-9;
  const SolverReport apg = apg_solve(oracle, config);
  const SolverReport cat = catalyst_solve(oracle, config);
  ASSERT_TRUE(apg.certified());
  ASSERT_TRUE(cat.certified());
  EXPECT_NEAR(cat.final_objective, apg.final_objective, 1e-6);
  EXPECT_GE(cat.stages, 1u);
}

TEST(CounterRngTest, ReplayAndSplit) {
  const CounterRng rng(9);
  EXPECT_EQ(rng.bits(3, 4), CounterRng(9).bits(3, 4));
  EXPECT_NE(rng.bits(3, 4), rng.bits(4, 3));
  EXPECT_EQ(rng.split(0).seed(), rng.seed());
  EXPECT_NE(rng.split(1).seed(), rng.split(2).seed());
  std::vector<std::size_t> hist(7, 0);
  for (std::uint64_t s = 0; s < 70000; ++s) ++hist[rng.index(0, s, 7)];
  for (auto h : hist) EXPECT_NEAR(static_cast<double>(h), 10000.0, 500.0);
}

}  // namespace
}  // namespace softpen
