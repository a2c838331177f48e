#include <filesystem>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "softpen/cli/commands.hpp"

namespace softpen {
namespace {

namespace fs = std::filesystem;

const std::string kData = SOFTPEN_TEST_DATA;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "softpen_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

template <class Args, class Fn>
Captured run(Fn fn, const Args& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = fn(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliHelpers, Lists) {
  EXPECT_EQ(cli::parse_grid("1e-1, 2e-2,3", "g"), (std::vector<double>{0.1, 0.02, 3.0}));
  EXPECT_THROW(cli::parse_grid("", "g"), ParseError);
  EXPECT_THROW(cli::parse_grid("1,x", "g"), ParseError);
  EXPECT_EQ(cli::parse_seeds("3:6", "s"), (std::vector<std::uint64_t>{3, 4, 5}));
  EXPECT_EQ(cli::parse_seeds("7,1", "s"), (std::vector<std::uint64_t>{7, 1}));
  EXPECT_EQ(cli::parse_sizes("2,5", "m"), (std::vector<std::size_t>{2, 5}));
}

TEST(CliHelpers, ParallelMapKeepsOrder) {
  std::function<int(std::size_t)> sq = [](std::size_t i) { return static_cast<int>(i * i); };
  const auto out = cli::parallel_map<int>(50, sq, 4);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  std::function<int(std::size_t)> bad = [](std::size_t i) -> int {
    if (i == 7) throw DomainError("boom");
    return 0;
  };
  EXPECT_THROW(cli::parallel_map<int>(10, bad, 3), DomainError);
}

TEST(CliHelpers, LogLogSlope) {
  EXPECT_NEAR(*cli::loglog_slope({1, 10, 100}, {2, 20, 200}), 1.0, 1e-12);
  EXPECT_FALSE(cli::loglog_slope({1}, {2}));
  EXPECT_FALSE(cli::loglog_slope({}, {}));
}

TEST(CmdSolve, Example2WritesRecordAndTrace) {
  const fs::path out = scratch("solve.json");
  cli::SolveArgs args;
  args.spec_path = kData + "/example2_n10.json";
  args.xi = 1.5;
  args.epsilon = 0.05;
  args.out = out.string();
  const Captured r = run(cli::cmd_solve, args);
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("certified true"), std::string::npos);
  const RunRecord rec = run_record_from_json(parse_json_text(read_text_file(out.string())));
  EXPECT_LE(rec.certificate.eps_A_measured, 0.05);
  EXPECT_TRUE(rec.certificate.certified);
  const std::string trace = read_text_file(out.string() + ".trace.csv");
  EXPECT_EQ(trace.rfind("iteration,component_gradients_cum,objective,gradmap_norm\n", 0), 0u);
  EXPECT_EQ(rec.trace_path, out.string() + ".trace.csv");
}

TEST(CmdSolve, StdoutIsReproducible) {
  cli::SolveArgs args;
  args.spec_path = kData + "/example2_n10.json";
  args.xi = 1.5;
  args.epsilon = 0.05;
  args.solver = "svrg";
  args.seed = 4;
  EXPECT_EQ(run(cli::cmd_solve, args).out, run(cli::cmd_solve, args).out);
}

TEST(CmdSolve, ErrorCodes) {
  cli::SolveArgs args;
  args.xi = 1.5;
  args.epsilon = 0.05;
  args.spec_path = kData + "/malformed.json";
  EXPECT_EQ(run(cli::cmd_solve, args).code, cli::kParseError);
  args.spec_path = kData + "/missing_field.json";
  const Captured missing = run(cli::cmd_solve, args);
  EXPECT_EQ(missing.code, cli::kParseError);
  EXPECT_NE(missing.err.find("metadata"), std::string::npos);
  args.spec_path = kData + "/example2_n10.json";
  args.epsilon = 1e6;
  EXPECT_EQ(run(cli::cmd_solve, args).code, cli::kScheduleError);
  args.epsilon = 0.05;
  args.q = "7";
  EXPECT_EQ(run(cli::cmd_solve, args).code, cli::kParseError);
  args.q = "2";
  args.solver = "newton";
  EXPECT_EQ(run(cli::cmd_solve, args).code, cli::kParseError);
}

TEST(CmdReproduce, Example1GapColumn) {
  cli::ReproduceArgs args;
  args.example = 1;
  args.delta_grid = "1e-2,1e-3";
  const auto rows = cli::reproduce_example(args);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.match);
    EXPECT_NEAR(r.f_gap, 10 * r.delta * std::log(0.5), 1e-6);
    ASSERT_TRUE(r.bound);
    EXPECT_LE(r.violation_l1, *r.bound);
  }
}

TEST(CmdReproduce, Example2Ratios) {
  cli::ReproduceArgs args;
  const auto rows = cli::reproduce_example(args);
  ASSERT_EQ(rows.size(), 4u);
  const double U = 20.0;
  for (const auto& r : rows) {
    EXPECT_TRUE(r.match);
    ASSERT_TRUE(r.ratio) << r.delta;
    EXPECT_GE(*r.ratio, 1.0);
    EXPECT_LE(*r.ratio, 10.0 * std::log(U * 1.5 / r.delta));
  }
  const Captured out = run(cli::cmd_reproduce_example, args);
  EXPECT_EQ(out.code, cli::kOk);
  EXPECT_NE(out.out.find("# PASS"), std::string::npos);
}

TEST(CmdReproduce, ArgumentErrors) {
  cli::ReproduceArgs args;
  args.example = 1;
  args.xi = 2.5;
  EXPECT_EQ(run(cli::cmd_reproduce_example, args).code, cli::kScheduleError);
  args.example = 2;
  args.xi = 1.5;
  args.delta_grid = "";
  EXPECT_EQ(run(cli::cmd_reproduce_example, args).code, cli::kParseError);
  args.delta_grid = "0.1";
  args.example = 3;
  EXPECT_EQ(run(cli::cmd_reproduce_example, args).code, cli::kParseError);
}

TEST(CmdCheckBounds, SmallSweepIsCleanAndDeterministic) {
  cli::CheckBoundsArgs args;
  args.seeds = "0:3";
  args.m_grid = "2,5";
  args.delta_grid = "1e-1,1e-2";
  const auto a = cli::check_bounds(args, 1);
  const auto b = cli::check_bounds(args, 3);
  ASSERT_EQ(a.size(), 12u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].violation_l2, b[i].violation_l2);
    if (!a[i].in_window) continue;
    EXPECT_TRUE(a[i].certified);
    EXPECT_TRUE(a[i].theorem_ok) << a[i].seed << ' ' << a[i].m << ' ' << a[i].delta;
    EXPECT_TRUE(a[i].sandwich_ok);
    EXPECT_GE(a[i].f_gap, a[i].lower);
  }
  const Captured r1 = run(cli::cmd_check_bounds, args);
  const Captured r2 = run(cli::cmd_check_bounds, args);
  EXPECT_EQ(r1.code, cli::kOk);
  EXPECT_EQ(r1.out, r2.out);
  args.family = "entrywise_linear";
  EXPECT_EQ(run(cli::cmd_check_bounds, args).code, cli::kParseError);
}

TEST(CmdGradcheck, PassAndFail) {
  cli::GradcheckArgs args;
  args.spec_path = kData + "/example2_n10.json";
  const Captured ok = run(cli::cmd_gradcheck, args);
  EXPECT_EQ(ok.code, cli::kOk);
  EXPECT_NE(ok.out.find("# PASS"), std::string::npos);
  args.spec_path = kData + "/corrupted_gradient.json";
  const Captured bad = run(cli::cmd_gradcheck, args);
  EXPECT_EQ(bad.code, cli::kCheckFailed);
  EXPECT_NE(bad.out.find("component[0]"), std::string::npos);
  EXPECT_NE(bad.out.find("fail"), std::string::npos);
  args.points = 0;
  EXPECT_EQ(run(cli::cmd_gradcheck, args).code, cli::kParseError);
}

TEST(CmdGradcheck, EveryZooFamilyPasses) {
  for (const auto& inst : {make_entrywise_linear(5, 3), make_entrywise_quadratic(5, 5),
                           make_inverse_kkt(9, 6, 4, 1.0, 2), make_smoothed_triangle(3, 0.05)}) {
    const auto pts = sample_points(1, inst.problem->slater->point, 1.0, 100);
    for (const auto& line : cli::gradcheck_problem(inst.problem, pts)) {
      EXPECT_LE(line.result.worst_error, 1e-5) << inst.problem->name << ' ' << line.oracle;
    }
  }
}

TEST(CmdSweep, SlopeAndEdgeCases) {
  cli::SweepArgs args;
  args.spec_path = kData + "/example2_n10.json";
  args.xi = 1.5;
  args.delta_grid = "1e-2,3e-3,1e-3,3e-4,1e-4";
  const Captured r = run(cli::cmd_sweep_delta, args);
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto pos = r.out.find("# slope=");
  ASSERT_NE(pos, std::string::npos);
  const double slope = std::stod(r.out.substr(pos + 8));
  EXPECT_GE(slope, 0.9);
  EXPECT_LE(slope, 1.1);
  EXPECT_EQ(r.out, run(cli::cmd_sweep_delta, args).out);

  args.delta_grid = "1e-2";
  const Captured single = run(cli::cmd_sweep_delta, args);
  EXPECT_EQ(single.code, cli::kOk);
  EXPECT_NE(single.out.find("# slope=\n"), std::string::npos);
  EXPECT_NE(single.out.find("0.01,"), std::string::npos);

  // Rows beyond the validity window are flagged, not rejected.
  args.delta_grid = "1e3";
  const Captured outside = run(cli::cmd_sweep_delta, args);
  EXPECT_EQ(outside.code, cli::kOk);
  EXPECT_NE(outside.out.find(",,0,"), std::string::npos);

  args.delta_grid = "";
  EXPECT_EQ(run(cli::cmd_sweep_delta, args).code, cli::kParseError);
}

TEST(CmdGenerate, WritesLoadableSpec) {
  const fs::path out = scratch("gen.json");
  cli::GenerateArgs args;
  args.family = "inverse_kkt";
  args.n = 6;
  args.m = 4;
  args.seed = 3;
  args.out = out.string();
  ASSERT_EQ(run(cli::cmd_generate, args).code, cli::kOk);
  const ProblemSpec spec = load_problem(out.string());
  EXPECT_EQ(spec.generator->seed, 3u);
  EXPECT_EQ(json_hash(export_problem(*spec.problem, spec.reference, spec.generator)),
            instance_hash(make_inverse_kkt(3, 6, 4, 1.0, 2)));
  args.family = "unknown";
  EXPECT_EQ(run(cli::cmd_generate, args).code, cli::kParseError);
  args.family = "entrywise_linear";
  args.m = 9;
  EXPECT_EQ(run(cli::cmd_generate, args).code, cli::kParseError);
}

}  // namespace
}  // namespace softpen
