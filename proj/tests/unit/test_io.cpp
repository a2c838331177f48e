#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace softpen {
namespace {

using test::Gen;

std::string expect_parse_error(const Json& j) {
  try {
    import_problem(j);
  } catch (const ParseError& e) {
    return e.field();
  }
  ADD_FAILURE() << "no ParseError";
  return {};
}

void expect_same_oracles(const ConstrainedProblem& a, const ConstrainedProblem& b) {
  Gen gen(71);
  ASSERT_EQ(a.dimension, b.dimension);
  ASSERT_EQ(a.num_constraints(), b.num_constraints());
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.smoothness, b.smoothness);
  for (std::size_t j = 0; j < a.num_constraints(); ++j) {
    EXPECT_EQ(a.constraints[j].growth_c0, b.constraints[j].growth_c0);
    EXPECT_EQ(a.constraints[j].growth_c1, b.constraints[j].growth_c1);
    EXPECT_EQ(a.constraints[j].smoothness, b.constraints[j].smoothness);
  }
  for (int k = 0; k < 10; ++k) {
    const Vec x = gen.normal_vec(a.dimension);
    EXPECT_EQ(eval_objective(a, x), eval_objective(b, x));
    EXPECT_EQ(eval_constraints(a, x), eval_constraints(b, x));
    EXPECT_EQ(eval_smooth_objective_gradient(a, x), eval_smooth_objective_gradient(b, x));
  }
}

TEST(ProblemJson, RoundTripEveryFamily) {
  for (const auto& inst : {make_entrywise_linear(5, 3), make_entrywise_quadratic(4, 4),
                           make_inverse_kkt(2, 5, 3, 1.0, 2), make_smoothed_triangle(3, 0.05)}) {
    const Json j = export_instance(inst);
    const ProblemSpec spec = import_problem(Json::parse(j.dump()));
    expect_same_oracles(*inst.problem, *spec.problem);
    ASSERT_TRUE(spec.reference);
    EXPECT_EQ(spec.reference->x_star, inst.reference.x_star);
    EXPECT_EQ(spec.reference->f_star, inst.reference.f_star);
    ASSERT_TRUE(spec.generator);
    EXPECT_EQ(spec.generator->family, inst.generator.family);
    EXPECT_EQ(spec.generator->parameters, inst.generator.parameters);
    // Export of the import is the same document.
    EXPECT_EQ(export_problem(*spec.problem, spec.reference, spec.generator).dump(), j.dump());
  }
}

TEST(ProblemJson, ErrorsNameTheField) {
  Json base = export_instance(make_entrywise_quadratic(3, 2));
  {
    Json j = base;
    j.erase("metadata");
    EXPECT_EQ(expect_parse_error(j), "metadata");
  }
  {
    Json j = base;
    j["spec_version"] = 2;
    EXPECT_EQ(expect_parse_error(j), "spec_version");
  }
  {
    Json j = base;
    j["constraints"][1]["b"] = "zero";
    EXPECT_EQ(expect_parse_error(j), "constraints[1].b");
  }
  {
    Json j = base;
    j["objective"]["components"][0]["b"] = Json::array({1.0, 2.0});
    EXPECT_NE(expect_parse_error(j).find("objective.components[0]"), std::string::npos);
  }
  EXPECT_THROW(parse_json_text("{\"spec_version\": 1,"), ParseError);
  EXPECT_THROW(import_problem(Json::array()), ParseError);
}

TEST(ProblemJson, LoadsFixtures) {
  const ProblemSpec spec = load_problem(std::string(SOFTPEN_TEST_DATA) + "/example2_n10.json");
  EXPECT_EQ(spec.problem->dimension, 10);
  EXPECT_EQ(spec.problem->mu, 1.0);
  EXPECT_THROW(load_problem(std::string(SOFTPEN_TEST_DATA) + "/malformed.json"), ParseError);
  EXPECT_THROW(load_problem(std::string(SOFTPEN_TEST_DATA) + "/missing_field.json"), ParseError);
  EXPECT_THROW(load_problem(std::string(SOFTPEN_TEST_DATA) + "/no_such_file.json"), ParseError);
}

TEST(ProblemJson, NonFiniteNumbers) {
  EXPECT_EQ(io::number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isnan(io::get_double(io::number(std::nan("")), "x")));
  EXPECT_EQ(io::get_double(Json("-inf"), "x"), -std::numeric_limits<double>::infinity());
  EXPECT_THROW(io::get_double(Json("abc"), "x"), ParseError);
}

TEST(ProblemJson, HashIsStable) {
  const auto a = make_inverse_kkt(1, 4, 2, 1.0, 1);
  EXPECT_EQ(instance_hash(a), instance_hash(a));
  EXPECT_EQ(instance_hash(a).size(), 16u);
  EXPECT_NE(instance_hash(a), instance_hash(make_inverse_kkt(1, 4, 2, 1.0, 2)));
}

Certificate sample_certificate() {
  const auto inst = make_inverse_kkt(3, 5, 3, 1.0, 2);
  SolveOptions options;
  options.reference = inst.reference;
  options.seed = 12;
  return solve_constrained(inst.problem, 1.5 * inst.xi_bar(), 0.05, QNorm::L2,
                           SolverChoice::Svrg, options);
}

TEST(RunRecordJson, LosslessRoundTrip) {
  RunRecord rec;
  rec.command = "solve";
  rec.config = {{"xi", 1.5}, {"epsilon", 0.05}};
  rec.instance_hash = "0123456789abcdef";
  rec.certificate = sample_certificate();
  rec.penalty = rec.certificate.penalty;
  rec.trace_path = "out.json.trace.csv";
  rec.wall_time = 0.125;
  rec.tool_version = "0.1.0";
  const Json j = to_json(rec);
  const RunRecord back = run_record_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_EQ(back.certificate.point, rec.certificate.point);
  EXPECT_EQ(back.certificate.report.oracle_calls, rec.certificate.report.oracle_calls);
  EXPECT_EQ(back.certificate.seed, 12u);
  EXPECT_EQ(j["certificate"]["run_metadata"]["config_hash"],
            io::certificate_config_hash(rec.certificate));
}

TEST(RunRecordJson, CertificateMatchesRecomputation) {
  const auto inst = make_inverse_kkt(3, 5, 3, 1.0, 2);
  const Certificate cert = sample_certificate();
  const Certificate back = io::certificate_from_json(
      Json::parse(io::to_json(cert).dump()), "certificate");
  Certificate again;
  measure_point(*inst.problem, back.report.final_point, back.q, inst.reference, again);
  EXPECT_EQ(again.eps_A_measured, back.eps_A_measured);
  EXPECT_EQ(*again.eps_F_measured, *back.eps_F_measured);
  EXPECT_EQ(again.objective_value, back.objective_value);
}

TEST(RunRecordJson, MissingFieldNamed) {
  Json j = io::to_json(sample_certificate());
  j["report"].erase("termination");
  try {
    io::certificate_from_json(j, "certificate");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "certificate.report.termination");
  }
}

TEST(TraceCsv, Format) {
  std::vector<TraceRow> rows = {{1, 10, 0.5, 0.25, 0.0}, {2, 20, 0.1, 1e-3, 0.0}};
  EXPECT_EQ(trace_csv(rows),
            "iteration,component_gradients_cum,objective,gradmap_norm\n"
            "1,10,0.5,0.25\n"
            "2,20,0.10000000000000001,0.001\n");
}

}  // namespace
}  // namespace softpen
