#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "softpen/driver/solve.hpp"
#include "softpen/io/problem_json.hpp"

namespace softpen {

/// Everything a `solve` invocation produced.
struct RunRecord {
  std::string command;
  Json config = Json::object();
  std::string instance_hash;
  PenaltyConfig penalty;
  Certificate certificate;
  std::string trace_path;
  double wall_time = 0.0;
  std::string tool_version;
};

namespace io {

inline Json to_json(const PenaltyConfig& p) {
  return {{"xi", number(p.xi)},
          {"delta", number(p.delta)},
          {"provenance", to_string(p.provenance)}};
}

inline PenaltyConfig penalty_from_json(const Json& j, const std::string& path) {
  PenaltyConfig p;
  p.xi = get_double(member(j, "xi", path), path + ".xi");
  p.delta = get_double(member(j, "delta", path), path + ".delta");
  try {
    p.provenance = parse_delta_provenance(
        get_string(member(j, "provenance", path), path + ".provenance"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ".provenance", e.what());
  }
  return p;
}

inline Json to_json(const ScheduleInputs& s) {
  return {{"epsilon", number(s.epsilon)}, {"m", s.m},
          {"mu", number(s.mu)},           {"xi", number(s.xi)},
          {"U", number(s.U)},             {"c0_max", number(s.c0_max)},
          {"c1_max", number(s.c1_max)}};
}

inline ScheduleInputs schedule_from_json(const Json& j, const std::string& path) {
  ScheduleInputs s;
  s.epsilon = get_double(member(j, "epsilon", path), path + ".epsilon");
  s.m = static_cast<std::size_t>(get_uint(member(j, "m", path), path + ".m"));
  s.mu = get_double(member(j, "mu", path), path + ".mu");
  s.xi = get_double(member(j, "xi", path), path + ".xi");
  s.U = get_double(member(j, "U", path), path + ".U");
  s.c0_max = get_double(member(j, "c0_max", path), path + ".c0_max");
  s.c1_max = get_double(member(j, "c1_max", path), path + ".c1_max");
  return s;
}

inline Json to_json(const OracleCalls& c) {
  return {{"full_gradients", c.full_gradients},
          {"component_gradients", c.component_gradients},
          {"prox_calls", c.prox_calls},
          {"function_values", c.function_values}};
}

inline OracleCalls calls_from_json(const Json& j, const std::string& path) {
  OracleCalls c;
  c.full_gradients = get_uint(member(j, "full_gradients", path), path + ".full_gradients");
  c.component_gradients =
      get_uint(member(j, "component_gradients", path), path + ".component_gradients");
  c.prox_calls = get_uint(member(j, "prox_calls", path), path + ".prox_calls");
  c.function_values =
      get_uint(member(j, "function_values", path), path + ".function_values");
  return c;
}

/// The trace is left out; it goes to the CSV file.
inline Json to_json(const SolverReport& r) {
  return {{"solver", r.solver},
          {"final_point", vector(r.final_point)},
          {"final_objective", number(r.final_objective)},
          {"iterations_used", r.iterations_used},
          {"oracle_calls", to_json(r.oracle_calls)},
          {"termination", to_string(r.termination)},
          {"certified_gap", number(r.certified_gap)},
          {"gradmap_norm", number(r.gradmap_norm)},
          {"step_smoothness", number(r.step_smoothness)},
          {"restarts", r.restarts},
          {"stages", r.stages},
          {"diagnostic", r.diagnostic},
          {"caveat", r.caveat}};
}

inline SolverReport report_from_json(const Json& j, const std::string& path) {
  SolverReport r;
  r.solver = get_string(member(j, "solver", path), path + ".solver");
  r.final_point = get_vector(member(j, "final_point", path), path + ".final_point");
  r.final_objective =
      get_double(member(j, "final_objective", path), path + ".final_objective");
  r.iterations_used = static_cast<std::size_t>(
      get_uint(member(j, "iterations_used", path), path + ".iterations_used"));
  r.oracle_calls = calls_from_json(member(j, "oracle_calls", path), path + ".oracle_calls");
  try {
    r.termination = parse_termination(
        get_string(member(j, "termination", path), path + ".termination"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ".termination", e.what());
  }
  r.certified_gap = get_double(member(j, "certified_gap", path), path + ".certified_gap");
  r.gradmap_norm = get_double(member(j, "gradmap_norm", path), path + ".gradmap_norm");
  r.step_smoothness =
      get_double(member(j, "step_smoothness", path), path + ".step_smoothness");
  r.restarts = static_cast<std::size_t>(
      get_uint(member(j, "restarts", path), path + ".restarts"));
  r.stages =
      static_cast<std::size_t>(get_uint(member(j, "stages", path), path + ".stages"));
  r.diagnostic = get_string(member(j, "diagnostic", path), path + ".diagnostic");
  r.caveat = get_string(member(j, "caveat", path), path + ".caveat");
  return r;
}

/// Hash of what determines a run: solver, seed, penalty, schedule inputs and
/// the inner target gap.
inline std::string certificate_config_hash(const Certificate& c) {
  return json_hash({{"solver", c.solver},
                    {"seed", c.seed},
                    {"penalty", to_json(c.penalty)},
                    {"schedule", to_json(c.schedule)},
                    {"target_gap", number(c.target_gap)}});
}

inline Json to_json(const Certificate& c) {
  Json j = {{"point", vector(c.point)},
            {"q", to_string(c.q)},
            {"eps_A_measured", number(c.eps_A_measured)},
            {"objective_value", number(c.objective_value)},
            {"certified_penalized_gap", number(c.certified_penalized_gap)},
            {"target_gap", number(c.target_gap)},
            {"theoretical_eps_A", number(c.theoretical_eps_A)},
            {"theoretical_eps_F", number(c.theoretical_eps_F)},
            {"certified", c.certified},
            {"solver", c.solver},
            {"penalty", to_json(c.penalty)},
            {"schedule", to_json(c.schedule)},
            {"U_source", c.U_source},
            {"warnings", c.warnings},
            {"report", to_json(c.report)}};
  j["eps_F_measured"] = c.eps_F_measured ? number(*c.eps_F_measured) : Json();
  j["run_metadata"] = {{"seed", c.seed}, {"config_hash", certificate_config_hash(c)}};
  return j;
}

inline Certificate certificate_from_json(const Json& j, const std::string& path) {
  Certificate c;
  c.point = get_vector(member(j, "point", path), path + ".point");
  try {
    c.q = parse_qnorm(get_string(member(j, "q", path), path + ".q"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ".q", e.what());
  }
  c.eps_A_measured = get_double(member(j, "eps_A_measured", path), path + ".eps_A_measured");
  const Json& ef = member(j, "eps_F_measured", path);
  if (!ef.is_null()) c.eps_F_measured = get_double(ef, path + ".eps_F_measured");
  c.objective_value =
      get_double(member(j, "objective_value", path), path + ".objective_value");
  c.certified_penalized_gap = get_double(member(j, "certified_penalized_gap", path),
                                         path + ".certified_penalized_gap");
  c.target_gap = get_double(member(j, "target_gap", path), path + ".target_gap");
  c.theoretical_eps_A =
      get_double(member(j, "theoretical_eps_A", path), path + ".theoretical_eps_A");
  c.theoretical_eps_F =
      get_double(member(j, "theoretical_eps_F", path), path + ".theoretical_eps_F");
  c.certified = get_bool(member(j, "certified", path), path + ".certified");
  c.solver = get_string(member(j, "solver", path), path + ".solver");
  const Json& meta = member(j, "run_metadata", path);
  c.seed = get_uint(member(meta, "seed", path + ".run_metadata"),
                    path + ".run_metadata.seed");
  c.penalty = penalty_from_json(member(j, "penalty", path), path + ".penalty");
  c.schedule = schedule_from_json(member(j, "schedule", path), path + ".schedule");
  c.U_source = get_string(member(j, "U_source", path), path + ".U_source");
  const Json& w = member(j, "warnings", path);
  if (!w.is_array()) throw ParseError(path + ".warnings", "expected an array");
  for (std::size_t i = 0; i < w.size(); ++i) {
    c.warnings.push_back(get_string(w[i], path + ".warnings[" + std::to_string(i) + "]"));
  }
  c.report = report_from_json(member(j, "report", path), path + ".report");
  return c;
}

}  // namespace io

inline Json to_json(const RunRecord& r) {
  return {{"command", r.command},
          {"config", r.config},
          {"instance_hash", r.instance_hash},
          {"penalty", io::to_json(r.penalty)},
          {"certificate", io::to_json(r.certificate)},
          {"trace_path", r.trace_path},
          {"wall_time", io::number(r.wall_time)},
          {"tool_version", r.tool_version}};
}

inline RunRecord run_record_from_json(const Json& j) {
  RunRecord r;
  r.command = io::get_string(io::member(j, "command", ""), "command");
  r.config = io::member(j, "config", "");
  r.instance_hash = io::get_string(io::member(j, "instance_hash", ""), "instance_hash");
  r.penalty = io::penalty_from_json(io::member(j, "penalty", ""), "penalty");
  r.certificate = io::certificate_from_json(io::member(j, "certificate", ""), "certificate");
  r.trace_path = io::get_string(io::member(j, "trace_path", ""), "trace_path");
  r.wall_time = io::get_double(io::member(j, "wall_time", ""), "wall_time");
  r.tool_version = io::get_string(io::member(j, "tool_version", ""), "tool_version");
  return r;
}

/// 17 significant digits, enough to read back the same double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// iteration,component_gradients_cum,objective,gradmap_norm
inline void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iteration,component_gradients_cum,objective,gradmap_norm\n";
  for (const auto& row : trace) {
    out << row.iteration << ',' << row.component_gradients_cum << ','
        << format_double(row.objective) << ',' << format_double(row.gradmap_norm)
        << '\n';
  }
}

inline std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

}  // namespace softpen
