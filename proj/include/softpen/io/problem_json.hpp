#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "softpen/builders.hpp"
#include "softpen/errors.hpp"
#include "softpen/zoo/instance.hpp"
#include "softpen/zoo/smoothing.hpp"

namespace softpen {

using Json = nlohmann::json;

inline constexpr int kSpecVersion = 1;

/// A problem spec as read from disk.
struct ProblemSpec {
  std::shared_ptr<const ConstrainedProblem> problem;
  std::optional<ReferenceSolution> reference;
  std::optional<GeneratorRecord> generator;
};

namespace io {

/// Doubles go out as JSON numbers when finite and as "inf"/"-inf"/"nan"
/// strings otherwise, so every value survives a round trip.
inline Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline Json vector(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

inline Json matrix(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector(m.row(r).transpose()));
  return out;
}

inline const Json& member(const Json& j, const std::string& key,
                          const std::string& path) {
  if (!j.is_object()) {
    throw ParseError(path.empty() ? "<document>" : path, "expected an object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  }
  return *it;
}

inline double get_double(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError(path, "expected a number");
}

inline std::uint64_t get_uint(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw ParseError(path, "expected a non-negative integer");
}

inline std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

inline bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path, "expected true or false");
  return j.get<bool>();
}

inline Vec get_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        get_double(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline Mat get_matrix(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Mat m(rows, rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const Vec row = get_vector(j[r], rp);
    if (row.size() != m.cols()) throw ParseError(rp, "ragged matrix row");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

inline Json form_to_json(const QuadraticForm& f) {
  Json j;
  if (!f.is_affine()) j["Q"] = matrix(f.Q);
  j["b"] = vector(f.b);
  j["c"] = number(f.c);
  if (f.gradient_offset.size() > 0) j["gradient_offset"] = vector(f.gradient_offset);
  return j;
}

inline QuadraticForm form_from_json(const Json& j, const std::string& path,
                                    Eigen::Index n) {
  QuadraticForm f;
  if (j.contains("Q")) f.Q = get_matrix(j["Q"], path + ".Q");
  f.b = get_vector(member(j, "b", path), path + ".b");
  f.c = j.contains("c") ? get_double(j["c"], path + ".c") : 0.0;
  if (j.contains("gradient_offset")) {
    f.gradient_offset = get_vector(j["gradient_offset"], path + ".gradient_offset");
  }
  if (f.b.size() != n) throw ParseError(path + ".b", "length differs from dimension");
  try {
    f.validate(path);
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
  return f;
}

inline double lambda_max(const Mat& Q) {
  if (Q.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

inline Json generator_to_json(const GeneratorRecord& g) {
  Json params = Json::object();
  for (const auto& [k, v] : g.parameters) params[k] = number(v);
  return {{"family", g.family}, {"seed", g.seed}, {"parameters", params}};
}

inline GeneratorRecord generator_from_json(const Json& j, const std::string& path) {
  GeneratorRecord g;
  g.family = get_string(member(j, "family", path), path + ".family");
  g.seed = get_uint(member(j, "seed", path), path + ".seed");
  const Json& params = member(j, "parameters", path);
  if (!params.is_object()) throw ParseError(path + ".parameters", "expected an object");
  for (auto it = params.begin(); it != params.end(); ++it) {
    g.parameters[it.key()] = get_double(it.value(), path + ".parameters." + it.key());
  }
  return g;
}

inline Json reference_to_json(const ReferenceSolution& r) {
  Json j = {{"x_star", vector(r.x_star)}, {"f_star", number(r.f_star)}};
  if (r.multipliers) j["multipliers"] = vector(*r.multipliers);
  if (r.active_set) j["active_set"] = *r.active_set;
  return j;
}

inline ReferenceSolution reference_from_json(const Json& j, const std::string& path) {
  ReferenceSolution r;
  r.x_star = get_vector(member(j, "x_star", path), path + ".x_star");
  r.f_star = get_double(member(j, "f_star", path), path + ".f_star");
  if (j.contains("multipliers")) {
    r.multipliers = get_vector(j["multipliers"], path + ".multipliers");
  }
  if (j.contains("active_set")) {
    const Json& a = j["active_set"];
    if (!a.is_array()) throw ParseError(path + ".active_set", "expected an array");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < a.size(); ++i) {
      idx.push_back(static_cast<std::size_t>(
          get_uint(a[i], path + ".active_set[" + std::to_string(i) + "]")));
    }
    r.active_set = idx;
  }
  return r;
}

}  // namespace io

/**
 * Serializes a problem to the spec schema. Every oracle must carry a form
 * descriptor and ψ must be zero or a box; closures cannot be exported.
 */
inline Json export_problem(const ConstrainedProblem& problem,
                           const std::optional<ReferenceSolution>& reference = {},
                           const std::optional<GeneratorRecord>& generator = {}) {
  Json j;
  j["spec_version"] = kSpecVersion;
  j["name"] = problem.name;
  j["dimension"] = problem.dimension;

  Json comps = Json::array();
  Json comp_l = Json::array();
  for (std::size_t k = 0; k < problem.components.size(); ++k) {
    const auto* f = std::get_if<QuadraticForm>(&problem.components[k].form);
    if (!f) {
      throw Error("component " + std::to_string(k) + " has no exportable form");
    }
    comps.push_back(io::form_to_json(*f));
    comp_l.push_back(io::number(problem.components[k].smoothness));
  }
  Json prox;
  if (problem.proximal.is_zero()) {
    prox = {{"kind", "none"}};
  } else if (problem.proximal.kind() == "box") {
    prox = {{"kind", "box"}, {"radius", io::number(problem.proximal.radius())}};
  } else {
    throw Error("proximal term '" + problem.proximal.kind() + "' is not exportable");
  }
  j["objective"] = {{"components", comps}, {"proximal", prox}};

  Json cons = Json::array();
  Json meta_cons = Json::array();
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const Constraint& a = problem.constraints[i];
    Json c;
    if (const auto* f = std::get_if<QuadraticForm>(&a.form)) {
      if (f->is_affine() && f->gradient_offset.size() == 0) {
        c = {{"type", "linear"}, {"a", io::vector(f->b)}, {"b", io::number(-f->c)}};
      } else {
        c = io::form_to_json(*f);
        c["type"] = "quadratic";
      }
    } else if (const auto* l = std::get_if<LogSumExpForm>(&a.form)) {
      Json pieces = Json::array();
      for (const auto& p : l->pieces) pieces.push_back(io::form_to_json(p));
      c = {{"type", "smoothed_max"},
           {"delta_prime", io::number(l->delta_prime)},
           {"pieces", pieces}};
    } else {
      throw Error("constraint " + std::to_string(i) + " has no exportable form");
    }
    cons.push_back(c);
    meta_cons.push_back({{"L_a", io::number(a.smoothness)},
                         {"C0", io::number(a.growth_c0)},
                         {"C1", io::number(a.growth_c1)}});
  }
  j["constraints"] = cons;
  j["metadata"] = {{"mu", io::number(problem.mu)},
                   {"L_f", io::number(problem.smoothness)},
                   {"component_L", comp_l},
                   {"constraints", meta_cons}};
  if (problem.slater) {
    j["slater_point"] = {{"point", io::vector(problem.slater->point)},
                         {"margin", io::number(problem.slater->margin)}};
  }
  if (reference) j["reference"] = io::reference_to_json(*reference);
  if (generator) j["generator"] = io::generator_to_json(*generator);
  return j;
}

inline Json export_instance(const ZooInstance& inst) {
  return export_problem(*inst.problem, inst.reference, inst.generator);
}

/// Builds a problem from the spec schema. Errors name the offending field.
inline ProblemSpec import_problem(const Json& j) {
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");
  const Json& version = io::member(j, "spec_version", "");
  if (!version.is_number_integer() || version.get<int>() != kSpecVersion) {
    throw ParseError("spec_version", "unsupported spec_version (expected 1)");
  }
  auto problem = std::make_shared<ConstrainedProblem>();
  problem->name = j.contains("name") ? io::get_string(j["name"], "name") : "";
  const Json& dim = io::member(j, "dimension", "");
  if (!dim.is_number_integer() || dim.get<std::int64_t>() < 1) {
    throw ParseError("dimension", "expected a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(dim.get<std::int64_t>());
  problem->dimension = n;

  const Json& meta = io::member(j, "metadata", "");
  problem->mu = io::get_double(io::member(meta, "mu", "metadata"), "metadata.mu");
  problem->smoothness =
      io::get_double(io::member(meta, "L_f", "metadata"), "metadata.L_f");
  if (!(problem->mu >= 0.0)) throw ParseError("metadata.mu", "must be >= 0");

  const Json& obj = io::member(j, "objective", "");
  const Json& comps = io::member(obj, "components", "objective");
  if (!comps.is_array() || comps.empty()) {
    throw ParseError("objective.components", "expected a non-empty array");
  }
  const Json* comp_l = meta.contains("component_L") ? &meta["component_L"] : nullptr;
  if (comp_l && (!comp_l->is_array() || comp_l->size() != comps.size())) {
    throw ParseError("metadata.component_L", "expected one value per component");
  }
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const std::string path = "objective.components[" + std::to_string(k) + "]";
    QuadraticForm f = io::form_from_json(comps[k], path, n);
    const double l =
        comp_l ? io::get_double((*comp_l)[k],
                                "metadata.component_L[" + std::to_string(k) + "]")
               : io::lambda_max(f.Q);
    problem->components.push_back(quadratic_component(std::move(f), l));
  }
  if (obj.contains("proximal")) {
    const Json& p = obj["proximal"];
    const std::string kind =
        io::get_string(io::member(p, "kind", "objective.proximal"),
                       "objective.proximal.kind");
    if (kind == "box") {
      problem->proximal = ProximalTerm::box(io::get_double(
          io::member(p, "radius", "objective.proximal"), "objective.proximal.radius"));
    } else if (kind != "none") {
      throw ParseError("objective.proximal.kind", "expected 'none' or 'box'");
    }
  }

  const Json& cons = io::member(j, "constraints", "");
  if (!cons.is_array()) throw ParseError("constraints", "expected an array");
  const Json* meta_cons = meta.contains("constraints") ? &meta["constraints"] : nullptr;
  if (meta_cons && (!meta_cons->is_array() || meta_cons->size() != cons.size())) {
    throw ParseError("metadata.constraints", "expected one entry per constraint");
  }
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string path = "constraints[" + std::to_string(i) + "]";
    const std::string mpath = "metadata.constraints[" + std::to_string(i) + "]";
    const Json& c = cons[i];
    const std::string type = io::get_string(io::member(c, "type", path), path + ".type");
    auto meta_value = [&](const char* key) -> std::optional<double> {
      if (!meta_cons) return std::nullopt;
      const Json& m = (*meta_cons)[i];
      if (!m.contains(key)) return std::nullopt;
      return io::get_double(m[key], mpath + "." + key);
    };
    auto required = [&](const char* key) {
      auto v = meta_value(key);
      if (!v) throw ParseError(mpath + "." + key, "missing field");
      return *v;
    };
    if (type == "linear") {
      const Vec a = io::get_vector(io::member(c, "a", path), path + ".a");
      if (a.size() != n) throw ParseError(path + ".a", "length differs from dimension");
      const double b = io::get_double(io::member(c, "b", path), path + ".b");
      Constraint con = linear_constraint(a, b);
      if (auto v = meta_value("L_a")) con.smoothness = *v;
      if (auto v = meta_value("C0")) con.growth_c0 = *v;
      if (auto v = meta_value("C1")) con.growth_c1 = *v;
      problem->constraints.push_back(std::move(con));
    } else if (type == "quadratic") {
      QuadraticForm f = io::form_from_json(c, path, n);
      const double l = meta_value("L_a").value_or(io::lambda_max(f.Q));
      problem->constraints.push_back(
          quadratic_constraint(std::move(f), l, required("C0"), required("C1")));
    } else if (type == "smoothed_max") {
      LogSumExpForm form;
      form.delta_prime =
          io::get_double(io::member(c, "delta_prime", path), path + ".delta_prime");
      if (!(form.delta_prime > 0.0)) {
        throw ParseError(path + ".delta_prime", "must be > 0");
      }
      const Json& pieces = io::member(c, "pieces", path);
      if (!pieces.is_array() || pieces.empty()) {
        throw ParseError(path + ".pieces", "expected a non-empty array");
      }
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        form.pieces.push_back(io::form_from_json(
            pieces[p], path + ".pieces[" + std::to_string(p) + "]", n));
      }
      problem->constraints.push_back(log_sum_exp_constraint(
          std::move(form), required("L_a"), required("C0"), required("C1")));
    } else {
      throw ParseError(path + ".type",
                       "expected 'linear', 'quadratic' or 'smoothed_max'");
    }
  }

  if (j.contains("slater_point")) {
    const Json& s = j["slater_point"];
    SlaterPoint sp;
    sp.point = io::get_vector(io::member(s, "point", "slater_point"), "slater_point.point");
    sp.margin =
        io::get_double(io::member(s, "margin", "slater_point"), "slater_point.margin");
    problem->slater = sp;
  }
  try {
    problem->validate();
  } catch (const Error& e) {
    throw ParseError("<problem>", e.what());
  }

  ProblemSpec spec;
  spec.problem = problem;
  if (j.contains("reference")) {
    spec.reference = io::reference_from_json(j["reference"], "reference");
    if (spec.reference->x_star.size() != n) {
      throw ParseError("reference.x_star", "length differs from dimension");
    }
  }
  if (j.contains("generator")) {
    spec.generator = io::generator_from_json(j["generator"], "generator");
  }
  return spec;
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("<document>", std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("<file>", "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ProblemSpec load_problem(const std::string& path) {
  return import_problem(parse_json_text(read_text_file(path)));
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

/// FNV-1a (64 bit) of the canonical JSON dump, as 16 hex digits.
inline std::string json_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string instance_hash(const ZooInstance& inst) {
  return json_hash(export_instance(inst));
}

}  // namespace softpen
