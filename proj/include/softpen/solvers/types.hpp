#pragma once

#include <chrono>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "softpen/model.hpp"

namespace softpen {

/// What the first-order solvers need from an objective s(x) + ψ(x).
template <class T>
concept CompositeObjective = requires(const T& f, const Vec& x, std::size_t k) {
  { f.dimension() } -> std::convertible_to<Eigen::Index>;
  { f.smooth_value(x) } -> std::convertible_to<double>;
  { f.value(x) } -> std::convertible_to<double>;
  { f.smooth_gradient(x) } -> std::convertible_to<Vec>;
  { f.prox(x, 1.0) } -> std::convertible_to<Vec>;
  { f.smoothness() } -> std::convertible_to<double>;
  { f.strong_convexity() } -> std::convertible_to<double>;
};

/// Composite objective that also exposes its smooth part as an average of
/// components, as required by the stochastic solvers.
template <class T>
concept FiniteSumObjective =
    CompositeObjective<T> && requires(const T& f, const Vec& x, std::size_t k) {
      { f.num_components() } -> std::convertible_to<std::size_t>;
      { f.component_gradient(k, x) } -> std::convertible_to<Vec>;
      { f.component_smoothness(k) } -> std::convertible_to<double>;
    };

enum class MomentumMode { GeneralConvex, StronglyConvex };

enum class Termination { GapCertified, MaxIter, Stalled };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::GapCertified:
      return "gap_certified";
    case Termination::MaxIter:
      return "max_iter";
    case Termination::Stalled:
      return "stalled";
  }
  return "stalled";
}

inline Termination parse_termination(const std::string& s) {
  if (s == "gap_certified") return Termination::GapCertified;
  if (s == "max_iter") return Termination::MaxIter;
  if (s == "stalled") return Termination::Stalled;
  throw DomainError("unknown termination '" + s + "'");
}

inline std::string to_string(MomentumMode m) {
  return m == MomentumMode::GeneralConvex ? "general_convex" : "strongly_convex";
}

struct CatalystOptions {
  /// Proximal weight κ; 0 selects max(L/(ℓ+m) − μ, μ).
  double kappa = 0.0;
  std::size_t max_stages = 100000;
  /// Stage-1 tolerance scale ε₀; 0 selects (2/9) of the certified gap at x₀.
  double initial_tolerance = 0.0;
  /// Per-stage tolerance decay ρ; 0 selects 0.9·√(μ/(μ+κ)).
  double decay = 0.0;
  std::size_t max_inner_epochs = 10000;
};

struct SolverConfig {
  std::size_t max_iterations = 1000000;
  double target_gap = 1e-8;
  /// Step rule 1/L; 0 means "use the objective's declared smoothness".
  double smoothness = 0.0;
  MomentumMode momentum = MomentumMode::StronglyConvex;
  /// Strong-convexity modulus used by the strongly convex paths; 0 means
  /// "use the objective's declared μ".
  double mu = 0.0;
  std::uint64_t seed = 0;
  /// SVRG inner steps per epoch; 0 means 2·(ℓ+m).
  std::size_t epoch_length = 0;
  CatalystOptions catalyst;
  std::optional<Vec> x0;
  bool record_trace = true;
  /// Called by SVRG at every snapshot with (snapshot point, full gradient).
  std::function<void(const Vec&, const Vec&)> epoch_observer;

  void validate() const {
    if (!(target_gap > 0.0)) throw DomainError("target_gap must be > 0");
    if (max_iterations == 0) throw DomainError("max_iterations must be >= 1");
  }
};

struct OracleCalls {
  std::uint64_t full_gradients = 0;
  std::uint64_t component_gradients = 0;
  std::uint64_t prox_calls = 0;
  std::uint64_t function_values = 0;

  OracleCalls& operator+=(const OracleCalls& o) {
    full_gradients += o.full_gradients;
    component_gradients += o.component_gradients;
    prox_calls += o.prox_calls;
    function_values += o.function_values;
    return *this;
  }
  bool operator==(const OracleCalls&) const = default;
};

struct TraceRow {
  std::size_t iteration = 0;
  std::uint64_t component_gradients_cum = 0;
  double objective = 0.0;
  double gradmap_norm = 0.0;
  double elapsed_seconds = 0.0;
};

struct SolverReport {
  std::string solver;
  Vec final_point;
  double final_objective = std::numeric_limits<double>::quiet_NaN();
  std::size_t iterations_used = 0;
  OracleCalls oracle_calls;
  Termination termination = Termination::MaxIter;
  /// Upper bound on F(final_point) − F* implied by the last certificate check.
  double certified_gap = std::numeric_limits<double>::infinity();
  /// ‖G_L‖ at the point where the certificate was evaluated.
  double gradmap_norm = std::numeric_limits<double>::infinity();
  double step_smoothness = 0.0;
  std::size_t restarts = 0;
  std::size_t stages = 0;
  std::string diagnostic;
  std::string caveat;
  std::vector<TraceRow> trace;

  bool certified() const { return termination == Termination::GapCertified; }
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

/// Gradient-map certificate for μ > 0. With x⁺ = prox(x − ∇s(x)/L) and
/// G = L(x − x⁺): F(x⁺) − F* ≤ ‖G‖²·max((1 + L/μ)/(2μ), 2/μ).
inline double strongly_convex_gap_bound(double gradmap_norm, double L,
                                        double mu) {
  const double factor = std::max((1.0 + L / mu) / (2.0 * mu), 2.0 / mu);
  return gradmap_norm * gradmap_norm * factor;
}

}  // namespace detail

}  // namespace softpen
