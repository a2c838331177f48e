#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>

#include "softpen/model.hpp"
#include "softpen/softplus.hpp"

namespace softpen {

enum class DeltaProvenance { Manual, ScheduleConvex, ScheduleStronglyConvex };

inline std::string to_string(DeltaProvenance p) {
  switch (p) {
    case DeltaProvenance::Manual:
      return "manual";
    case DeltaProvenance::ScheduleConvex:
      return "schedule_convex";
    case DeltaProvenance::ScheduleStronglyConvex:
      return "schedule_strongly_convex";
  }
  return "manual";
}

inline DeltaProvenance parse_delta_provenance(const std::string& s) {
  if (s == "manual") return DeltaProvenance::Manual;
  if (s == "schedule_convex") return DeltaProvenance::ScheduleConvex;
  if (s == "schedule_strongly_convex") {
    return DeltaProvenance::ScheduleStronglyConvex;
  }
  throw DomainError("unknown delta provenance '" + s + "'");
}

/// Penalty weight ξ and softplus smoothing δ. δ = 0 is only usable for
/// evaluation; anything that needs a gradient rejects it.
struct PenaltyConfig {
  double xi = 0.0;
  double delta = 0.0;
  DeltaProvenance provenance = DeltaProvenance::Manual;

  void validate() const {
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
      throw DomainError("penalty weight xi must be finite and >= 0");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
      throw DomainError("smoothing delta must be finite and >= 0");
    }
  }
};

/// L_f + ξ·Σᵢ (L_{a,i} + C1ᵢ/4 + C0ᵢ/(4δ)).
inline double penalty_smoothness_bound(const ConstrainedProblem& problem,
                                       const PenaltyConfig& config) {
  config.validate();
  if (!(config.delta > 0.0)) {
    throw DomainError("penalty smoothness bound requires delta > 0");
  }
  double sum = 0.0;
  for (const auto& c : problem.constraints) {
    sum += c.smoothness + c.growth_c1 / 4.0 + c.growth_c0 / (4.0 * config.delta);
  }
  return problem.smoothness + config.xi * sum;
}

/**
 * F_{ξ,δ}(x) = F(x) + ξ Σ p_δ(aᵢ(x)) as a composite oracle: a smooth part
 * (1/ℓ)Σfᵢ + ξΣp_δ∘aᵢ and the problem's proximal term.
 *
 * The smooth part is also exposed as ℓ + m components whose average is the
 * smooth part: ((ℓ+m)/ℓ)·fᵢ for i < ℓ and (ℓ+m)·ξ·p_δ∘aⱼ for the constraints.
 */
class PenalizedOracle {
 public:
  PenalizedOracle(std::shared_ptr<const ConstrainedProblem> problem,
                  PenaltyConfig config)
      : problem_(std::move(problem)), config_(config) {
    if (!problem_) throw DomainError("penalized oracle needs a problem");
    config_.validate();
    if (config_.delta > 0.0) {
      smoothness_ = penalty_smoothness_bound(*problem_, config_);
    }
  }

  const ConstrainedProblem& problem() const { return *problem_; }
  const std::shared_ptr<const ConstrainedProblem>& problem_ptr() const {
    return problem_;
  }
  const PenaltyConfig& config() const { return config_; }
  Eigen::Index dimension() const { return problem_->dimension; }
  double strong_convexity() const { return problem_->mu; }
  const ProximalTerm& proximal() const { return problem_->proximal; }

  /// Declared Lipschitz constant of the smooth part's gradient; zero at δ = 0.
  double smoothness() const { return smoothness_; }

  double smooth_value(const Vec& x) const {
    problem_->check_dimension(x);
    double f = 0.0;
    for (const auto& c : problem_->components) f += c.value(x);
    f /= static_cast<double>(problem_->components.size());
    double pen = 0.0;
    if (config_.xi != 0.0) {
      for (const auto& a : problem_->constraints) {
        pen += softplus(config_.delta, a.value(x));
      }
    }
    return f + config_.xi * pen;
  }

  double value(const Vec& x) const {
    return smooth_value(x) + problem_->proximal.value(x);
  }

  Vec smooth_gradient(const Vec& x) const {
    require_smooth();
    Vec g = eval_smooth_objective_gradient(*problem_, x);
    if (config_.xi != 0.0) {
      for (const auto& a : problem_->constraints) {
        const double w = softplus_deriv(config_.delta, a.value(x));
        if (w != 0.0) g += (config_.xi * w) * a.gradient(x);
      }
    }
    return g;
  }

  Vec prox(const Vec& x, double tau) const {
    return problem_->proximal.prox(x, tau);
  }

  std::size_t num_components() const {
    return problem_->components.size() + problem_->constraints.size();
  }

  double component_value(std::size_t k, const Vec& x) const {
    const double n = static_cast<double>(num_components());
    const std::size_t l = problem_->components.size();
    if (k < l) {
      return n / static_cast<double>(l) * problem_->components[k].value(x);
    }
    return n * config_.xi *
           softplus(config_.delta, problem_->constraints.at(k - l).value(x));
  }

  Vec component_gradient(std::size_t k, const Vec& x) const {
    require_smooth();
    const double n = static_cast<double>(num_components());
    const std::size_t l = problem_->components.size();
    if (k < l) {
      return (n / static_cast<double>(l)) * problem_->components[k].gradient(x);
    }
    const auto& a = problem_->constraints.at(k - l);
    const double w = softplus_deriv(config_.delta, a.value(x));
    if (w == 0.0 || config_.xi == 0.0) return Vec::Zero(dimension());
    return (n * config_.xi * w) * a.gradient(x);
  }

  double component_smoothness(std::size_t k) const {
    require_smooth();
    const double n = static_cast<double>(num_components());
    const std::size_t l = problem_->components.size();
    if (k < l) return n * problem_->smoothness / static_cast<double>(l);
    const auto& a = problem_->constraints.at(k - l);
    return n * config_.xi *
           (a.smoothness + a.growth_c1 / 4.0 +
            a.growth_c0 / (4.0 * config_.delta));
  }

  /// The smooth part packaged as a single component.
  SmoothComponent smooth_part() const {
    SmoothComponent s;
    auto self = *this;
    s.value = [self](const Vec& x) { return self.smooth_value(x); };
    s.gradient = [self](const Vec& x) { return self.smooth_gradient(x); };
    s.smoothness = smoothness_;
    return s;
  }

 private:
  void require_smooth() const {
    if (!(config_.delta > 0.0)) {
      throw DomainError(
          "penalized gradient requested at delta = 0 (non-smooth penalty)");
    }
  }

  std::shared_ptr<const ConstrainedProblem> problem_;
  PenaltyConfig config_;
  double smoothness_ = 0.0;
};

inline double penalized_value(const PenalizedOracle& oracle, const Vec& x) {
  return oracle.value(x);
}

inline Vec penalized_gradient(const PenalizedOracle& oracle, const Vec& x) {
  return oracle.smooth_gradient(x);
}

/// λ̂ᵢ = ξ·σ(aᵢ(x)/δ) ∈ [0, ξ].
inline Vec multiplier_estimates(const PenalizedOracle& oracle, const Vec& x) {
  if (!(oracle.config().delta > 0.0)) {
    throw DomainError("multiplier estimates require delta > 0");
  }
  const Vec a = eval_constraints(oracle.problem(), x);
  Vec lambda(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    lambda[i] = oracle.config().xi * softplus_deriv(oracle.config().delta, a[i]);
  }
  return lambda;
}

}  // namespace softpen
