#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "softpen/errors.hpp"
#include "softpen/forms.hpp"

namespace softpen {

using ValueFn = std::function<double(const Vec&)>;
using GradientFn = std::function<Vec(const Vec&)>;
using ProxFn = std::function<Vec(const Vec&, double)>;

/// One smooth summand fᵢ of the objective, with the Lipschitz constant of its
/// gradient in the 2-norm.
struct SmoothComponent {
  ValueFn value;
  GradientFn gradient;
  double smoothness = 0.0;
  FormDescriptor form;
};

/**
 * Closed convex term ψ handled through its proximal map
 * prox(x, τ) = argminᵤ ψ(u) + ‖u − x‖²/(2τ).
 *
 * Two built-in kinds are serializable: "none" (ψ ≡ 0) and "box"
 * (indicator of ‖x‖∞ ≤ radius). Anything else is a custom closure.
 */
class ProximalTerm {
 public:
  static ProximalTerm zero() {
    ProximalTerm p;
    p.kind_ = "none";
    return p;
  }

  static ProximalTerm box(double radius) {
    if (!(radius > 0.0)) {
      throw DomainError("box radius must be positive");
    }
    ProximalTerm p;
    p.kind_ = "box";
    p.radius_ = radius;
    p.value_ = [radius](const Vec& x) {
      return x.cwiseAbs().maxCoeff() <= radius
                 ? 0.0
                 : std::numeric_limits<double>::infinity();
    };
    p.prox_ = [radius](const Vec& x, double) {
      return Vec(x.cwiseMax(-radius).cwiseMin(radius));
    };
    return p;
  }

  static ProximalTerm custom(std::string name, ValueFn value, ProxFn prox) {
    ProximalTerm p;
    p.kind_ = std::move(name);
    p.value_ = std::move(value);
    p.prox_ = std::move(prox);
    return p;
  }

  double value(const Vec& x) const { return value_ ? value_(x) : 0.0; }

  Vec prox(const Vec& x, double tau) const {
    if (!(tau > 0.0)) {
      throw DomainError("prox step must be positive");
    }
    return prox_ ? prox_(x, tau) : x;
  }

  bool is_zero() const { return kind_ == "none"; }
  const std::string& kind() const { return kind_; }
  double radius() const { return radius_; }

 private:
  std::string kind_ = "none";
  double radius_ = 0.0;
  ValueFn value_;
  ProxFn prox_;
};

/// Smooth convex constraint a(x) ≤ 0 with smoothness L_a and growth constants
/// satisfying ‖∇a(x)‖² ≤ C0 + C1·|a(x)|.
struct Constraint {
  ValueFn value;
  GradientFn gradient;
  double smoothness = 0.0;
  double growth_c0 = 1.0;
  double growth_c1 = 0.0;
  FormDescriptor form;
};

struct SlaterPoint {
  Vec point;
  double margin = 0.0;
};

/**
 * min (1/ℓ)Σ fᵢ(x) + ψ(x)  s.t.  aⱼ(x) ≤ 0, j = 1..m.
 *
 * Metadata (μ, L_f, per-constraint constants) is supplied by whoever builds the
 * problem; nothing here estimates it. Immutable once validated.
 */
struct ConstrainedProblem {
  Eigen::Index dimension = 0;
  std::vector<SmoothComponent> components;
  ProximalTerm proximal = ProximalTerm::zero();
  std::vector<Constraint> constraints;
  double mu = 0.0;
  double smoothness = 0.0;  // L_f
  std::optional<SlaterPoint> slater;
  std::string name;

  std::size_t num_components() const { return components.size(); }
  std::size_t num_constraints() const { return constraints.size(); }

  double max_c0() const {
    double v = 0.0;
    for (const auto& c : constraints) v = std::max(v, c.growth_c0);
    return v;
  }
  double max_c1() const {
    double v = 0.0;
    for (const auto& c : constraints) v = std::max(v, c.growth_c1);
    return v;
  }

  void check_dimension(const Vec& x) const {
    if (x.size() != dimension) {
      throw DimensionError("point has dimension " + std::to_string(x.size()) +
                           ", problem has " + std::to_string(dimension));
    }
  }

  /// Structural validation plus the Slater margin check.
  void validate() const {
    if (dimension < 1) throw DimensionError("problem dimension must be >= 1");
    if (components.empty()) {
      throw DomainError("problem needs at least one objective component");
    }
    if (constraints.empty()) {
      throw DomainError("problem needs at least one constraint");
    }
    if (!(mu >= 0.0) || !(smoothness >= 0.0)) {
      throw DomainError("mu and L_f must be nonnegative");
    }
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (!components[i].value || !components[i].gradient) {
        throw DomainError("component " + std::to_string(i) + " lacks an oracle");
      }
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const auto& c = constraints[i];
      if (!c.value || !c.gradient) {
        throw DomainError("constraint " + std::to_string(i) + " lacks an oracle");
      }
      if (!(c.growth_c0 > 0.0) || !(c.growth_c1 >= 0.0) ||
          !(c.smoothness >= 0.0)) {
        throw DomainError("constraint " + std::to_string(i) +
                          ": need C0 > 0, C1 >= 0, L_a >= 0");
      }
    }
    if (slater) {
      check_dimension(slater->point);
      if (!(slater->margin > 0.0)) {
        throw DomainError("Slater margin must be positive");
      }
      for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].value(slater->point) > -slater->margin) {
          throw DomainError("Slater point violates margin on constraint " +
                            std::to_string(i));
        }
      }
    }
  }
};

/// Known optimum of an instance.
struct ReferenceSolution {
  Vec x_star;
  double f_star = 0.0;
  std::optional<Vec> multipliers;
  std::optional<std::vector<std::size_t>> active_set;
};

enum class QNorm { L1, L2, Inf };

inline QNorm parse_qnorm(const std::string& s) {
  if (s == "1") return QNorm::L1;
  if (s == "2") return QNorm::L2;
  if (s == "inf" || s == "Inf" || s == "INF" || s == "oo") return QNorm::Inf;
  throw DomainError("unsupported violation norm q=" + s +
                    " (expected 1, 2 or inf)");
}

inline std::string to_string(QNorm q) {
  switch (q) {
    case QNorm::L1:
      return "1";
    case QNorm::L2:
      return "2";
    case QNorm::Inf:
      return "inf";
  }
  return "?";
}

/// F(x) = (1/ℓ)Σ fᵢ(x) + ψ(x). May return +∞ outside dom ψ.
inline double eval_objective(const ConstrainedProblem& problem, const Vec& x) {
  problem.check_dimension(x);
  double sum = 0.0;
  for (const auto& f : problem.components) sum += f.value(x);
  return sum / static_cast<double>(problem.components.size()) +
         problem.proximal.value(x);
}

/// (1/ℓ)Σ∇fᵢ(x), the gradient of the smooth part of F.
inline Vec eval_smooth_objective_gradient(const ConstrainedProblem& problem,
                                          const Vec& x) {
  problem.check_dimension(x);
  Vec g = Vec::Zero(problem.dimension);
  for (const auto& f : problem.components) g += f.gradient(x);
  return g / static_cast<double>(problem.components.size());
}

/// A(x) in declaration order.
inline Vec eval_constraints(const ConstrainedProblem& problem, const Vec& x) {
  problem.check_dimension(x);
  Vec a(static_cast<Eigen::Index>(problem.constraints.size()));
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    a[static_cast<Eigen::Index>(i)] = problem.constraints[i].value(x);
  }
  return a;
}

/// ‖max(0, A)‖_q for an already evaluated constraint vector.
inline double violation_norm(const Vec& constraint_values, QNorm q) {
  const Vec pos = constraint_values.cwiseMax(0.0);
  switch (q) {
    case QNorm::L1:
      return pos.sum();
    case QNorm::L2:
      return pos.norm();
    case QNorm::Inf:
      return pos.size() == 0 ? 0.0 : pos.maxCoeff();
  }
  throw DomainError("unsupported violation norm");
}

inline double violation_norm(const ConstrainedProblem& problem, const Vec& x,
                             QNorm q) {
  return violation_norm(eval_constraints(problem, x), q);
}

struct GrowthAudit {
  double max_ratio = 0.0;
  std::vector<std::size_t> violating_points;
};

/// max over samples of ‖∇a(x)‖²/(C0 + C1|a(x)|); samples with ratio > 1 are
/// flagged.
inline GrowthAudit audit_growth_condition(const Constraint& constraint,
                                          std::span<const Vec> samples) {
  if (samples.empty()) {
    throw DomainError("growth audit needs at least one sample point");
  }
  GrowthAudit audit;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double a = constraint.value(samples[k]);
    const double g2 = constraint.gradient(samples[k]).squaredNorm();
    const double ratio =
        g2 / (constraint.growth_c0 + constraint.growth_c1 * std::abs(a));
    audit.max_ratio = std::max(audit.max_ratio, ratio);
    if (ratio > 1.0) audit.violating_points.push_back(k);
  }
  return audit;
}

/// ‖(1/ℓ)Σ∇fᵢ(x*) + Σλᵢ∇aᵢ(x*)‖₂. Meaningful when F is smooth at x*.
inline double kkt_residual(const ConstrainedProblem& problem,
                           const ReferenceSolution& ref) {
  Vec r = eval_smooth_objective_gradient(problem, ref.x_star);
  if (ref.multipliers) {
    const Vec& lambda = *ref.multipliers;
    if (lambda.size() != static_cast<Eigen::Index>(problem.num_constraints())) {
      throw DimensionError("multiplier vector has wrong length");
    }
    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
      const double l = lambda[static_cast<Eigen::Index>(i)];
      if (l != 0.0) r += l * problem.constraints[i].gradient(ref.x_star);
    }
  }
  return r.norm();
}

/// max over i with λᵢ > 0 of |aᵢ(x*)|, zero when no multipliers are known.
inline double complementarity_violation(const ConstrainedProblem& problem,
                                        const ReferenceSolution& ref) {
  if (!ref.multipliers) return 0.0;
  const Vec a = eval_constraints(problem, ref.x_star);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if ((*ref.multipliers)[i] > 0.0) worst = std::max(worst, std::abs(a[i]));
  }
  return worst;
}

}  // namespace softpen
