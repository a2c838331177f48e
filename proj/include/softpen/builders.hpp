#pragma once

#include <memory>
#include <utility>

#include "softpen/model.hpp"

namespace softpen {

/// Objective component ½xᵀQx + bᵀx + c with declared smoothness.
inline SmoothComponent quadratic_component(QuadraticForm form,
                                           double smoothness) {
  form.validate("objective component");
  auto shared = std::make_shared<const QuadraticForm>(std::move(form));
  SmoothComponent f;
  f.value = [shared](const Vec& x) { return shared->value(x); };
  f.gradient = [shared](const Vec& x) { return shared->gradient(x); };
  f.smoothness = smoothness;
  f.form = *shared;
  return f;
}

inline Constraint quadratic_constraint(QuadraticForm form, double smoothness,
                                       double c0, double c1) {
  form.validate("constraint");
  auto shared = std::make_shared<const QuadraticForm>(std::move(form));
  Constraint a;
  a.value = [shared](const Vec& x) { return shared->value(x); };
  a.gradient = [shared](const Vec& x) { return shared->gradient(x); };
  a.smoothness = smoothness;
  a.growth_c0 = c0;
  a.growth_c1 = c1;
  a.form = *shared;
  return a;
}

/// aᵀx − b ≤ 0 with the exact growth constants (L_a, C0, C1) = (0, ‖a‖², 0).
inline Constraint linear_constraint(const Vec& a, double b) {
  QuadraticForm form;
  form.b = a;
  form.c = -b;
  return quadratic_constraint(std::move(form), 0.0, a.squaredNorm(), 0.0);
}

}  // namespace softpen
