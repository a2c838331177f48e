#pragma once

#include <algorithm>
#include <cmath>

#include "softpen/errors.hpp"

namespace softpen {

inline constexpr double kLog2 = 0.69314718055994530942;

/**
 * Softplus penalty p_δ(t) = δ·log(1 + exp(t/δ)), with p₀(t) = max(0, t).
 *
 * Evaluated on two branches split at t = 0 so exp never overflows:
 *   t ≤ 0:  δ·log1p(exp(t/δ))
 *   t > 0:  t + δ·log1p(exp(−t/δ))
 */
inline double softplus(double delta, double t) {
  if (delta < 0.0) throw DomainError("softplus: delta must be >= 0");
  if (delta == 0.0) return std::max(0.0, t);
  if (t <= 0.0) return delta * std::log1p(std::exp(t / delta));
  return t + delta * std::log1p(std::exp(-t / delta));
}

/// p'_δ(t) = σ(t/δ). At δ = 0 returns the hinge subgradient with 0.5 at t = 0.
inline double softplus_deriv(double delta, double t) {
  if (delta < 0.0) throw DomainError("softplus_deriv: delta must be >= 0");
  if (delta == 0.0) {
    if (t < 0.0) return 0.0;
    if (t > 0.0) return 1.0;
    return 0.5;
  }
  if (t <= 0.0) {
    const double e = std::exp(t / delta);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(-t / delta));
}

/// p''_δ(t) = σ(u)(1 − σ(u))/δ with u = t/δ; lies in [0, 1/(4δ)].
inline double softplus_second_deriv(double delta, double t) {
  if (!(delta > 0.0)) {
    throw DomainError("softplus_second_deriv: delta must be > 0");
  }
  // σ(u)(1 − σ(u)) = e/(1+e)² with e = exp(−|u|), symmetric in u.
  const double e = std::exp(-std::abs(t) / delta);
  const double s = 1.0 + e;
  return e / (s * s) / delta;
}

}  // namespace softpen
