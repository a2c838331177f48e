#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "softpen/model.hpp"

namespace softpen {

/// Central differences with step h = 1e-6·(1 + ‖x‖∞).
inline Vec central_difference_gradient(const ValueFn& f, const Vec& x) {
  const double h = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff());
  Vec g(x.size());
  Vec xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = f(xp);
    xp[i] = xi - h;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// ‖g − g_fd‖₂ / max(1, ‖g‖₂).
inline double gradient_relative_error(const Vec& analytic, const Vec& numeric) {
  return (analytic - numeric).norm() / std::max(1.0, analytic.norm());
}

struct GradientCheck {
  double worst_error = 0.0;
  std::size_t worst_point = 0;
  std::size_t points = 0;

  bool passed(double tolerance = 1e-5) const { return worst_error <= tolerance; }
};

inline GradientCheck check_gradient(const ValueFn& value,
                                    const GradientFn& gradient,
                                    const std::vector<Vec>& points) {
  GradientCheck result;
  result.points = points.size();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double err = gradient_relative_error(
        gradient(points[k]), central_difference_gradient(value, points[k]));
    if (k == 0 || err > result.worst_error) {
      result.worst_error = err;
      result.worst_point = k;
    }
  }
  return result;
}

/// `count` Gaussian points center + scale·N(0, I), drawn from a seeded engine.
inline std::vector<Vec> sample_points(std::uint64_t seed, const Vec& center,
                                      double scale, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Vec p(center.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = center[i] + scale * normal(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace softpen
