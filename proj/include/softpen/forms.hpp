#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "softpen/errors.hpp"

namespace softpen {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/**
 * Dense quadratic q(x) = ½xᵀQx + bᵀx + c.
 *
 * An empty Q (0×0) denotes the affine case. Q must be symmetric; the gradient
 * is Qx + b.
 *
 * `gradient_offset`, when non-empty, is added to the reported gradient only.
 * It exists so test fixtures can build an oracle whose gradient disagrees with
 * its value.
 */
struct QuadraticForm {
  Mat Q;
  Vec b;
  double c = 0.0;
  Vec gradient_offset;

  Eigen::Index dimension() const { return b.size(); }
  bool is_affine() const { return Q.size() == 0; }

  double value(const Vec& x) const {
    double v = b.dot(x) + c;
    if (!is_affine()) {
      v += 0.5 * x.dot(Q * x);
    }
    return v;
  }

  Vec gradient(const Vec& x) const {
    Vec g = b;
    if (!is_affine()) {
      g.noalias() += Q * x;
    }
    if (gradient_offset.size() != 0) {
      g += gradient_offset;
    }
    return g;
  }

  /// Throws DimensionError/DomainError if the form is not a valid dense
  /// symmetric quadratic in `b.size()` variables.
  void validate(const std::string& what = "quadratic form") const {
    const auto n = b.size();
    if (n == 0) {
      throw DimensionError(what + ": linear term must be non-empty");
    }
    if (!is_affine()) {
      if (Q.rows() != n || Q.cols() != n) {
        throw DimensionError(what + ": Q must be " + std::to_string(n) + "x" +
                             std::to_string(n));
      }
      const double scale = 1.0 + Q.cwiseAbs().maxCoeff();
      if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw DomainError(what + ": Q must be symmetric");
      }
    }
    if (gradient_offset.size() != 0 && gradient_offset.size() != n) {
      throw DimensionError(what + ": gradient_offset has wrong length");
    }
    if (!std::isfinite(c) || !b.allFinite() ||
        (!is_affine() && !Q.allFinite())) {
      throw DomainError(what + ": non-finite coefficient");
    }
  }
};

/// Log-sum-exp smoothing δ'·log Σⱼ exp(gⱼ/δ') of a finite max of quadratics.
struct LogSumExpForm {
  std::vector<QuadraticForm> pieces;
  double delta_prime = 0.0;
};

/// Data description of an oracle, when one exists. Closures built from
/// arbitrary code carry `std::monostate` and cannot be exported.
using FormDescriptor = std::variant<std::monostate, QuadraticForm, LogSumExpForm>;

}  // namespace softpen
