#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "softpen/model.hpp"

namespace softpen {

/// Enough to regenerate an instance: family name, seed and parameters.
struct GeneratorRecord {
  std::string family;
  std::uint64_t seed = 0;
  std::map<std::string, double> parameters;
};

/// A generated problem with its known optimum. `exact_penalized_solution`,
/// when set, maps (ξ, δ) to the exact minimizer of F_{ξ,δ}.
struct ZooInstance {
  std::shared_ptr<const ConstrainedProblem> problem;
  ReferenceSolution reference;
  GeneratorRecord generator;
  std::function<Vec(double, double)> exact_penalized_solution;

  /// ξ̄ = ‖λ*‖∞ (the multipliers of every zoo family are unique).
  double xi_bar() const {
    return reference.multipliers && reference.multipliers->size() > 0
               ? reference.multipliers->cwiseAbs().maxCoeff()
               : 0.0;
  }
};

}  // namespace softpen
