#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "softpen/softpen.hpp"

namespace softpen::test {

// SplitMix64 stream for property tests; every case derives from a fixed seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one value per call is enough here.
  double normal() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * uniform());
  }

  Vec normal_vec(Eigen::Index n, double scale = 1.0) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }

  Mat psd(Eigen::Index n, double ridge) {
    Mat B(n, n);
    for (Eigen::Index r = 0; r < n; ++r) B.row(r) = normal_vec(n).transpose();
    return B * B.transpose() / static_cast<double>(n) + ridge * Mat::Identity(n, n);
  }

 private:
  std::uint64_t state_;
};

inline double lambda_max(const Mat& Q) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

inline double lambda_min(const Mat& Q) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

// Least squares ½‖Ax − y‖²/rows split into `parts` components, plus linear
// constraints. Returns the problem with honest metadata.
inline std::shared_ptr<ConstrainedProblem> least_squares_problem(
    std::uint64_t seed, Eigen::Index n, std::size_t parts, std::size_t m,
    double ridge) {
  Gen gen(seed);
  auto p = std::make_shared<ConstrainedProblem>();
  p->name = "least_squares";
  p->dimension = n;
  Mat total = Mat::Zero(n, n);
  for (std::size_t k = 0; k < parts; ++k) {
    Mat A(3, n);
    for (Eigen::Index r = 0; r < 3; ++r) A.row(r) = gen.normal_vec(n).transpose();
    const Vec y = gen.normal_vec(3);
    QuadraticForm f;
    f.Q = A.transpose() * A + ridge * Mat::Identity(n, n);
    f.b = -A.transpose() * y;
    f.c = 0.5 * y.squaredNorm();
    total += f.Q;
    p->components.push_back(quadratic_component(f, lambda_max(f.Q)));
  }
  total /= static_cast<double>(parts);
  double lf = 0.0;
  for (const auto& c : p->components) lf = std::max(lf, c.smoothness);
  p->smoothness = lf;
  p->mu = lambda_min(total);
  for (std::size_t j = 0; j < m; ++j) {
    p->constraints.push_back(linear_constraint(gen.normal_vec(n), 0.5));
  }
  return p;
}

}  // namespace softpen::test
