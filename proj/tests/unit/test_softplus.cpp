#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace softpen {
namespace {

using test::Gen;

TEST(Softplus, ValueAtZeroIsDeltaLog2) {
  EXPECT_DOUBLE_EQ(softplus(1.0, 0.0), 0.6931471805599453);
  EXPECT_DOUBLE_EQ(softplus(0.25, 0.0), 0.25 * kLog2);
}

TEST(Softplus, HingeAtZeroDelta) {
  EXPECT_EQ(softplus(0.0, -3.0), 0.0);
  EXPECT_EQ(softplus(0.0, 3.0), 3.0);
}

TEST(Softplus, LargeArgumentIsExact) {
  EXPECT_EQ(softplus(1e-3, 700.0), 700.0);
  EXPECT_EQ(softplus(1e-3, -700.0), 0.0);
  EXPECT_TRUE(std::isfinite(softplus(1e-300, 1e300)));
}

TEST(Softplus, NegativeDeltaRejected) {
  EXPECT_THROW(softplus(-1.0, 0.0), DomainError);
  EXPECT_THROW(softplus_deriv(-1.0, 0.0), DomainError);
  EXPECT_THROW(softplus_second_deriv(0.0, 0.0), DomainError);
}

TEST(SoftplusDeriv, Values) {
  EXPECT_EQ(softplus_deriv(1.0, 0.0), 0.5);
  EXPECT_EQ(softplus_deriv(0.1, -100.0), 0.0);
  EXPECT_EQ(softplus_deriv(0.0, -1.0), 0.0);
  EXPECT_EQ(softplus_deriv(0.0, 0.0), 0.5);
  EXPECT_EQ(softplus_deriv(0.0, 2.0), 1.0);
}

TEST(SoftplusDeriv, MatchesFiniteDifference) {
  const double h = 1e-6;
  const double fd = (softplus(0.3, 0.7 + h) - softplus(0.3, 0.7 - h)) / (2 * h);
  EXPECT_NEAR(softplus_deriv(0.3, 0.7), fd, 1e-8 * std::abs(fd));
}

TEST(SoftplusSecondDeriv, Values) {
  EXPECT_DOUBLE_EQ(softplus_second_deriv(0.5, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(softplus_second_deriv(0.2, 1.3), softplus_second_deriv(0.2, -1.3));
  const double h = 1e-6;
  const double fd =
      (softplus_deriv(0.4, -0.9 + h) - softplus_deriv(0.4, -0.9 - h)) / (2 * h);
  EXPECT_NEAR(softplus_second_deriv(0.4, -0.9), fd, 1e-6 * std::abs(fd));
}

TEST(SoftplusProperties, UniformApproximation) {
  Gen gen(21);
  for (int k = 0; k < 20000; ++k) {
    const double delta = std::pow(10.0, gen.uniform(-6, 1));
    const double t = gen.uniform(-5, 5) * std::pow(10.0, gen.uniform(-6, 2));
    const double gap = softplus(delta, t) - std::max(0.0, t);
    ASSERT_GE(gap, 0.0) << delta << ' ' << t;
    ASSERT_LE(gap, delta * kLog2 * (1 + 1e-15) + 1e-15 * std::abs(t)) << delta << ' ' << t;
  }
}

TEST(SoftplusProperties, MonotoneInDelta) {
  Gen gen(22);
  for (int k = 0; k < 5000; ++k) {
    const double d1 = gen.uniform(0.0, 2.0);
    const double d2 = d1 + gen.uniform(0.0, 2.0);
    const double t = gen.uniform(-10, 10);
    ASSERT_LE(softplus(d1, t), softplus(d2, t) + 1e-15 * (1 + std::abs(t)));
  }
}

TEST(SoftplusProperties, MonotoneAndConvexInT) {
  for (double delta : {1e-3, 0.1, 1.0}) {
    const double h = 1e-2;
    for (double t = -3.0; t < 3.0; t += h) {
      const double a = softplus(delta, t - h);
      const double b = softplus(delta, t);
      const double c = softplus(delta, t + h);
      EXPECT_LE(a, b);
      EXPECT_GE(a - 2 * b + c, -1e-12);
    }
  }
}

TEST(SoftplusProperties, DerivativeStaysInUnitInterval) {
  Gen gen(23);
  for (int k = 0; k < 20000; ++k) {
    const double delta = std::pow(10.0, gen.uniform(-8, 0));
    const double u = gen.uniform(-1e8, 1e8);
    const double t = u * delta;
    const double d = softplus_deriv(delta, t);
    ASSERT_TRUE(std::isfinite(d));
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, 1.0);
    const double s = softplus_second_deriv(delta, t);
    ASSERT_TRUE(std::isfinite(s));
    ASSERT_LE(s, 0.25 / delta * (1 + 1e-15));
  }
}

}  // namespace
}  // namespace softpen
