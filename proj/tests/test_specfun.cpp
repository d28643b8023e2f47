#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "trap_lab/specfun.hpp"

using namespace trap_lab;
using specfun::airy_eval;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST(Airy, ValuesAtOrigin) {
  const auto q = airy_eval(0.0);
  // 3^(-2/3)/Gamma(2/3) and 3^(-1/6)/Gamma(2/3)
  const double g23 = std::tgamma(2.0 / 3.0);
  EXPECT_NEAR(q.ai, std::pow(3.0, -2.0 / 3.0) / g23, 1e-15);
  EXPECT_NEAR(q.bi, std::pow(3.0, -1.0 / 6.0) / g23, 1e-15);
  EXPECT_NEAR(q.ai, 0.3550280539, 1e-10);
  EXPECT_NEAR(q.bi, 0.6149266274, 1e-10);
}

TEST(Airy, MatchesReferenceAcrossAllRegions) {
  // Oscillatory values are compared against their envelope so zeros do not
  // inflate the relative error.
  for (double x = -150.0; x <= 100.0; x += 0.0173) {
    const auto q = airy_eval(x);
    const double env = x < 0 ? std::pow(-x, -0.25) / std::sqrt(std::numbers::pi) : 0;
    const double envp = x < 0 ? std::pow(-x, 0.25) / std::sqrt(std::numbers::pi) : 0;
    EXPECT_LE(std::fabs(q.ai - oracle::ai(x)), 1e-10 * std::max(std::fabs(oracle::ai(x)), env)) << x;
    EXPECT_LE(std::fabs(q.bi - oracle::bi(x)), 1e-10 * std::max(std::fabs(oracle::bi(x)), env)) << x;
    EXPECT_LE(std::fabs(q.ai_prime - oracle::ai_prime(x)), 1e-10 * std::max(std::fabs(oracle::ai_prime(x)), envp))
        << x;
    EXPECT_LE(std::fabs(q.bi_prime - oracle::bi_prime(x)), 1e-10 * std::max(std::fabs(oracle::bi_prime(x)), envp))
        << x;
  }
}

TEST(Airy, WronskianEverywhere) {
  for (double x = -200.0; x <= 100.0; x += 0.01) {
    const auto q = airy_eval(x);
    EXPECT_NEAR((q.ai * q.bi_prime - q.ai_prime * q.bi) * std::numbers::pi, 1.0, 1e-10) << x;
  }
}

TEST(Airy, FirstZeroToFiveDigits) { EXPECT_LT(std::fabs(airy_eval(-2.33811).ai), 1e-5); }

TEST(Airy, MonotoneDecayOnPositiveAxis) {
  EXPECT_GT(airy_eval(3).ai, airy_eval(4).ai);
  EXPECT_GT(airy_eval(4).ai, airy_eval(5).ai);
  EXPECT_GT(airy_eval(5).ai, 0.0);
  double prev = airy_eval(1.0).ai;
  for (double x = 1.01; x < 100; x += 0.01) {
    const double v = airy_eval(x).ai;
    ASSERT_LT(v, prev) << x;
    prev = v;
  }
}

TEST(Airy, OutOfRangeIsAnError) {
  EXPECT_THROW(airy_eval(150.0), numerical_error);  // Bi overflows
  EXPECT_THROW(airy_eval(-250.0), domain_error);
  EXPECT_THROW(airy_eval(std::nan("")), domain_error);
  EXPECT_NO_THROW(airy_eval(-200.0));
  EXPECT_NO_THROW(specfun::airy_ai(150.0));  // Ai alone stays representable
}

TEST(Airy, DifferentialEquationResidual) {
  // Central second differences at h and h/2, combined to cancel the O(h^2)
  // truncation term (~1e-6 at x = -10 for small h). h is kept at 1e-2 so
  // that 1e-14-level rounding in the function values is not amplified past
  // the tolerance by the 1/h^2 of the stencil.
  auto second = [](double x, double h) {
    return (specfun::airy_ai(x + h).value - 2 * specfun::airy_ai(x).value + specfun::airy_ai(x - h).value) /
           (h * h);
  };
  const double h = 1e-2;
  for (double x = -10.0; x <= 5.0; x += 0.01) {
    const double d2 = (4 * second(x, h / 2) - second(x, h)) / 3;
    EXPECT_NEAR(d2 - x * specfun::airy_ai(x).value, 0.0, 1e-8) << x;
  }
}

TEST(Airy, Zeros) {
  EXPECT_NEAR(specfun::airy_ai_zero(1), -2.338107, 1e-6);
  EXPECT_NEAR(specfun::airy_ai_zero(2), -4.087949, 1e-6);
  for (int n = 1; n <= 30; ++n) {
    const double z = specfun::airy_ai_zero(n);
    EXPECT_NEAR(z, oracle::ai_zero(n), 1e-10) << n;
    EXPECT_LE(std::fabs(airy_eval(z).ai), 1e-10) << n;
  }
  for (int n = 1; n <= 10; ++n) EXPECT_LT(specfun::airy_ai_zero(n + 1), specfun::airy_ai_zero(n));
}

TEST(Airy, NormalisationIntegral) {
  const double z0 = specfun::airy_ai_zero(1);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double integral =
      ts.integrate([&](double z) { double a = specfun::airy_ai(z + z0).value; return a * a; }, 0.0, 40.0);
  const double d = specfun::airy_ai(z0).derivative;
  EXPECT_NEAR(integral, d * d, 1e-8);
}

TEST(Bessel, Origin) {
  EXPECT_EQ(specfun::bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(specfun::bessel_j(1, 0.0), 0.0);
  EXPECT_EQ(specfun::bessel_j(2, 0.0), 0.0);
  EXPECT_EQ(specfun::bessel_j(3, 0.0), 0.0);
}

TEST(Bessel, MatchesReference) {
  for (int n = 0; n <= 10; ++n)
    for (double x = 0.0; x <= 120.0; x += 0.0371)
      EXPECT_NEAR(specfun::bessel_j(n, x), oracle::jn(n, x), 1e-12) << n << ' ' << x;
  // relative accuracy away from zeros
  for (int n = 0; n <= 10; ++n)
    for (double x = 1e-3; x <= 0.5; x *= 1.7)
      EXPECT_LT(rel(specfun::bessel_j(n, x), oracle::jn(n, x)), 1e-11) << n << ' ' << x;
}

TEST(Bessel, J2Bound) {
  double peak = 0;
  for (double x = 0; x <= 50; x += 1e-3) peak = std::max(peak, std::fabs(specfun::bessel_j(2, x)));
  EXPECT_LT(peak, 0.5);
}

TEST(Bessel, J1Maximum) {
  EXPECT_NEAR(specfun::bessel_j(1, 1.8412), 0.5819, 1e-4);
  double best = 0, at = 0;
  for (double x = 0; x <= 50; x += 1e-4) {
    const double v = specfun::bessel_j(1, x);
    if (v > best) best = v, at = x;
  }
  EXPECT_NEAR(at, 1.8412, 1e-3);
  EXPECT_NEAR(best, 0.5819, 1e-4);
}

TEST(Bessel, Recurrence) {
  for (int n = 1; n <= 5; ++n)
    for (double x = 0.1; x <= 50; x += 0.0537) {
      const double lhs = specfun::bessel_j(n - 1, x) + specfun::bessel_j(n + 1, x);
      const double rhs = 2.0 * n / x * specfun::bessel_j(n, x);
      EXPECT_LE(std::fabs(lhs - rhs), 1e-9 * std::max({std::fabs(lhs), std::fabs(rhs), 1e-3})) << n << ' ' << x;
    }
}

TEST(Bessel, Domain) {
  EXPECT_THROW(specfun::bessel_j(11, 1.0), domain_error);
  EXPECT_THROW(specfun::bessel_j(-1, 1.0), domain_error);
  EXPECT_THROW(specfun::bessel_j(1, -1.0), domain_error);
}
