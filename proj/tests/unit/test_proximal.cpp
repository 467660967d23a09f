#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "thermoadh/proximal.hpp"

using namespace thermoadh::prox;

namespace {

// Newton on exp(z) + mu z = s in the log variable, independent of the library.
double ref_resolvent(double mu, double s) {
  double z = s >= 1.0 ? std::log(s) : std::min(0.0, s / mu);
  for (int i = 0; i < 100; ++i) z -= (std::exp(z) + mu * z - s) / (std::exp(z) + mu);
  return std::exp(z);
}

}  // namespace

TEST(Resolvent, FixedPointOfOne) {
  EXPECT_DOUBLE_EQ(resolvent_ln(YosidaParam(0.5), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(resolvent_ln(YosidaParam(7.0), 1.0), 1.0);
}

TEST(Resolvent, ForwardEvaluatedAtE) {
  const double e = std::numbers::e;
  EXPECT_NEAR(resolvent_ln(YosidaParam(1.0), e + 1.0), e, 1e-14);
}

TEST(Resolvent, OmegaConstantAtZero) {
  // Root of y + ln y = 0 by bisection.
  double lo = 0.1, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (m + std::log(m) > 0.0 ? hi : lo) = m;
  }
  EXPECT_NEAR(resolvent_ln(YosidaParam(1.0), 0.0), lo, 1e-15);
  EXPECT_NEAR(lo, 0.567143290, 1e-9);
}

TEST(Resolvent, StaysPositiveDeepInTheNegativeRange) {
  const auto e = ln_mu_eval(YosidaParam(1e-4), -50.0);
  EXPECT_GT(e.r, 0.0);
  EXPECT_TRUE(std::isfinite(e.ln));
  EXPECT_NEAR(e.r + 1e-4 * e.ln, -50.0, 1e-12 * 50.0);
}

TEST(YosidaLn, Values) {
  EXPECT_EQ(yosida_ln(YosidaParam(0.3), 1.0), 0.0);
  EXPECT_NEAR(yosida_ln(YosidaParam(1.0), std::numbers::e + 1.0), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(yosida_ln_deriv(YosidaParam(1.0), 1.0), 0.5);
}

TEST(YosidaLn, LipschitzAndMonotoneOnRandomPairs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(-20.0, 20.0), lm(std::log(1e-3), std::log(5.0));
  for (int i = 0; i < 2000; ++i) {
    const YosidaParam p(std::exp(lm(rng)));
    const double a = x(rng), b = x(rng);
    const double la = yosida_ln(p, a), lb = yosida_ln(p, b);
    EXPECT_LE(std::abs(la - lb), std::abs(a - b) / p.mu() * (1 + 1e-12) + 1e-12);
    EXPECT_GE((la - lb) * (a - b), 0.0);
  }
}

TEST(YosidaLn, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(-10.0, 10.0), lm(std::log(1e-2), std::log(5.0));
  for (int i = 0; i < 500; ++i) {
    const YosidaParam p(std::exp(lm(rng)));
    const double a = x(rng);
    const double h = 1e-6 * std::max(1.0, std::abs(a));
    const double fd = (yosida_ln(p, a + h) - yosida_ln(p, a - h)) / (2 * h);
    EXPECT_NEAR(fd, yosida_ln_deriv(p, a), 1e-6 * yosida_ln_deriv(p, a));
  }
}

TEST(YosidaLn, SmallMuBoundsOnTheDerivative) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(1e-6, 50.0), y(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = x(rng);
    EXPECT_LE(yosida_ln_deriv(YosidaParam(1e-3), a), 2.0 / a);
    EXPECT_LE(i_mu_closed(YosidaParam(1e-3), a), 2.0 * a);
    const double b = y(rng);
    EXPECT_GE(yosida_ln_deriv(YosidaParam(2.0), b), 1.0 / (std::abs(b) + 4.0));
    EXPECT_LE(resolvent_ln(YosidaParam(2.0), b), std::abs(b) + 2.0);
  }
}

TEST(IMu, ZeroAtZero) {
  for (double mu : {1e-4, 0.1, 3.0}) {
    EXPECT_EQ(i_mu(YosidaParam(mu), 0.0), 0.0);
    EXPECT_EQ(i_mu_closed(YosidaParam(mu), 0.0), 0.0);
  }
}

TEST(IMu, UpperAndLowerBoundAtFive) {
  const YosidaParam p(1e-3);
  const double v = i_mu(p, 5.0);
  const double a = 1e-3 + 2.0;
  EXPECT_GE(v, 5.0 - a * std::log1p(5.0 / a));
  EXPECT_LE(v, 10.0);
  EXPECT_GE(i_mu(p, -5.0), 2.5 - 2.4);
}

TEST(IMu, MatchesTrapezoidOracle) {
  const double mu = 1.0, x = -2.0;
  const int n = 1000000;
  const double h = x / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = k * h;
    const double f = s / (ref_resolvent(mu, s) + mu);
    sum += (k == 0 || k == n) ? 0.5 * f : f;
  }
  const double oracle = sum * h;
  EXPECT_NEAR(i_mu(YosidaParam(mu), x), oracle, 1e-8 * std::abs(oracle));
  EXPECT_NEAR(i_mu_closed(YosidaParam(mu), x), oracle, 1e-8 * std::abs(oracle));
}

TEST(IMu, ClosedFormAgreesWithQuadrature) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> x(-30.0, 30.0), lm(std::log(1e-4), std::log(10.0));
  for (int i = 0; i < 200; ++i) {
    const YosidaParam p(std::exp(lm(rng)));
    const double a = x(rng);
    const double c = i_mu_closed(p, a);
    EXPECT_NEAR(i_mu(p, a), c, 1e-10 * std::max(1.0, std::abs(c)));
    EXPECT_EQ(IMu(p)(a), c);
    EXPECT_GE(c, 0.0);
  }
}

TEST(PosPart, Branches) {
  EXPECT_EQ(pos_part_mu(YosidaParam(0.1), -3.0), 0.0);
  EXPECT_DOUBLE_EQ(pos_part_mu(YosidaParam(0.4), 0.2), 0.05);
  EXPECT_DOUBLE_EQ(pos_part_mu(YosidaParam(0.4), 1.0), 0.8);
}

TEST(PosPart, ConvergesToPositivePart) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-5.0, 5.0);
  for (double mu : {1.0, 1e-1, 1e-3}) {
    for (int i = 0; i < 500; ++i) {
      const double a = x(rng);
      const double v = pos_part_mu(YosidaParam(mu), a);
      EXPECT_LE(v, std::max(a, 0.0));
      EXPECT_LE(std::abs(v - std::max(a, 0.0)), 0.5 * mu + 1e-15 * std::abs(a));
    }
  }
}

TEST(Heaviside, Branches) {
  const YosidaParam p(0.2);
  EXPECT_EQ(heaviside_mu(p, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(heaviside_mu(p, 0.1), 0.5);
  EXPECT_EQ(heaviside_mu(p, 5.0), 1.0);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> x(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double v = heaviside_mu(p, x(rng));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Heaviside, IsTheDerivativeOfThePositivePart) {
  const YosidaParam p(0.3);
  for (double a : {-0.5, 0.05, 0.2, 0.29, 0.5, 4.0}) {
    const double h = 1e-7;
    EXPECT_NEAR((pos_part_mu(p, a + h) - pos_part_mu(p, a - h)) / (2 * h), heaviside_mu(p, a), 1e-7);
  }
}

TEST(Box, YosidaValues) {
  const YosidaParam p(0.5);
  const BoxConstraint b = make_box(0.0, 1.0);
  EXPECT_EQ(yosida_box(p, b, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(yosida_box(p, b, 1.5), 1.0);
  EXPECT_DOUBLE_EQ(yosida_box(p, b, -0.25), -0.5);
}

TEST(Box, EnvelopeValues) {
  const BoxConstraint b = make_box(0.0, 1.0);
  EXPECT_EQ(box_envelope(YosidaParam(3.0), b, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(box_envelope(YosidaParam(0.5), b, 2.0), 1.0);
  const double v = box_envelope(YosidaParam(0.1), b, -1.0);
  EXPECT_DOUBLE_EQ(v, 5.0);
  EXPECT_GE(v, 1.0 / (2 * 0.1) - 0.0);
}

TEST(Box, EnvelopeDerivativeIsTheYosidaOperator) {
  const YosidaParam p(0.2);
  const BoxConstraint b = make_box(-0.5, 0.5);
  for (double a : {-2.0, -0.7, 0.0, 0.45, 0.8, 3.0}) {
    const double h = 1e-7;
    EXPECT_NEAR((box_envelope(p, b, a + h) - box_envelope(p, b, a - h)) / (2 * h),
                yosida_box(p, b, a), 1e-6);
  }
}

TEST(Power, ResolventIdentityAndEnvelope) {
  const YosidaParam p(0.05);
  const PowerConstraint c = make_power(2.0, 4.0);
  for (double a : {-3.0, -0.4, 0.0, 0.1, 1.0, 5.0}) {
    const double y = yosida_power(p, c, a);
    const double j = a - p.mu() * y;
    EXPECT_NEAR(y, c.c * c.q * std::pow(std::abs(j), c.q - 1) * (j < 0 ? -1 : 1),
                1e-10 * std::max(1.0, std::abs(y)));
    const double h = 1e-6;
    EXPECT_NEAR((power_envelope(p, c, a + h) - power_envelope(p, c, a - h)) / (2 * h), y,
                1e-6 * std::max(1.0, std::abs(y)));
    EXPECT_NEAR((yosida_power(p, c, a + h) - yosida_power(p, c, a - h)) / (2 * h),
                yosida_power_deriv(p, c, a), 1e-5 * std::max(1.0, yosida_power_deriv(p, c, a)));
  }
}

TEST(Impen, Values) {
  const YosidaParam p(0.2);
  EXPECT_EQ(yosida_impen(p, -0.5), 0.0);
  EXPECT_DOUBLE_EQ(yosida_impen(p, 0.1), 0.5);
  EXPECT_DOUBLE_EQ(impen_envelope(p, 0.1), 0.025);
}

TEST(Monotonicity, SortedRandomSamples) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> x(-10.0, 10.0);
  std::vector<double> xs(3000);
  for (auto& v : xs) v = x(rng);
  std::sort(xs.begin(), xs.end());
  const YosidaParam p(0.05);
  const BoxConstraint b{0.0, 1.0};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double a = xs[i - 1], c = xs[i];
    EXPECT_LE(yosida_ln(p, a), yosida_ln(p, c));
    EXPECT_LE(yosida_box(p, b, a), yosida_box(p, b, c));
    EXPECT_LE(pos_part_mu(p, a), pos_part_mu(p, c));
    EXPECT_LE(heaviside_mu(p, a), heaviside_mu(p, c));
    EXPECT_LE(yosida_impen(p, a), yosida_impen(p, c));
    EXPECT_LE(std::abs(yosida_impen(p, a) - yosida_impen(p, c)),
              (c - a) / p.mu() + 1e-15 * (std::abs(a) + std::abs(c)) / p.mu());
  }
}

TEST(Params, RejectInvalidValues) {
  EXPECT_THROW(YosidaParam{0.0}, std::invalid_argument);
  EXPECT_THROW(YosidaParam{-1.0}, std::invalid_argument);
  EXPECT_THROW(YosidaParam{INFINITY}, std::invalid_argument);
  EXPECT_THROW(make_box(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_box(0.0, NAN), std::invalid_argument);
  EXPECT_THROW(make_power(1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(make_power(0.0, 4.0), std::invalid_argument);
  EXPECT_TRUE(YosidaParam(1e-3).below_small_mu_threshold());
  EXPECT_FALSE(YosidaParam(1e-2).below_small_mu_threshold());
}
