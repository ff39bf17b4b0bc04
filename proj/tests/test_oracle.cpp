#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sgwave/oracle.hpp"

using namespace sgwave;

TEST(OracleLinear, HarmonicSolution) {
  const double lambda = 4.0;  // w = 2
  const auto v = oracle::linear_exact(lambda, 1.0, 2.0, 0.3);
  EXPECT_NEAR(v.a, std::cos(0.6) + std::sin(0.6), 1e-15);
  EXPECT_NEAR(v.adot, -2 * std::sin(0.6) + 2 * std::cos(0.6), 1e-15);
  // The invariant lambda a^2 + adot^2 is preserved.
  EXPECT_NEAR(lambda * v.a * v.a + v.adot * v.adot, lambda + 4.0, 1e-13);
  EXPECT_THROW(oracle::linear_exact(0.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(OracleQuadrature, SimpsonIsExactForCubics) {
  EXPECT_NEAR(oracle::simpson([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0, 2), 0.0, 1e-14);
  EXPECT_NEAR(oracle::simpson([](double x) { return std::exp(x); }, 0.0, 1.0), std::exp(1.0) - 1, 1e-13);
  EXPECT_THROW(oracle::simpson([](double) { return 0.0; }, 0.0, 1.0, 3), std::invalid_argument);
}

TEST(OracleQuadrature, SineCoefficientOfParabola) {
  // <x(1-x), sqrt2 sin(k pi x)> = sqrt2 * 2 (1 - (-1)^k) / (k pi)^3
  for (int k = 1; k <= 6; ++k) {
    const double exact =
        std::sqrt(2.0) * 2.0 * (1 - std::pow(-1.0, k)) / std::pow(k * std::numbers::pi, 3);
    EXPECT_NEAR(oracle::sine_coefficient([](double x) { return x * (1 - x); }, k, 1.0), exact, 1e-13);
  }
}

TEST(OracleScalar, GronwallOdeClosedForm) {
  const std::vector<double> t{0.0, 0.25, 1.0};
  const auto z = oracle::scalar_comparison(oracle::GronwallLinearOde{0.8, 0.4, 1.5}, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double exact = 1.5 * std::exp(0.8 * t[i]) + 0.5 * std::expm1(0.8 * t[i]);
    EXPECT_NEAR(z[i], exact, 1e-10 * exact);
  }
  const std::vector<double> bad{1.0, 0.5};
  EXPECT_THROW(oracle::scalar_comparison(oracle::GronwallLinearOde{}, bad), std::invalid_argument);
}

TEST(OracleScalar, BernoulliMatchesR2ClosedForm) {
  const std::vector<double> t{0.0, 0.5, 2.0, 6.0};
  const auto w = oracle::scalar_comparison(oracle::BernoulliOde{0.3, 2.0, 5.0}, t);
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_NEAR(w[i], oracle::bernoulli_r2_closed_form(0.3, 5.0, t[i]), 1e-11 * w[i]);
}

TEST(OracleReference, StrideAndStepRatio) {
  ProblemDefinition def;
  def.initial = InitialData::from_modes(def.domain, {1.0}, {});
  SolverConfig cfg;
  cfg.T = 1.0;
  cfg.dt = 1e-2;
  cfg.sample_stride = 10;
  const auto ref = oracle::reference_run(def, 4, 1e-3, cfg);
  EXPECT_EQ(ref.config.sample_stride, 100);
  EXPECT_EQ(ref.samples.size(), 11u);
  EXPECT_THROW(oracle::reference_run(def, 4, 3e-3, cfg), std::invalid_argument);

  const auto test = solve(def, 2, cfg);
  EXPECT_EQ(oracle::trajectory_error(ref, ref), 0.0);
  EXPECT_LT(oracle::trajectory_error(test, ref), 1e-7);
  EXPECT_THROW(oracle::trajectory_error(ref, test), std::invalid_argument);
}
