#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sgwave/galerkin_solver.hpp"
#include "sgwave/kernels.hpp"
#include "sgwave/oracle.hpp"
#include "sgwave/spectral_core.hpp"
#include "support.hpp"

using namespace sgwave;
using sgwave::testing::dirichlet;
using sgwave::testing::periodic;
using sgwave::testing::random_field;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(BuildOperator, DirichletEigenvalues) {
  const auto op = dirichlet(3);
  ASSERT_EQ(op->modes(), 3);
  EXPECT_DOUBLE_EQ(op->eigenvalue(0), kPi * kPi);
  EXPECT_DOUBLE_EQ(op->eigenvalue(1), 4 * kPi * kPi);
  EXPECT_DOUBLE_EQ(op->eigenvalue(2), 9 * kPi * kPi);
}

TEST(BuildOperator, PeriodicCriticalLengthAccepted) {
  const auto op = periodic(2, 2 * kPi);
  EXPECT_NEAR(op->eigenvalue(0), 1.0, 1e-15);
  EXPECT_NEAR(op->eigenvalue(1), 1.0, 1e-15);
  EXPECT_TRUE(op->warnings().empty());
}

TEST(BuildOperator, PeriodicPairsShareEigenvalue) {
  const auto op = periodic(5, 1.0);
  for (int k = 0; k < 5; ++k) {
    const double w = 2 * kPi * (k / 2 + 1);
    EXPECT_DOUBLE_EQ(op->eigenvalue(k), w * w);
  }
  EXPECT_NEAR(op->basis_function(0, 0.0), std::sqrt(2.0), 1e-15);  // cosine first
  EXPECT_NEAR(op->basis_function(1, 0.0), 0.0, 1e-15);
}

TEST(BuildOperator, PoincareViolationRejected) {
  DomainSpec d;
  d.length = 4.0;
  try {
    build_operator(d, 4);
    FAIL() << "expected a Poincare error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Poincare inequality ||x||_H <= ||Bx||_H violated"),
              std::string::npos);
  }
}

TEST(BuildOperator, PoincareOverrideAttachesWarning) {
  DomainSpec d;
  d.length = 4.0;
  d.allow_poincare_violation = true;
  const auto op = build_operator(d, 4);
  EXPECT_FALSE(op->satisfies_poincare());
  ASSERT_EQ(op->warnings().size(), 1u);
  EXPECT_NE(op->warnings()[0].find("violated"), std::string::npos);
}

TEST(BuildOperator, PeriodicBeyondTwoPiRejected) {
  EXPECT_THROW(periodic(2, 7.0), std::invalid_argument);
}

TEST(BuildOperator, RejectsBadArguments) {
  DomainSpec d;
  EXPECT_THROW(build_operator(d, 0), std::invalid_argument);
  d.grid_points = min_grid_points(8) - 1;
  EXPECT_THROW(build_operator(d, 8), std::invalid_argument);
  d.grid_points = min_grid_points(8);
  EXPECT_NO_THROW(build_operator(d, 8));
  DomainSpec bad;
  bad.length = 0.0;
  EXPECT_THROW(build_operator(bad, 2), std::invalid_argument);
}

TEST(BuildOperator, GridPointDefaults) {
  EXPECT_EQ(min_grid_points(8), 12);
  EXPECT_EQ(min_grid_points(3), 5);
  EXPECT_EQ(dirichlet(8)->grid_points(), 17);
  EXPECT_EQ(periodic(4, 1.0)->grid_points(), 9);
  EXPECT_EQ(periodic(5, 1.0)->grid_points(), 13);
}

TEST(BuildOperator, EigenvaluesPositiveAndNondecreasing) {
  for (int m : {1, 2, 7, 32}) {
    for (const auto& op : {dirichlet(m), periodic(m, 2.0)}) {
      for (int k = 0; k < m; ++k) {
        EXPECT_GT(op->eigenvalue(k), 0.0);
        if (k > 0) {
          EXPECT_GE(op->eigenvalue(k), op->eigenvalue(k - 1));
        }
      }
    }
  }
}

TEST(BuildOperator, BasisOrthonormalUnderContinuousInnerProduct) {
  for (const auto& op : {dirichlet(4, 2.0), periodic(4, 3.0)}) {
    const double l = op->domain().length;
    for (int j = 0; j < op->modes(); ++j)
      for (int k = 0; k < op->modes(); ++k) {
        const double ip = oracle::simpson(
            [&](double x) { return op->basis_function(j, x) * op->basis_function(k, x); }, 0.0, l);
        EXPECT_NEAR(ip, j == k ? 1.0 : 0.0, 1e-10) << j << "," << k;
      }
  }
}

TEST(DiagonalOperators, ApplyAOnFirstMode) {
  const auto op = dirichlet(4);
  const auto Ae = apply_A(SpectralField::basis_vector(op, 0));
  EXPECT_DOUBLE_EQ(Ae[0], kPi * kPi);
  for (std::size_t k = 1; k < 4; ++k) EXPECT_EQ(Ae[k], 0.0);
}

TEST(DiagonalOperators, CompositionIdentities) {
  std::mt19937_64 rng(1);
  const auto op = dirichlet(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_field(op, rng, 5.0);
    const auto BB = apply_B(apply_B(x));
    const auto A = apply_A(x);
    const auto round = apply_A(apply_A_inv(x));
    const auto half = apply_B(apply_A_inv_sqrt(x));
    for (std::size_t k = 0; k < x.size(); ++k) {
      EXPECT_LE(std::abs(BB[k] - A[k]), 1e-12 * op->lambda_max() * norm_H(x));
      EXPECT_NEAR(round[k], x[k], 1e-12 * std::abs(x[k]) + 1e-15);
      EXPECT_NEAR(half[k], x[k], 1e-12 * std::abs(x[k]) + 1e-15);
    }
  }
}

TEST(DiagonalOperators, EnergyFormMatchesDirectSum) {
  std::mt19937_64 rng(2);
  const auto op = dirichlet(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_field(op, rng, 3.0);
    double direct = 0.0;
    for (int k = 0; k < 8; ++k) direct += op->eigenvalue(k) * x[k] * x[k];
    const double bx = norm_H(apply_B(x));
    EXPECT_NEAR(bx * bx, direct, 1e-12 * direct);
    EXPECT_NEAR(inner(apply_A(x), x), direct, 1e-12 * direct);
    EXPECT_LE(std::abs(inner(apply_A(x), x) - bx * bx),
              1e-10 * (1 + norm_H(x) * norm_H(x)) * op->lambda_max());
  }
}

TEST(DiagonalOperators, PoincareInequalityHoldsWhenLambdaMinAtLeastOne) {
  std::mt19937_64 rng(3);
  for (const auto& op : {dirichlet(6, kPi), periodic(6, 2 * kPi), dirichlet(3, 0.5)}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = random_field(op, rng, 10.0);
      EXPECT_LE(norm_H(x), norm_H(apply_B(x)) * (1 + 1e-15));
    }
  }
}

TEST(DiagonalOperators, NonFiniteInputRejected) {
  const auto op = dirichlet(2);
  SpectralField x(op, {1.0, std::nan("")});
  EXPECT_THROW(apply_A(x), std::invalid_argument);
  EXPECT_THROW(apply_B(x), std::invalid_argument);
  EXPECT_THROW(apply_A_inv(x), std::invalid_argument);
  EXPECT_THROW(apply_A_inv_sqrt(x), std::invalid_argument);
}

TEST(SpectralFieldTest, DifferentOperatorsNeverCombined) {
  const auto a = dirichlet(2);
  const auto b = dirichlet(2);  // equal content, different instance
  SpectralField x(a), z(b);
  EXPECT_THROW(x + z, std::invalid_argument);
  EXPECT_THROW(inner(x, z), std::invalid_argument);
  EXPECT_THROW(SpectralField(a, {1.0}), std::invalid_argument);
}

TEST(Transforms, FirstModeSamples) {
  const auto op = dirichlet(4);
  const auto samples = to_grid(SpectralField::basis_vector(op, 0));
  for (int i = 0; i < op->grid_points(); ++i)
    EXPECT_NEAR(samples[i], std::sqrt(2.0) * std::sin(kPi * op->nodes()[i]), 1e-15);
}

TEST(Transforms, RoundTripIsIdentity) {
  std::mt19937_64 rng(4);
  for (const auto& op : {dirichlet(8), dirichlet(8, 2.5), periodic(8, 1.0), periodic(7, 6.0)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_field(op, rng, 10.0);
      const auto back = from_grid(to_grid(x), op);
      for (std::size_t k = 0; k < x.size(); ++k)
        EXPECT_NEAR(back[k], x[k], 1e-12 * norm_H(x));
    }
  }
}

TEST(Transforms, RoundTripAtDealiasingFloor) {
  DomainSpec d;
  d.grid_points = min_grid_points(8);
  const auto op = build_operator(d, 8);
  std::mt19937_64 rng(5);
  const auto x = random_field(op, rng);
  const auto back = from_grid(to_grid(x), op);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(back[k], x[k], 1e-12);
}

TEST(Transforms, HighModeProjectsToZero) {
  const auto op = dirichlet(4);
  const auto samples = sgwave::sample_on_grid(*op, [](double x) { return std::sin(9 * kPi * x); });
  const auto proj = from_grid(samples, op);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(proj[k], 0.0, 1e-13);
  // The analytic integral of sin(9 pi x) sin(k pi x), k <= 4, is zero.
  for (int k = 1; k <= 4; ++k)
    EXPECT_NEAR(oracle::sine_coefficient([](double x) { return std::sin(9 * kPi * x); }, k, 1.0),
                0.0, 1e-10);
}

TEST(Transforms, MismatchedGridRejected) {
  const auto op = dirichlet(4);
  std::vector<double> wrong(static_cast<std::size_t>(op->grid_points() + 1), 0.0);
  EXPECT_THROW(from_grid(wrong, op), std::invalid_argument);
}

TEST(Transforms, ParsevalOnTheGrid) {
  std::mt19937_64 rng(6);
  for (const auto& op : {dirichlet(8), periodic(8, 2.0)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_field(op, rng, 4.0);
      const auto z = random_field(op, rng, 4.0);
      double sum = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) sum += x[k] * x[k];
      EXPECT_NEAR(norm_H(x) * norm_H(x), sum, 1e-14 * sum);
      EXPECT_NEAR(grid_inner(*op, to_grid(x), to_grid(z)), inner(x, z), 1e-12 * (1 + sum));
      EXPECT_NEAR(norm_Lp(x, 2.0), norm_H(x), 1e-12 * norm_H(x));
    }
  }
}

TEST(Norms, BasicValues) {
  const auto op = dirichlet(4);
  const auto e1 = SpectralField::basis_vector(op, 0);
  const auto e2 = SpectralField::basis_vector(op, 1);
  EXPECT_NEAR(norm_H(e1), 1.0, 1e-15);
  EXPECT_EQ(inner(e1, e2), 0.0);
  // 4 int_0^1 sin^4(pi x) dx = 3/2.
  EXPECT_NEAR(norm_Lp(e1, 4.0), std::pow(1.5, 0.25), 1e-14);
  const double oracle_value = oracle::simpson(
      [](double x) { return std::pow(std::sqrt(2.0) * std::sin(kPi * x), 4); }, 0.0, 1.0);
  EXPECT_NEAR(std::pow(norm_Lp(e1, 4.0), 4), oracle_value, 1e-12);
}

TEST(Kernels, SerialAndParallelAgree) {
  std::mt19937_64 rng(7);
  const auto op = dirichlet(32);
  const auto x = random_field(op, rng, 3.0);
  const auto s = to_grid(x, kernels::Execution::Serial);
  const auto p = to_grid(x, kernels::Execution::Parallel);
  EXPECT_EQ(s, p);
  const auto bs = from_grid(s, op, kernels::Execution::Serial);
  const auto bp = from_grid(s, op, kernels::Execution::Parallel);
  for (std::size_t k = 0; k < bs.size(); ++k) EXPECT_EQ(bs[k], bp[k]);
  const double ps = kernels::serial::weighted_abs_power_sum(op->weights(), s, 3.5);
  const double pp = kernels::parallel::weighted_abs_power_sum(op->weights(), s, 3.5);
  EXPECT_NEAR(ps, pp, 1e-13 * ps);
}
