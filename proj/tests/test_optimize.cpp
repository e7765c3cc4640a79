#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cavsq/optimize.hpp"

using namespace cavsq;

TEST(Minimize1d, Quadratic) {
  const OptimizeResult r = minimize_1d([](double q) { return (q - 3.0) * (q - 3.0); }, 0.0, 10.0, 1e-8);
  EXPECT_NEAR(r.argmin, 3.0, 1e-8);
  EXPECT_LE(r.bracket, 1e-8);
  EXPECT_FALSE(r.at_boundary);
  EXPECT_GT(r.evaluations, 64u);
}

TEST(Minimize1d, PicksGlobalDipAndIsMonotoneSafe) {
  // Two dips; the deeper one is second.
  auto f = [](double q) { return std::cos(q) - 0.1 * q; };
  std::vector<double> seen;
  const OptimizeResult r = minimize_1d(
      [&](double q) {
        const double v = f(q);
        seen.push_back(v);
        return v;
      },
      0.0, 10.0, 1e-10);
  EXPECT_NEAR(r.argmin, 3.0 * std::acos(-1.0) - std::asin(-0.1) + 0.0, 0.2);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_LE(r.value, seen[i]);
}

TEST(Minimize1d, BoundaryAndErrors) {
  const OptimizeResult r = minimize_1d([](double q) { return q; }, 1.0, 2.0, 1e-9);
  EXPECT_TRUE(r.at_boundary);
  EXPECT_NEAR(r.argmin, 1.0, 1e-9);
  EXPECT_THROW(minimize_1d([](double) { return std::numeric_limits<double>::infinity(); }, 0.0, 1.0, 1e-6),
               NoMinimum);
  EXPECT_THROW(minimize_1d([](double q) { return q; }, 1.0, 1.0, 1e-6), InvalidArgument);
  EXPECT_THROW(minimize_1d([](double q) { return q; }, 0.0, 1.0, 1e-6, {64, Spacing::Log}), InvalidArgument);
}

TEST(Minimize1d, Deterministic) {
  auto f = [](double q) { return std::sin(3 * q) + 0.05 * q * q; };
  const auto a = minimize_1d(f, -5.0, 5.0, 1e-9);
  const auto b = minimize_1d(f, -5.0, 5.0, 1e-9);
  EXPECT_EQ(a.argmin, b.argmin);
  EXPECT_EQ(a.value, b.value);
}

TEST(Minimize1d, IdealModelLargeDetuning) {
  const OptimizeResult r = minimize_ideal_over_qx(1e4, 50.0);
  EXPECT_NEAR(r.value / (1.5 * std::pow(12.0, -1.0 / 3.0) * std::pow(50.0, -2.0 / 3.0)), 1.0, 0.01);
}

TEST(Minimize1d, ScatterModelCooperativityOrdering) {
  const double v20 = minimize_scatter_over_qx(200.0, 1e4, 20.0).value;
  const double v2 = minimize_scatter_over_qx(200.0, 1e4, 2.0).value;
  const double vinf = minimize_scatter_over_qx(200.0, 1e4, std::numeric_limits<double>::infinity()).value;
  EXPECT_LT(v20, v2);
  EXPECT_LT(vinf, v20);
}

TEST(OptimalOverDetuning, BeatsFixedDetuning) {
  for (double eta : {0.5, 1.0, 5.0}) {
    const DetuningOptimum best = optimal_over_detuning(1e4, eta, 0.1, 1e4);
    EXPECT_LE(best.inner.value, minimize_scatter_over_qx(1.0, 1e4, eta).value);
  }
}

TEST(OptimalOverDetuning, NoScatteringImprovesWithDetuning) {
  const double inf = std::numeric_limits<double>::infinity();
  double prev = inf;
  for (double x : {0.5, 2.0, 10.0, 50.0, 200.0}) {
    const double v = minimize_scatter_over_qx(x, 1e4, inf).value;
    EXPECT_LE(v, prev * (1.0 + 1e-9)) << "x=" << x;
    prev = v;
  }
}

TEST(OptimalOverDetuning, DegenerateRange) {
  const DetuningOptimum d = optimal_over_detuning(1e4, 2.0, 5.0, 5.0);
  EXPECT_EQ(d.x, 5.0);
  EXPECT_EQ(d.inner.value, minimize_scatter_over_qx(5.0, 1e4, 2.0).value);
  EXPECT_THROW(optimal_over_detuning(1e4, 2.0, 5.0, 1.0), InvalidArgument);
}

TEST(OptimalOverDetuning, Deterministic) {
  const auto a = optimal_over_detuning(1e4, 2.0, 0.1, 1e3);
  const auto b = optimal_over_detuning(1e4, 2.0, 0.1, 1e3);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.inner.value, b.inner.value);
}

TEST(FitPowerLaw, ExactPowerLaw) {
  const std::vector<double> xs{1, 2, 4, 8, 16};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, -0.4));
  const PowerLawFit f = fit_power_law(xs, ys);
  EXPECT_NEAR(f.exponent, -0.4, 1e-13);
  EXPECT_NEAR(f.prefactor, 3.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_THROW(fit_power_law(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidArgument);
  EXPECT_THROW(fit_power_law(std::vector<double>{1.0, -1.0}, std::vector<double>{1.0, 1.0}), DomainError);
}

TEST(ScalingFit, AnalyticLargeDetuning) {
  ScalingConfig cfg;
  cfg.x = 1e4;
  const std::vector<double> s{1e2, 1e3, 1e4, 1e5};
  const ScalingFit fit = scaling_fit(cfg, s, ScalingMode::Analytic);
  EXPECT_NEAR(fit.exponent, -2.0 / 3.0, 1e-2);
  EXPECT_GE(fit.r_squared, 0.0);
  EXPECT_LE(fit.r_squared, 1.0);
  EXPECT_EQ(fit.points.size(), 4u);
}

TEST(ScalingFit, AnalyticIntermediateDetuning) {
  ScalingConfig cfg;
  cfg.x = 2.0;
  const std::vector<double> s{1e4, 1e5, 1e6, 1e7};
  EXPECT_NEAR(scaling_fit(cfg, s, ScalingMode::Analytic).exponent, -0.4, 1e-2);
}

TEST(ScalingFit, Errors) {
  ScalingConfig cfg;
  EXPECT_THROW(scaling_fit(cfg, std::vector<double>{10, 20, 30}, ScalingMode::Analytic), InvalidArgument);
  EXPECT_THROW(scaling_fit(cfg, std::vector<double>{10, 30, 20, 40}, ScalingMode::Analytic), InvalidArgument);
  cfg.x = 0.01;
  EXPECT_THROW(scaling_fit(cfg, std::vector<double>{10, 20, 30, 40}, ScalingMode::Analytic), OutOfRegime);
}

TEST(ScalingFit, ExactSmallSpinsDeterministic) {
  ScalingConfig cfg;
  cfg.x = 1.0;
  cfg.Omega = 0.01;
  const std::vector<double> s{20, 30, 45, 70};
  const ScalingFit a = scaling_fit(cfg, s, ScalingMode::Exact);
  cfg.threads = 3;
  const ScalingFit b = scaling_fit(cfg, s, ScalingMode::Exact);
  EXPECT_EQ(a.exponent, b.exponent);
  EXPECT_LT(a.exponent, 0.0);
  for (const auto& p : a.points) EXPECT_FALSE(p.at_boundary);
}
