#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rpwalk/stats.hpp"

using namespace rpwalk;

TEST(Stats, BatchMeanOfKnownData) {
  std::vector<double> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 2);
  const auto e = batch_mean(x, 32);
  EXPECT_DOUBLE_EQ(e.mean, 0.5);
  EXPECT_DOUBLE_EQ(e.se, 0.0);  // every batch of two holds one 0 and one 1
  EXPECT_EQ(e.batches, 32);
  EXPECT_EQ(e.count, 64u);
}

TEST(Stats, BatchStandardErrorMatchesIidFormula) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  std::vector<double> x(320000);
  for (auto& v : x) v = n01(rng);
  const auto e = batch_mean(x);
  EXPECT_NEAR(e.se, 1.0 / std::sqrt(320000.0), 0.3 / std::sqrt(320000.0));
}

TEST(Stats, QuantileType7) {
  const std::vector<double> x = {4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(x, 0.95), 3.85);
}

namespace {

double normal_quantile(double u) {
  double lo = -10, hi = 10;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (standard_normal_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Stats, KolmogorovSmirnov) {
  EXPECT_NEAR(ks_statistic_normal(std::vector<double>{0.0}), 0.5, 1e-12);
  EXPECT_NEAR(ks_critical_value(0.05, 100), 1.3581 / 10, 1e-4);
  EXPECT_NEAR(standard_normal_cdf(1.96), 0.9750021, 1e-6);
  // Midpoint quantiles of N(0,1): D = 0.5/n exactly.
  std::vector<double> x(10000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = normal_quantile((i + 0.5) / x.size());
  EXPECT_NEAR(ks_statistic_normal(x), 0.5 / x.size(), 1e-9);
  for (auto& v : x) v += 0.1;
  EXPECT_GT(ks_statistic_normal(x), ks_critical_value(0.01, x.size()));
}

TEST(Stats, OrdinaryLeastSquares) {
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
  const auto f = ols(x, y);
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_NEAR(f.slope_se, 0.0, 1e-12);
}

TEST(Stats, ReplicasAreIndependentOfThreadCount) {
  auto fn = [](std::size_t i) { return static_cast<double>(i * i) + 0.5; };
  const auto a = run_replicas<double>(1001, 1, fn), b = run_replicas<double>(1001, 4, fn);
  EXPECT_EQ(a, b);
  EXPECT_THROW(run_replicas<double>(10, 3, [](std::size_t i) -> double {
                 if (i == 7) throw std::runtime_error("boom");
                 return 0.0;
               }),
               std::runtime_error);
}
