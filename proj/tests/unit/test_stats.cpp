#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rangesum/errors.hpp"
#include "rangesum/stats.hpp"

namespace {

using namespace rangesum;
using namespace rangesum::stats;

TEST(Ks, AllSamplesAtTheMedian) {
  const std::vector<double> x(100, 0.0);
  EXPECT_DOUBLE_EQ(ks_statistic(x, theoretical_cdf(Distribution::Gaussian, 1.0)), 0.5);
}

TEST(Ks, SingleSample) {
  const std::vector<double> x = {0.3};
  EXPECT_DOUBLE_EQ(ks_statistic(x, [](double v) { return v; }), 0.7);
}

TEST(Ks, EmptySampleRejected) {
  EXPECT_THROW(ks_statistic({}, [](double v) { return v; }), ArgumentError);
}

TEST(Ks, CriticalValue) {
  EXPECT_NEAR(ks_critical(0.01, 10000), 1.628 / 100.0, 1e-5);
  EXPECT_NEAR(ks_critical(0.05, 1), 1.358, 1e-3);
  EXPECT_THROW(ks_critical(0.0, 10), ArgumentError);
}

TEST(Ks, PValueAgreesWithCritical) {
  EXPECT_NEAR(ks_pvalue(ks_critical(0.01, 10000), 10000), 0.01, 5e-4);
  EXPECT_NEAR(ks_pvalue(ks_critical(0.05, 10000), 10000), 0.05, 5e-4);
}

TEST(Ks, ExactSamplesPassMostly) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const auto cdf = theoretical_cdf(Distribution::Gaussian, 1.0);
  int rejections = 0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(10000);
    for (auto& v : x) v = g(rng);
    rejections += ks_statistic(x, cdf) >= ks_critical(0.01, x.size());
  }
  EXPECT_LE(rejections, 3);
}

TEST(Cdf, ClosedForms) {
  EXPECT_DOUBLE_EQ(theoretical_cdf(Distribution::Gaussian, 1.0)(0.0), 0.5);
  EXPECT_NEAR(theoretical_cdf(Distribution::Gaussian, 4.0)(2.0), 0.8413447460685429, 1e-12);
  EXPECT_DOUBLE_EQ(theoretical_cdf(Distribution::Cauchy, 2.0)(2.0), 0.75);
  EXPECT_DOUBLE_EQ(theoretical_cdf(Distribution::RandomWalk, 2.0)(0.0), 0.75);
  EXPECT_DOUBLE_EQ(theoretical_cdf(Distribution::RandomWalk, 2.0)(-2.5), 0.0);
  EXPECT_DOUBLE_EQ(theoretical_cdf(Distribution::RandomWalk, 2.0)(1.0), 0.75);
  EXPECT_DOUBLE_EQ(theoretical_cdf(Distribution::RandomWalk, 2.0)(2.0), 1.0);
  EXPECT_THROW(theoretical_cdf(Distribution::Gaussian, 0.0), ArgumentError);
}

TEST(Cdf, WalkPmfMatchesEnumeration) {
  // Enumerate all 2^6 step sequences.
  std::vector<double> count(13, 0.0);
  for (int mask = 0; mask < 64; ++mask) {
    int s = 0;
    for (int b = 0; b < 6; ++b) s += (mask >> b) & 1 ? 1 : -1;
    count[static_cast<std::size_t>(s + 6)] += 1.0;
  }
  double cdf = 0.0;
  for (int x = -6; x <= 6; ++x) {
    EXPECT_NEAR(rw_pmf(6, x), count[static_cast<std::size_t>(x + 6)] / 64.0, 1e-15);
    cdf += count[static_cast<std::size_t>(x + 6)] / 64.0;
    EXPECT_NEAR(rw_cdf(6, x), cdf, 1e-15);
  }
  EXPECT_EQ(rw_pmf(6, 7), 0.0);
  EXPECT_EQ(rw_pmf(6, 1), 0.0);
}

TEST(ChiSquare, PerfectFitAndMerging) {
  const std::vector<double> obs = {25, 50, 25, 0, 0};
  const std::vector<double> p = {0.25, 0.5, 0.25, 0.0, 0.0};
  const auto r = chi_square(obs, p, 0.01);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.bins, 3u);
  EXPECT_EQ(r.dof, 2);
  EXPECT_NEAR(r.critical, 9.2103, 1e-3);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(ChiSquare, DetectsMisfit) {
  const std::vector<double> obs = {700, 300};
  const std::vector<double> p = {0.5, 0.5};
  const auto r = chi_square(obs, p, 0.01);
  EXPECT_DOUBLE_EQ(r.statistic, 160.0);
  EXPECT_GT(r.statistic, r.critical);
  EXPECT_LT(r.p_value, 1e-10);
}

TEST(ChiSquare, SmallCellsAreMerged) {
  const std::vector<double> obs = {1, 2, 3, 94};
  const std::vector<double> p = {0.01, 0.02, 0.03, 0.94};
  const auto r = chi_square(obs, p, 0.01);
  EXPECT_EQ(r.bins, 2u);
}

TEST(Correlation, Basics) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {2, 4, 6, 8, 10};
  const std::vector<double> z = {1, 8, 27, 64, 125};
  EXPECT_NEAR(pearson(x, y), 1.0, 1e-15);
  EXPECT_LT(pearson(x, z), 1.0);
  EXPECT_NEAR(spearman(x, z), 1.0, 1e-15);
  const std::vector<double> ties = {1, 1, 2, 2, 3};
  EXPECT_NEAR(spearman(ties, ties), 1.0, 1e-15);
  EXPECT_NEAR(mean(x), 3.0, 1e-15);
  EXPECT_NEAR(variance(x), 2.5, 1e-15);
}

}  // namespace
