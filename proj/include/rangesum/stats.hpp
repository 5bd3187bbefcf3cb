#pragma once

// Goodness-of-fit and moment statistics used by the verification harness.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rangesum/distributions.hpp"

namespace rangesum::stats {

using Cdf = std::function<double(double)>;

// sup_x |F_N(x) - F(x)|. Throws ArgumentError on an empty sample.
double ks_statistic(std::span<const double> samples, const Cdf& cdf);
// Asymptotic critical value c(alpha) / sqrt(N), c(alpha) = sqrt(-ln(alpha/2) / 2).
double ks_critical(double alpha, std::size_t n);
// Asymptotic Kolmogorov tail Pr[sqrt(N) D > sqrt(N) d].
double ks_pvalue(double statistic, std::size_t n);

struct ChiSquareResult {
  double statistic = 0.0;
  double critical = 0.0;
  double p_value = 1.0;
  int dof = 0;
  std::size_t bins = 0;  // after merging
};

// Pearson chi-square of observed counts against cell probabilities (which
// must sum to 1). Adjacent cells are merged until every expected count is at
// least `min_expected`.
ChiSquareResult chi_square(std::span<const double> observed,
                           std::span<const double> probabilities, double alpha,
                           double min_expected = 5.0);

// Chi-square of integer samples against an integer-valued pmf on
// [lo, hi]; mass outside the window goes to two tail cells.
ChiSquareResult chi_square_integer(std::span<const double> samples, std::int64_t lo,
                                   std::int64_t hi,
                                   const std::function<double(std::int64_t)>& pmf,
                                   const Cdf& cdf, double alpha);

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

double normal_quantile(double p);

// Closed-form law of X^{*n}. RW laws use the binomial distribution of
// (S + n) / 2 ~ Binom(n, 1/2).
Cdf theoretical_cdf(Distribution d, double n);
double rw_pmf(std::uint64_t n, std::int64_t x);
double rw_cdf(std::uint64_t n, double x);

}  // namespace rangesum::stats
