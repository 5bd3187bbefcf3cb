#include "rangesum/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rangesum/errors.hpp"

namespace rangesum::stats {

double ks_statistic(std::span<const double> samples, const Cdf& cdf) {
  if (samples.empty()) throw ArgumentError("KS statistic needs at least one sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0) || n == 0) {
    throw ArgumentError("KS critical value needs alpha in (0, 1) and N >= 1");
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

double ks_pvalue(double statistic, std::size_t n) {
  const double t = statistic * std::sqrt(static_cast<double>(n));
  if (t < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ChiSquareResult chi_square(std::span<const double> observed,
                           std::span<const double> probabilities, double alpha,
                           double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw ArgumentError("chi-square needs matching, nonempty cell lists");
  }
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (total <= 0.0) throw ArgumentError("chi-square needs at least one observation");

  std::vector<double> obs, exp;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += probabilities[i] * total;
    if (e >= min_expected) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }

  ChiSquareResult r;
  r.bins = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] > 0.0) {
      r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
    } else if (obs[i] > 0.0) {
      r.statistic = INFINITY;
    }
  }
  r.dof = static_cast<int>(obs.size()) - 1;
  if (r.dof < 1) {
    r.critical = 0.0;
    r.p_value = r.statistic == 0.0 ? 1.0 : 0.0;
    return r;
  }
  const boost::math::chi_squared chi(r.dof);
  r.critical = boost::math::quantile(boost::math::complement(chi, alpha));
  r.p_value = std::isfinite(r.statistic)
                  ? boost::math::cdf(boost::math::complement(chi, r.statistic))
                  : 0.0;
  return r;
}

ChiSquareResult chi_square_integer(std::span<const double> samples, std::int64_t lo,
                                   std::int64_t hi,
                                   const std::function<double(std::int64_t)>& pmf,
                                   const Cdf& cdf, double alpha) {
  if (hi < lo) throw ArgumentError("empty chi-square window");
  const auto cells = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> observed(cells + 2, 0.0);
  std::vector<double> probs(cells + 2, 0.0);
  probs[0] = cdf(static_cast<double>(lo) - 0.5);
  double inside = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    probs[i + 1] = pmf(lo + static_cast<std::int64_t>(i));
    inside += probs[i + 1];
  }
  probs[cells + 1] = std::max(0.0, 1.0 - probs[0] - inside);
  for (double s : samples) {
    const double r = std::round(s);
    if (r < static_cast<double>(lo)) {
      observed[0] += 1.0;
    } else if (r > static_cast<double>(hi)) {
      observed[cells + 1] += 1.0;
    } else {
      observed[static_cast<std::size_t>(static_cast<std::int64_t>(r) - lo) + 1] += 1.0;
    }
  }
  return chi_square(observed, probs, alpha);
}

double mean(std::span<const double> x) {
  if (x.empty()) throw ArgumentError("mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw ArgumentError("variance needs two samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ArgumentError("correlation needs two equal-length samples");
  }
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal(0.0, 1.0), p);
}

double rw_pmf(std::uint64_t n, std::int64_t x) {
  const auto ni = static_cast<std::int64_t>(n);
  if (x < -ni || x > ni || ((x + ni) & 1) != 0) return 0.0;
  const boost::math::binomial b(static_cast<double>(n), 0.5);
  return boost::math::pdf(b, static_cast<double>((x + ni) / 2));
}

double rw_cdf(std::uint64_t n, double x) {
  const double k = std::floor((x + static_cast<double>(n)) / 2.0);
  if (k < 0.0) return 0.0;
  if (k >= static_cast<double>(n)) return 1.0;
  const boost::math::binomial b(static_cast<double>(n), 0.5);
  return boost::math::cdf(b, k);
}

Cdf theoretical_cdf(Distribution d, double n) {
  if (!(n > 0.0)) throw ArgumentError("convolution power must be positive");
  switch (d) {
    case Distribution::Gaussian:
      return [s = std::sqrt(n)](double x) {
        return 0.5 * std::erfc(-x / (s * std::numbers::sqrt2));
      };
    case Distribution::Cauchy:
      return [n](double x) { return 0.5 + std::atan(x / n) / std::numbers::pi; };
    case Distribution::RandomWalk:
      return [m = static_cast<std::uint64_t>(n)](double x) { return rw_cdf(m, x); };
  }
  throw ArgumentError("unknown distribution");
}

}  // namespace rangesum::stats
