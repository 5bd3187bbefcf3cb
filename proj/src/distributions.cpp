#include "rangesum/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <map>
#include <mutex>

#include "rangesum/prefix.hpp"

namespace rangesum {

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::Gaussian:
      return "gaussian";
    case Distribution::Cauchy:
      return "cauchy";
    case Distribution::RandomWalk:
      return "rw";
  }
  return "unknown";
}

Distribution parse_distribution(const std::string& name) {
  if (name == "gaussian") return Distribution::Gaussian;
  if (name == "cauchy") return Distribution::Cauchy;
  if (name == "rw" || name == "randomwalk") return Distribution::RandomWalk;
  throw ArgumentError("unknown distribution '" + name + "'");
}

namespace {

double log_factorial(std::uint64_t i) {
  return boost::math::lgamma(static_cast<double>(i) + 1.0);
}

constexpr double kLn2 = std::numbers::ln2;

// Tails below this are treated as impossible when building tables.
constexpr double kMinLogPmf = -690.0;  // ~1e-300

}  // namespace

double log_binomial(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return -INFINITY;
  const auto ku = static_cast<std::uint64_t>(k);
  return log_factorial(n) - log_factorial(ku) - log_factorial(n - ku);
}

double rw_log_pmf_exact(std::uint64_t n, std::int64_t x) {
  const auto ni = static_cast<std::int64_t>(n);
  if (x < -ni || x > ni || ((ni - x) & 1) != 0) return -INFINITY;
  return log_binomial(n, (ni - x) / 2) - static_cast<double>(n) * kLn2;
}

// ---------------------------------------------------------------------------

RwPmfTable::RwPmfTable(std::uint64_t n) : n_(n) {
  const auto ni = static_cast<std::int64_t>(n);
  auto w = static_cast<std::int64_t>(std::floor(8.0 * std::sqrt(static_cast<double>(n))));
  w = std::min(w, ni);
  if (((ni - w) & 1) != 0) --w;  // keep the window on the support lattice
  std::vector<std::int64_t> xs;
  for (std::int64_t x = -w; x <= w; x += 2) {
    if (rw_log_pmf_exact(n, x) >= kMinLogPmf) xs.push_back(x);
  }
  lo_ = xs.front();
  log_pmf_.reserve(xs.size());
  for (std::int64_t x : xs) log_pmf_.push_back(rw_log_pmf_exact(n, x));

  double total = 0.0;
  for (double lp : log_pmf_) total += std::exp(lp);
  const double log_total = std::log(total);
  cdf_.reserve(log_pmf_.size());
  double acc = 0.0;
  for (double& lp : log_pmf_) {
    lp -= log_total;
    acc = std::min(acc + std::exp(lp), 1.0);
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;

  guide_.resize(cdf_.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < guide_.size(); ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(guide_.size());
    while (cdf_[k] <= u) ++k;
    guide_[i] = static_cast<std::uint32_t>(k);
  }
}

std::size_t RwPmfTable::memory_bytes() const {
  return sizeof(*this) + log_pmf_.capacity() * sizeof(double) +
         cdf_.capacity() * sizeof(double) +
         guide_.capacity() * sizeof(std::uint32_t);
}

// ---------------------------------------------------------------------------

RwTables::RwTables(int universe_log) : universe_log_(universe_log) {
  if (universe_log < 1 || universe_log > kMaxUniverseLog) {
    throw ArgumentError("random-walk tables need universe_log in [1, " +
                        std::to_string(kMaxUniverseLog) + "], got " +
                        std::to_string(universe_log));
  }
  for (int j = 0; j <= universe_log; ++j) {
    pmf_.emplace_back(std::uint64_t{1} << j);
  }
  for (int j = 0; j <= universe_log && (std::uint64_t{1} << j) <= kTabularMaxN; ++j) {
    const std::uint64_t n = std::uint64_t{1} << j;
    const auto ni = static_cast<std::int64_t>(n);
    Conditional c{n, {}};
    for (std::int64_t z = 0; z <= 2 * ni; z += 2) {
      const double lz = rw_log_pmf_exact(2 * n, z);
      std::vector<double> cdf;
      double acc = 0.0;
      for (std::int64_t x = z - ni; x <= ni; x += 2) {
        acc += std::exp(rw_log_pmf_exact(n, x) + rw_log_pmf_exact(n, z - x) - lz);
        cdf.push_back(acc);
      }
      for (double& v : cdf) v /= acc;
      cdf.back() = 1.0;
      c.cdf.push_back(std::move(cdf));
    }
    cond_.push_back(std::move(c));
  }
  for (int j = 0; j <= universe_log; ++j) {
    const double sd2n = std::sqrt(2.0 * static_cast<double>(std::uint64_t{1} << j));
    auto lim = static_cast<std::int64_t>(std::floor(kRejectionZSigmas * sd2n));
    lim -= lim & 1;
    z_limit_.push_back(lim);
  }
}

std::shared_ptr<const RwTables> RwTables::shared(int universe_log) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const RwTables>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[universe_log];
  if (!slot) slot = std::make_shared<const RwTables>(universe_log);
  return slot;
}

const RwPmfTable& RwTables::pmf(std::uint64_t n) const {
  if (!std::has_single_bit(n) || std::countr_zero(n) > universe_log_) {
    throw ArgumentError("no random-walk table for n = " + std::to_string(n));
  }
  return pmf_[static_cast<std::size_t>(std::countr_zero(n))];
}

std::int64_t RwTables::rejection_z_limit(std::uint64_t n) const {
  pmf(n);
  return z_limit_[static_cast<std::size_t>(std::countr_zero(n))];
}

void RwTables::check_split_args(std::int64_t z, std::uint64_t n) const {
  if (!std::has_single_bit(n) || std::countr_zero(n) >= universe_log_) {
    throw ArgumentError("split width n = " + std::to_string(n) +
                        " is not a power of two below the universe");
  }
  const auto ni = static_cast<std::int64_t>(n);
  if ((z & 1) != 0 || z < -2 * ni || z > 2 * ni) {
    throw ArgumentError("random-walk split needs even z with |z| <= 2n, got z = " +
                        std::to_string(z) + ", n = " + std::to_string(n));
  }
}

std::int64_t RwTables::tabular_split(std::int64_t z, std::uint64_t n,
                                     SplitSeed c) const {
  const auto& cond = cond_[static_cast<std::size_t>(std::countr_zero(n))];
  const std::int64_t az = std::abs(z);
  const auto& cdf = cond.cdf[static_cast<std::size_t>(az / 2)];
  const double u = unit_interval(c);
  const auto k = static_cast<std::int64_t>(
      std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  const std::int64_t x = az - static_cast<std::int64_t>(n) + 2 * k;
  // f(x|z) = f(-x|-z)
  return z < 0 ? -x : x;
}

std::int64_t RwTables::exact_split(std::int64_t z, std::uint64_t n,
                                   SplitSeed c) const {
  const auto ni = static_cast<std::int64_t>(n);
  const auto r = static_cast<std::int64_t>(std::ceil(8.0 * std::sqrt(static_cast<double>(n))));
  std::int64_t lo = std::max({-ni, z - ni, z / 2 - r});
  std::int64_t hi = std::min({ni, z + ni, z / 2 + r});
  if (((ni - lo) & 1) != 0) ++lo;
  if (((ni - hi) & 1) != 0) --hi;
  std::vector<double> logw;
  double peak = -INFINITY;
  for (std::int64_t x = lo; x <= hi; x += 2) {
    const double lw = rw_log_pmf_exact(n, x) + rw_log_pmf_exact(n, z - x);
    logw.push_back(lw);
    peak = std::max(peak, lw);
  }
  std::vector<double> cdf(logw.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < logw.size(); ++k) {
    acc += std::exp(logw[k] - peak);
    cdf[k] = acc;
  }
  const double u = unit_interval(c) * acc;
  const auto k = static_cast<std::int64_t>(
      std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  return lo + 2 * std::min<std::int64_t>(k, static_cast<std::int64_t>(cdf.size()) - 1);
}

double RwTables::max_rejection_ratio(std::uint64_t n) const {
  const auto j = static_cast<std::size_t>(std::countr_zero(n));
  if (!std::has_single_bit(n) || static_cast<int>(j) >= universe_log_) {
    throw ArgumentError("max_rejection_ratio needs 2n <= U");
  }
  const RwPmfTable& tn = pmf_[j];
  const RwPmfTable& t2n = pmf_[j + 1];
  const auto ni = static_cast<std::int64_t>(n);
  const std::int64_t zlim = z_limit_[j];
  double best = 0.0;
  for (std::int64_t z = -zlim; z <= zlim; z += 2) {
    const double lz = t2n.log_pmf(z);
    if (lz == -INFINITY) continue;
    const std::int64_t shift = 2 * ceil_div4(z);
    const std::int64_t lo = std::max(-ni, z - ni);
    const std::int64_t hi = std::min(ni, z + ni);
    for (std::int64_t y = tn.min_value(); y <= tn.max_value(); y += 2) {
      const std::int64_t x = y + shift;
      if (x < lo || x > hi) continue;
      const double lf = tn.log_pmf(x) + tn.log_pmf(z - x) - lz;
      if (lf == -INFINITY) continue;
      best = std::max(best, std::exp(lf - tn.log_pmf(y)));
    }
  }
  return best;
}

std::size_t RwTables::memory_bytes() const {
  std::size_t total = sizeof(*this);
  for (const auto& t : pmf_) total += t.memory_bytes();
  for (const auto& c : cond_) {
    total += sizeof(c);
    for (const auto& v : c.cdf) total += sizeof(v) + v.capacity() * sizeof(double);
  }
  total += z_limit_.capacity() * sizeof(std::int64_t);
  return total;
}

// ---------------------------------------------------------------------------

double root_sample(Distribution d, std::uint64_t universe, SplitSeed c,
                   const RwTables* rw) {
  const auto u = static_cast<double>(universe);
  switch (d) {
    case Distribution::Gaussian:
      return std::sqrt(u) * standard_normal(c);
    case Distribution::Cauchy:
      return u * std::tan(std::numbers::pi * (open_unit_interval(c) - 0.5));
    case Distribution::RandomWalk:
      if (!rw) throw ArgumentError("random-walk root needs tables");
      if (universe_size(rw->universe_log()) != universe) {
        throw ArgumentError("random-walk tables built for another universe");
      }
      return static_cast<double>(rw->root_sample(c));
  }
  throw ArgumentError("unknown distribution");
}

}  // namespace rangesum
