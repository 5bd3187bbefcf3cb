#pragma once

// Root sampling and binary split kernels for the three target distributions.
//
// A split takes the value z of a node whose range holds 2n leaves and returns
// the value of its left child, drawn from the conditional law of one half
// given the sum. The right child is z minus that value. All randomness comes
// from a seed stream: a callable `SplitSeed(unsigned attempt)`.

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rangesum/errors.hpp"
#include "rangesum/hashing.hpp"

namespace rangesum {

enum class Distribution { Gaussian, Cauchy, RandomWalk };

std::string to_string(Distribution d);
Distribution parse_distribution(const std::string& name);  // gaussian|cauchy|rw

// ---------------------------------------------------------------------------
// Uniform extraction from a 64-bit split seed.

struct BoxMullerUniforms {
  double u1;  // (hi32 + 1) / 2^32, in (0, 1]
  double u2;  // lo32 / 2^32, in [0, 1)
};

constexpr BoxMullerUniforms box_muller_uniforms(SplitSeed c) {
  return {(static_cast<double>(c >> 32) + 1.0) * 0x1p-32,
          static_cast<double>(c & 0xffffffffULL) * 0x1p-32};
}

inline double box_muller(BoxMullerUniforms u) {
  return std::sqrt(-2.0 * std::log(u.u1)) *
         std::cos(2.0 * std::numbers::pi * u.u2);
}

inline double standard_normal(SplitSeed c) {
  return box_muller(box_muller_uniforms(c));
}

// 53-bit uniforms.
constexpr double unit_interval(SplitSeed c) {
  return static_cast<double>(c >> 11) * 0x1p-53;  // [0, 1)
}
constexpr double open_unit_interval(SplitSeed c) {
  return (static_cast<double>(c >> 11) + 0.5) * 0x1p-53;  // (0, 1)
}

// ---------------------------------------------------------------------------
// Gaussian: L = z/2 + sqrt(n/2) * g.

inline double gaussian_split_scaled(double z, double half_sd, SplitSeed c) {
  return 0.5 * z + half_sd * standard_normal(c);
}

inline double gaussian_split(double z, std::uint64_t n, SplitSeed c) {
  return gaussian_split_scaled(z, std::sqrt(static_cast<double>(n) * 0.5), c);
}

// ---------------------------------------------------------------------------
// Cauchy: rejection sampling from the mixture of Cauchy(0, n) and its
// translate by z, Q = 2.

inline constexpr double kCauchyQ = 2.0;

struct CauchyDraw {
  bool shift;  // top bit: propose Y' + z instead of Y'
  double u;    // next 31 bits, drives Y' = n tan(pi (u - 1/2))
  double v;    // low 32 bits, acceptance test
};

constexpr CauchyDraw cauchy_draw(SplitSeed c) {
  return {(c >> 63) != 0,
          (static_cast<double>((c >> 32) & 0x7fffffffULL) + 0.5) * 0x1p-31,
          static_cast<double>(c & 0xffffffffULL) * 0x1p-32};
}

// f(x|z) / (Q psi(x|z)), computed in units of n so it cannot overflow.
inline double cauchy_accept_probability(double x, double z, double n) {
  const double a = z / n;
  const double d = (x - 0.5 * z) / n;
  return (4.0 + a * a) / (2.0 * (2.0 + 0.5 * a * a + 2.0 * d * d));
}

template <class SeedStream>
double cauchy_split(double z, double n, SeedStream&& seeds,
                    unsigned max_attempts, unsigned* attempts_used = nullptr) {
  for (unsigned t = 0; t < max_attempts; ++t) {
    const CauchyDraw d = cauchy_draw(seeds(t));
    const double y = n * std::tan(std::numbers::pi * (d.u - 0.5));
    const double x = d.shift ? y + z : y;
    if (d.v < cauchy_accept_probability(x, z, n)) {
      if (attempts_used) *attempts_used = t + 1;
      return x;
    }
  }
  throw SamplingError("Cauchy split exhausted " + std::to_string(max_attempts) +
                      " attempts");
}

// ---------------------------------------------------------------------------
// Single-step random walk.

// log C(n, k); -inf outside [0, n].
double log_binomial(std::uint64_t n, std::int64_t k);
// log of the n-step walk pmf at x; -inf off the support.
double rw_log_pmf_exact(std::uint64_t n, std::int64_t x);

/// Truncated pmf and cdf of the n-step walk over its probable window
/// |x| <= 8 sqrt(n), renormalized over the window.
class RwPmfTable {
 public:
  RwPmfTable() = default;
  explicit RwPmfTable(std::uint64_t n);

  std::uint64_t n() const { return n_; }
  std::int64_t min_value() const { return lo_; }
  std::int64_t max_value() const {
    return lo_ + 2 * static_cast<std::int64_t>(cdf_.size()) - 2;
  }
  std::size_t size() const { return cdf_.size(); }
  std::span<const double> cdf() const { return cdf_; }

  bool contains(std::int64_t x) const {
    return x >= lo_ && x <= max_value() && ((x - lo_) & 1) == 0;
  }
  double log_pmf(std::int64_t x) const {
    return contains(x) ? log_pmf_[static_cast<std::size_t>((x - lo_) >> 1)]
                       : -INFINITY;
  }
  double pmf(std::int64_t x) const { return std::exp(log_pmf(x)); }

  // Tabular inverse transform, u in [0, 1).
  std::int64_t sample(double u) const {
    auto k = static_cast<std::size_t>(guide_[static_cast<std::size_t>(
        u * static_cast<double>(guide_.size()))]);
    while (cdf_[k] <= u) ++k;
    return lo_ + 2 * static_cast<std::int64_t>(k);
  }

  std::size_t memory_bytes() const;

 private:
  std::uint64_t n_ = 0;
  std::int64_t lo_ = 0;
  std::vector<double> log_pmf_;
  std::vector<double> cdf_;
  std::vector<std::uint32_t> guide_;
};

/// Precomputed random-walk data for one universe: unconditional tables for
/// every n = 2^j <= U and, for n <= 128, the conditional split cdf for every
/// even z in [0, 2n].
class RwTables {
 public:
  static constexpr std::uint64_t kTabularMaxN = 128;
  static constexpr double kQ = 1.47;
  // Rejection sampling handles |z| <= 6 sqrt(2n); beyond that an exact
  // inverse transform is computed on the fly.
  static constexpr double kRejectionZSigmas = 6.0;
  static constexpr int kMaxUniverseLog = 36;

  explicit RwTables(int universe_log);

  // Process-wide cache; tables are immutable once built.
  static std::shared_ptr<const RwTables> shared(int universe_log);

  int universe_log() const { return universe_log_; }
  const RwPmfTable& pmf(std::uint64_t n) const;

  std::int64_t root_sample(SplitSeed c) const {
    return pmf_.back().sample(unit_interval(c));
  }

  std::int64_t rejection_z_limit(std::uint64_t n) const;

  template <class SeedStream>
  std::int64_t split(std::int64_t z, std::uint64_t n, SeedStream&& seeds,
                     unsigned max_attempts,
                     unsigned* attempts_used = nullptr) const;

  // max over probable (x, z) of f(x|z) / psi(x|z); needs 2n <= U.
  double max_rejection_ratio(std::uint64_t n) const;

  std::size_t memory_bytes() const;

 private:
  struct Conditional {
    std::uint64_t n;
    std::vector<std::vector<double>> cdf;  // indexed by z / 2, z >= 0
  };

  void check_split_args(std::int64_t z, std::uint64_t n) const;
  std::int64_t tabular_split(std::int64_t z, std::uint64_t n, SplitSeed c) const;
  std::int64_t exact_split(std::int64_t z, std::uint64_t n, SplitSeed c) const;

  int universe_log_;
  std::vector<RwPmfTable> pmf_;       // index j holds n = 2^j
  std::vector<Conditional> cond_;     // index j holds n = 2^j, j <= 7
  std::vector<std::int64_t> z_limit_; // index j
};

constexpr std::int64_t ceil_div4(std::int64_t z) {
  return z >= 0 ? (z + 3) / 4 : -((-z) / 4);
}

template <class SeedStream>
std::int64_t RwTables::split(std::int64_t z, std::uint64_t n,
                             SeedStream&& seeds, unsigned max_attempts,
                             unsigned* attempts_used) const {
  check_split_args(z, n);
  if (n <= kTabularMaxN) {
    if (attempts_used) *attempts_used = 1;
    return tabular_split(z, n, seeds(0u));
  }
  const auto j = static_cast<std::size_t>(std::countr_zero(n));
  if (std::abs(z) > z_limit_[j]) {
    if (attempts_used) *attempts_used = 1;
    return exact_split(z, n, seeds(0u));
  }
  const RwPmfTable& tn = pmf_[j];
  const double lz = pmf_[j + 1].log_pmf(z);
  const auto ni = static_cast<std::int64_t>(n);
  const std::int64_t lo = std::max(-ni, z - ni);
  const std::int64_t hi = std::min(ni, z + ni);
  const std::int64_t shift = 2 * ceil_div4(z);
  for (unsigned t = 0; t < max_attempts; ++t) {
    const SplitSeed c = seeds(t);
    const double u = static_cast<double>(c >> 32) * 0x1p-32;
    const double v = static_cast<double>(c & 0xffffffffULL) * 0x1p-32;
    const std::int64_t proposal = tn.sample(u);
    const std::int64_t x = proposal + shift;
    if (x < lo || x > hi) continue;
    const double lf = tn.log_pmf(x) + tn.log_pmf(z - x) - lz;
    if (lf == -INFINITY) continue;
    const double ratio = std::exp(lf - tn.log_pmf(proposal));
    assert(ratio <= kQ * (1.0 + 1e-9));
    if (v * kQ < ratio) {
      if (attempts_used) *attempts_used = t + 1;
      return x;
    }
  }
  throw SamplingError("random-walk split exhausted " +
                      std::to_string(max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------

/// The root S[0, U) for a universe of `universe` leaves. `rw` is required
/// for RandomWalk.
double root_sample(Distribution d, std::uint64_t universe, SplitSeed c,
                   const RwTables* rw = nullptr);

}  // namespace rangesum
