#pragma once

// Statistical checks of the tree's distributional guarantees, plus an
// idealized tree that draws every split seed from a true PRNG stream.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "rangesum/distributions.hpp"
#include "rangesum/hashing.hpp"
#include "rangesum/prefix.hpp"

namespace rangesum::verify {

inline constexpr double kAlpha = 0.01;

// Harness randomness is std::mt19937_64, unrelated to the hashing module.
using HarnessRng = std::mt19937_64;

struct Report {
  std::string test;
  nlohmann::json params = nlohmann::json::object();
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const Report& r);
nlohmann::json to_json(std::span<const Report> reports);
bool all_pass(std::span<const Report> reports);

// Tree whose split seeds are drawn lazily from a seeded PRNG and memoized
// per (level, index, attempt), so repeated queries are consistent.
class IdealDst {
 public:
  IdealDst(int universe_log, Distribution d, std::uint64_t harness_seed,
           unsigned max_reject_attempts = 100);

  int universe_log() const { return universe_log_; }
  std::uint64_t universe() const { return universe_size(universe_log_); }
  Distribution distribution() const { return dist_; }

  double root_value() const { return root_; }
  double node_value(Prefix p);
  double range_sum(std::uint64_t a, std::uint64_t b);
  double singleton(std::uint64_t i);
  std::size_t stored_seeds() const { return memo_.size(); }

 private:
  struct Key {
    int level;
    std::uint64_t index;
    unsigned attempt;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  SplitSeed seed(int level, std::uint64_t index, unsigned attempt);
  double split_left(int level, std::uint64_t index, double value);

  int universe_log_;
  Distribution dist_;
  unsigned max_attempts_;
  HarnessRng rng_;
  std::unordered_map<Key, SplitSeed, KeyHash> memo_;
  std::shared_ptr<const RwTables> rw_;
  double root_ = 0.0;
};

// Goodness of fit of samples against X^{*n}: KS for continuous laws,
// chi-square against the binomial pmf for RandomWalk.
Report goodness_of_fit(const std::string& test, Distribution d, double n,
                       std::span<const double> samples, double alpha = kAlpha);

// Draws z ~ X^{*2n}, splits it with fresh seeds and tests L and z - L
// against X^{*n} plus their dependence (and, for RW with n <= 4, the exact
// joint pmf). Bonferroni-corrected across the batch.
std::vector<Report> check_split_theorem(Distribution d, std::uint64_t n,
                                        std::size_t trials, std::uint64_t seed,
                                        double alpha = kAlpha);

// S[a, b) over independently seeded trees against X^{*(b-a)}.
Report check_marginal_theorem(Distribution d, int universe_log, std::uint64_t a,
                              std::uint64_t b, HashFamily hash, std::size_t trials,
                              std::uint64_t seed, double alpha = kAlpha);

// Product-moment check for k nodes at one level: the empirical joint moment
// must lie within 4 standard errors of the product of marginal moments.
Report check_kwise_theorem(int k, Distribution d, int universe_log, int level,
                           HashFamily hash, std::size_t trials, std::uint64_t seed);

// The same i.i.d. battery (two singleton marginals, one range marginal,
// pairwise dependence) on the ideal tree and on the FastMixer tree.
std::vector<Report> check_ideal_equivalence(int universe_log, Distribution d,
                                            std::size_t trials, std::uint64_t seed,
                                            double alpha = kAlpha);

// Runs a check; when anything fails, reruns under a second harness seed and
// keeps a test failed only if it failed both times.
std::vector<Report> with_retry(
    const std::function<std::vector<Report>(std::uint64_t)>& run, std::uint64_t seed);

}  // namespace rangesum::verify
