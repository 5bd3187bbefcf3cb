#pragma once

// Timing helpers on a monotonic clock. Each measurement starts with an
// untimed warmup pass.

#include <cstdint>
#include <vector>

#include "rangesum/distributions.hpp"

namespace rangesum::bench {

struct SplitTiming {
  Distribution distribution = Distribution::Gaussian;
  int universe_log = 20;
  std::uint64_t splits_per_batch = 0;
  double ns_per_split = 0.0;  // median over batches
  std::vector<double> batches;
};

// Random range-sum queries on a FastMixer tree until each batch has done at
// least `min_splits` splits.
SplitTiming time_splits(Distribution d, int universe_log, std::uint64_t min_splits,
                        std::uint64_t seed);

// The three distributions on identical queries, timed in interleaved rounds so
// that host noise hits all of them alike. ns_per_split is the fastest round.
std::vector<SplitTiming> compare_splits(int universe_log, std::uint64_t min_splits,
                                        std::uint64_t seed, int rounds = 7);

struct RangeTiming {
  int universe_log = 0;
  double ns_per_range_sum = 0.0;
};

std::vector<RangeTiming> time_range_sums(Distribution d, const std::vector<int>& ulogs,
                                         std::uint64_t queries, std::uint64_t seed);

}  // namespace rangesum::bench
