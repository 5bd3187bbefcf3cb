#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rangesum/distributions.hpp"
#include "rangesum/hashing.hpp"
#include "rangesum/prefix.hpp"
#include "rangesum/tree_walk.hpp"

namespace rangesum {

struct DstConfig {
  int universe_log = 20;
  Distribution distribution = Distribution::Gaussian;
  std::uint64_t master_seed = 0;
  HashFamily hash = HashFamily::fast_mixer();
  unsigned max_reject_attempts = 100;

  // Throws ArgumentError on out-of-range fields. Besides [1, 63] for the
  // universe, RandomWalk is limited by its table size and PolyKWise by its
  // 61-bit key space (universe_log <= 54).
  void validate() const;

  friend bool operator==(const DstConfig&, const DstConfig&) = default;
};

/// A dyadic simulation tree: a seed-deterministic, range-summable sequence
/// X_0 .. X_{U-1} of i.i.d. draws from the configured distribution.
///
/// Every query recomputes the path from the root; nothing is cached beyond
/// the root value, so a Dst is immutable and may be shared across threads.
class Dst {
 public:
  explicit Dst(const DstConfig& config);

  const DstConfig& config() const { return config_; }
  int universe_log() const { return config_.universe_log; }
  std::uint64_t universe() const { return universe_size(config_.universe_log); }
  const HashFamilySpec& hash_spec() const { return spec_; }

  double root_value() const { return root_; }
  double node_value(Prefix p) const;

  // S[a, b) in at most 2 log2(U) splits. The overload reports the number
  // of splits performed.
  double range_sum(std::uint64_t a, std::uint64_t b) const;
  double range_sum(std::uint64_t a, std::uint64_t b, std::uint64_t& splits) const;

  double singleton(std::uint64_t i) const;

  // sum_i sigma_i X_i for a piecewise-constant sigma given as sorted,
  // disjoint segments. One traversal shared by all segments.
  double inner_product(std::span<const Segment> segments,
                       std::uint64_t* splits = nullptr) const;

  // Left child of node (level, index) when that node has value `value`.
  double split_left(int level, std::uint64_t index, double value) const;

 private:
  SplitSeed seed(int level, std::uint64_t index, unsigned attempt) const {
    if (spec_.family.kind == HashKind::FastMixer) {
      return detail::fast_node_hash(spec_.words[static_cast<std::size_t>(level)],
                                    index, attempt);
    }
    return detail::poly_node_hash(spec_.level_words(level), index, attempt);
  }

  DstConfig config_;
  HashFamilySpec spec_;
  std::vector<double> half_sd_;  // Gaussian: sqrt(n / 2) per split level
  std::shared_ptr<const RwTables> rw_;
  double root_ = 0.0;
};

// Validates a sorted, disjoint segment list against the universe.
void check_segments(std::span<const Segment> segments, int universe_log);

}  // namespace rangesum
