#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rangesum {

inline constexpr int kMaxUniverseLog = 63;

// Number of leaves for a universe of 2^universe_log elements.
constexpr std::uint64_t universe_size(int universe_log) {
  return std::uint64_t{1} << universe_log;
}

/// A node of the dyadic tree over [0, 2^universe_log). Level 0 is the root;
/// node (level, index) covers [index * w, (index + 1) * w) with
/// w = 2^(universe_log - level).
struct Prefix {
  int level = 0;
  std::uint64_t index = 0;

  constexpr Prefix left() const { return {level + 1, index << 1}; }
  constexpr Prefix right() const { return {level + 1, (index << 1) | 1}; }
  constexpr Prefix parent() const { return {level - 1, index >> 1}; }

  constexpr std::uint64_t width(int universe_log) const {
    return std::uint64_t{1} << (universe_log - level);
  }
  constexpr std::uint64_t begin(int universe_log) const {
    return index << (universe_log - level);
  }
  constexpr std::uint64_t end(int universe_log) const {
    return begin(universe_log) + width(universe_log);
  }

  // Throws ArgumentError when the prefix does not name a node of the tree.
  void validate(int universe_log) const;

  friend constexpr bool operator==(const Prefix&, const Prefix&) = default;
};

// Throws ArgumentError unless 0 <= a <= b <= 2^universe_log and
// universe_log is in [1, 63].
void check_range(std::uint64_t a, std::uint64_t b, int universe_log);
void check_universe_log(int universe_log);

/// The unique minimum-cardinality partition of [a, b) into dyadic ranges,
/// in increasing order. At most 2 * universe_log entries.
std::vector<Prefix> dyadic_cover(std::uint64_t a, std::uint64_t b,
                                 int universe_log);

// "[4,8) [8,10) [10,11)"
std::string format_cover(const std::vector<Prefix>& cover, int universe_log);

}  // namespace rangesum
