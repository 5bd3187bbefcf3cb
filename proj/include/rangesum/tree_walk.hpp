#pragma once

// Top-down evaluation over a dyadic simulation tree, generic in the split
// function so that hashed and memoized trees share one traversal.
//
// A split function has the signature `double(int level, uint64_t index,
// double value)` and returns the left child of node (level, index) whose
// value is `value`. The right child is always `value - left`.

#include <cstdint>
#include <span>

#include "rangesum/prefix.hpp"

namespace rangesum {

// One piece of a piecewise-constant weight vector: sigma_i = weight for
// i in [begin, end).
struct Segment {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  double weight = 0.0;
};

namespace detail {

template <class Split>
double walk_node(int universe_log, double root, Prefix p, Split&& split) {
  double v = root;
  for (int l = 0; l < p.level; ++l) {
    const int below = p.level - l;
    const std::uint64_t idx = p.index >> below;
    const double left = split(l, idx, v);
    v = ((p.index >> (below - 1)) & 1) ? v - left : left;
  }
  (void)universe_log;
  return v;
}

// Range sum over [a, b) using at most two splits per level: one frontier
// follows a, the other follows b - 1, and the siblings strictly between
// them are summed into `mid`. A frontier stops as soon as its node is
// entirely inside the range.
template <class Split>
double walk_range(int universe_log, double root, std::uint64_t a,
                  std::uint64_t b, Split&& split,
                  std::uint64_t* splits = nullptr) {
  if (a == b) return 0.0;
  std::uint64_t count = 0;
  std::uint64_t node = 0;
  double value = root;
  int l = 0;
  double left = 0.0;
  // Single frontier while one node contains the whole range.
  for (;; ++l) {
    const int shift = universe_log - l;
    const std::uint64_t start = node << shift;
    const std::uint64_t w = std::uint64_t{1} << shift;
    if (a == start && b == start + w) {
      if (splits) *splits = count;
      return value;
    }
    const std::uint64_t middle = start + w / 2;
    left = split(l, node, value);
    ++count;
    if (b <= middle) {
      node = node << 1;
      value = left;
    } else if (a >= middle) {
      node = (node << 1) | 1;
      value = value - left;
    } else {
      break;
    }
  }
  // Node `node` at level l straddles the midpoint: fork.
  std::uint64_t lo = node << 1, hi = (node << 1) | 1;
  double lo_val = left, hi_val = value - left;
  double mid = 0.0;
  bool lo_done = false, hi_done = false;
  for (++l; l <= universe_log && !(lo_done && hi_done); ++l) {
    const int shift = universe_log - l;
    const std::uint64_t half = (std::uint64_t{1} << shift) >> 1;
    if (!lo_done) {
      const std::uint64_t start = lo << shift;
      if (a == start) {
        lo_done = true;
      } else {
        const double lv = split(l, lo, lo_val);
        ++count;
        if (a >= start + half) {
          lo = (lo << 1) | 1;
          lo_val = lo_val - lv;
        } else {
          mid += lo_val - lv;
          lo = lo << 1;
          lo_val = lv;
        }
      }
    }
    if (!hi_done) {
      const std::uint64_t start = hi << shift;
      if (b == start + (std::uint64_t{1} << shift)) {
        hi_done = true;
      } else {
        const double lv = split(l, hi, hi_val);
        ++count;
        if (b <= start + half) {
          hi = hi << 1;
          hi_val = lv;
        } else {
          mid += lv;
          hi = (hi << 1) | 1;
          hi_val = hi_val - lv;
        }
      }
    }
  }
  if (splits) *splits = count;
  return lo_val + mid + hi_val;
}

template <class Split>
double walk_segments(int universe_log, int level, std::uint64_t node,
                     double value, std::span<const Segment> segs,
                     Split&& split, std::uint64_t* splits) {
  if (segs.empty()) return 0.0;
  const int shift = universe_log - level;
  const std::uint64_t start = node << shift;
  const std::uint64_t end = start + (std::uint64_t{1} << shift);
  if (segs.size() == 1 && segs.front().begin <= start && segs.front().end >= end) {
    return segs.front().weight * value;
  }
  const std::uint64_t middle = start + ((end - start) >> 1);
  const double left = split(level, node, value);
  if (splits) ++*splits;
  std::size_t first_right = 0;  // first segment reaching past middle
  while (first_right < segs.size() && segs[first_right].end <= middle) ++first_right;
  std::size_t left_count = first_right;  // segments starting before middle
  while (left_count < segs.size() && segs[left_count].begin < middle) ++left_count;
  return walk_segments(universe_log, level + 1, node << 1, left,
                       segs.first(left_count), split, splits) +
         walk_segments(universe_log, level + 1, (node << 1) | 1, value - left,
                       segs.subspan(first_right), split, splits);
}

}  // namespace detail
}  // namespace rangesum
