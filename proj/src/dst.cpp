#include "rangesum/dst.hpp"

#include <cmath>

#include "rangesum/errors.hpp"

namespace rangesum {

void DstConfig::validate() const {
  check_universe_log(universe_log);
  hash.validate();
  if (max_reject_attempts < 1 || max_reject_attempts > kAttemptSlots) {
    throw ArgumentError("max_reject_attempts must be in [1, 128]");
  }
  if (distribution == Distribution::RandomWalk &&
      universe_log > RwTables::kMaxUniverseLog) {
    throw ArgumentError("RandomWalk supports universe_log <= " +
                        std::to_string(RwTables::kMaxUniverseLog));
  }
  if (hash.kind == HashKind::PolyKWise && universe_log > 54) {
    throw ArgumentError("PolyKWise hashing supports universe_log <= 54");
  }
}

Dst::Dst(const DstConfig& config) : config_(config) {
  config_.validate();
  const int L = config_.universe_log;
  spec_ = derive_level_seeds(config_.master_seed, L, config_.hash);
  if (config_.distribution == Distribution::Gaussian) {
    half_sd_.resize(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) {
      const double n = std::ldexp(1.0, L - l - 1);
      half_sd_[static_cast<std::size_t>(l)] = std::sqrt(n * 0.5);
    }
  }
  if (config_.distribution == Distribution::RandomWalk) {
    rw_ = RwTables::shared(L);
  }
  // The root draws from level 0's function at index 1, which no split uses.
  root_ = root_sample(config_.distribution, universe(), seed(0, 1, 0), rw_.get());
}

double Dst::split_left(int level, std::uint64_t index, double value) const {
  switch (config_.distribution) {
    case Distribution::Gaussian:
      return gaussian_split_scaled(value, half_sd_[static_cast<std::size_t>(level)],
                                   seed(level, index, 0));
    case Distribution::Cauchy:
      return cauchy_split(
          value, std::ldexp(1.0, config_.universe_log - level - 1),
          [&](unsigned t) { return seed(level, index, t); },
          config_.max_reject_attempts);
    case Distribution::RandomWalk:
      return static_cast<double>(rw_->split(
          static_cast<std::int64_t>(value),
          std::uint64_t{1} << (config_.universe_log - level - 1),
          [&](unsigned t) { return seed(level, index, t); },
          config_.max_reject_attempts));
  }
  return 0.0;
}

double Dst::node_value(Prefix p) const {
  p.validate(config_.universe_log);
  return detail::walk_node(config_.universe_log, root_, p,
                           [this](int l, std::uint64_t i, double v) {
                             return split_left(l, i, v);
                           });
}

double Dst::range_sum(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t splits = 0;
  return range_sum(a, b, splits);
}

double Dst::range_sum(std::uint64_t a, std::uint64_t b,
                      std::uint64_t& splits) const {
  check_range(a, b, config_.universe_log);
  splits = 0;
  return detail::walk_range(
      config_.universe_log, root_, a, b,
      [this](int l, std::uint64_t i, double v) { return split_left(l, i, v); },
      &splits);
}

double Dst::singleton(std::uint64_t i) const {
  if (i >= universe()) {
    throw ArgumentError("index " + std::to_string(i) + " outside universe");
  }
  return node_value({config_.universe_log, i});
}

void check_segments(std::span<const Segment> segments, int universe_log) {
  const std::uint64_t u = universe_size(universe_log);
  std::uint64_t prev_end = 0;
  for (const Segment& s : segments) {
    if (s.begin >= s.end || s.end > u || s.begin < prev_end) {
      throw ArgumentError("segments must be non-empty, sorted, disjoint and inside the universe");
    }
    prev_end = s.end;
  }
}

double Dst::inner_product(std::span<const Segment> segments,
                          std::uint64_t* splits) const {
  check_segments(segments, config_.universe_log);
  if (splits) *splits = 0;
  return detail::walk_segments(
      config_.universe_log, 0, 0, root_, segments,
      [this](int l, std::uint64_t i, double v) { return split_left(l, i, v); },
      splits);
}

}  // namespace rangesum
