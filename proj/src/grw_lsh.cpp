#include "rangesum/grw_lsh.hpp"

#include <cmath>
#include <string>

#include "rangesum/errors.hpp"

namespace rangesum {

void GrwLshConfig::validate() const {
  if (m == 0) throw ArgumentError("GRW-LSH needs m >= 1");
  if (!(W > 0.0) || !std::isfinite(W)) throw ArgumentError("bucket width W must be positive");
  DstConfig c;
  c.universe_log = universe_log;
  c.hash = hash;
  c.validate();
}

GrwLsh::GrwLsh(const GrwLshConfig& config) : config_(config) {
  config_.validate();
  SplitMix64 stream(config_.seed);
  dsts_.reserve(config_.m);
  for (std::size_t i = 0; i < config_.m; ++i) {
    DstConfig c;
    c.universe_log = config_.universe_log;
    c.distribution = Distribution::Gaussian;
    c.master_seed = stream.next();
    c.hash = config_.hash;
    dsts_.emplace_back(c);
  }
  offset_ = config_.W * unit_interval(stream.next());
}

double GrwLsh::raw_hash(std::span<const std::uint64_t> s) const {
  if (s.size() != dsts_.size()) {
    throw ArgumentError("point has " + std::to_string(s.size()) +
                        " coordinates, expected m = " + std::to_string(dsts_.size()));
  }
  const std::uint64_t u = universe_size(config_.universe_log);
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] > u) throw ArgumentError("coordinate outside [0, U]");
    if (s[j] > 0) total += dsts_[j].range_sum(0, s[j]);
  }
  return total;
}

std::int64_t bucket_of(double raw, double offset, double width) {
  return static_cast<std::int64_t>(std::floor((raw + offset) / width));
}

std::int64_t GrwLsh::value(std::span<const std::uint64_t> s) const {
  return bucket_of(raw_hash(s), offset_, config_.W);
}

std::vector<CollisionPoint> collision_curve(double W,
                                            std::span<const std::uint64_t> distances,
                                            std::uint64_t trials, std::uint64_t seed,
                                            int universe_log, std::size_t m) {
  if (trials == 0) throw ArgumentError("collision curve needs trials >= 1");
  const std::uint64_t u = universe_size(universe_log);
  std::vector<CollisionPoint> out;
  for (std::uint64_t d : distances) {
    if (d > u) throw ArgumentError("distance must not exceed U");
    SplitMix64 seeds(mix64(seed ^ mix64(d)));
    CollisionPoint pt;
    pt.distance = d;
    pt.trials = trials;
    const std::vector<std::uint64_t> s(m, 0);
    std::vector<std::uint64_t> q(m, 0);
    q[0] = d;
    for (std::uint64_t t = 0; t < trials; ++t) {
      GrwLsh h({m, universe_log, W, seeds.next(), HashFamily::fast_mixer()});
      if (h.value(s) == h.value(q)) ++pt.collisions;
    }
    pt.probability = static_cast<double>(pt.collisions) / static_cast<double>(trials);
    pt.stderr_ = std::sqrt(pt.probability * (1.0 - pt.probability) /
                           static_cast<double>(trials));
    out.push_back(pt);
  }
  return out;
}

}  // namespace rangesum
