#pragma once

// Gaussian-random-walk LSH for L1 distance on integer vectors. Coordinate j
// is mapped to the walk position S_j[0, s_j) of its own Gaussian tree, so
// f(s) - f(q) ~ N(0, |s - q|_1).

#include <cstdint>
#include <span>
#include <vector>

#include "rangesum/dst.hpp"

namespace rangesum {

struct GrwLshConfig {
  std::size_t m = 1;
  int universe_log = 20;
  double W = 1.0;
  std::uint64_t seed = 0;
  HashFamily hash = HashFamily::fast_mixer();

  void validate() const;
};

class GrwLsh {
 public:
  explicit GrwLsh(const GrwLshConfig& config);

  const GrwLshConfig& config() const { return config_; }
  double offset() const { return offset_; }

  // sum_j S_j[0, s_j); needs s.size() == m and every s_j in [0, U].
  double raw_hash(std::span<const std::uint64_t> s) const;
  // floor((raw_hash(s) + B) / W)
  std::int64_t value(std::span<const std::uint64_t> s) const;

 private:
  GrwLshConfig config_;
  std::vector<Dst> dsts_;
  double offset_ = 0.0;  // B in [0, W)
};

std::int64_t bucket_of(double raw, double offset, double width);

struct CollisionPoint {
  std::uint64_t distance = 0;
  std::uint64_t trials = 0;
  std::uint64_t collisions = 0;
  double probability = 0.0;
  double stderr_ = 0.0;  // binomial standard error
};

// Empirical Pr[g(s) = g(q)] where s = 0 and q differs from s by D in the
// first coordinate; one fresh function (seeds and B) per trial.
std::vector<CollisionPoint> collision_curve(double W,
                                            std::span<const std::uint64_t> distances,
                                            std::uint64_t trials, std::uint64_t seed,
                                            int universe_log = 20, std::size_t m = 1);

}  // namespace rangesum
