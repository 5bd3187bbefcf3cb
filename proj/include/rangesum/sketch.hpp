#pragma once

// Range-update L1 / L2 norm sketch: r accumulators, each driven by its own
// dyadic simulation tree (Cauchy for L1, Gaussian for L2).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rangesum/dst.hpp"
#include "rangesum/exact_sum.hpp"

namespace rangesum {

enum class Norm { L1, L2 };

std::string to_string(Norm p);
Norm parse_norm(const std::string& name);  // "l1" / "L1" / "l2" / "L2"

struct RangeUpdate {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  double delta = 0.0;
};

struct SketchConfig {
  Norm p = Norm::L2;
  std::size_t r = 100;
  int universe_log = 20;
  std::uint64_t seed = 0;
  HashFamily hash = HashFamily::fast_mixer();

  void validate() const;
  // Config of the tree behind accumulator j.
  DstConfig dst_config(std::size_t j) const;

  friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

class LpSketch {
 public:
  explicit LpSketch(const SketchConfig& config);

  const SketchConfig& config() const { return config_; }
  std::size_t size() const { return acc_.size(); }
  const Dst& dst(std::size_t j) const { return dsts_.at(j); }

  // A_j += delta * S_j[a, b) for every j.
  void update(std::uint64_t a, std::uint64_t b, double delta);
  // Applies a whole batch with one tree traversal per accumulator. Equal to
  // the sequence of single updates up to floating-point rounding.
  void update_batch(std::span<const RangeUpdate> updates);

  double accumulator(std::size_t j) const { return acc_.at(j).value(); }
  std::vector<double> accumulators() const;

  // (A_1^2 + ... + A_r^2) / r, an unbiased estimate of d2^2.
  double estimate_l2() const;
  // median(|A_1|, ..., |A_r|); midpoint of the central pair for even r.
  double estimate_l1() const;
  // d1 for L1 sketches, sqrt of the d2^2 estimate for L2 sketches.
  double estimate_norm() const;

  void merge_from(const LpSketch& other);
  static LpSketch merge(const LpSketch& s1, const LpSketch& s2);

  std::string export_state() const;
  static LpSketch import_state(std::string_view text);

 private:
  SketchConfig config_;
  std::vector<Dst> dsts_;
  std::vector<ExactSum> acc_;
};

// Piecewise-constant counter vector implied by a batch of range updates,
// with zero-weight pieces dropped.
std::vector<Segment> segments_from_updates(std::span<const RangeUpdate> updates,
                                           int universe_log);

struct Norms {
  double d1 = 0.0;
  double d2 = 0.0;
};

// Ground-truth counters for small universes (U <= 2^24).
class ExactCounters {
 public:
  static constexpr int kMaxUniverseLog = 24;

  explicit ExactCounters(int universe_log);

  void add(std::uint64_t a, std::uint64_t b, double delta);
  void add(std::span<const RangeUpdate> updates);

  int universe_log() const { return universe_log_; }
  // Dense counters via prefix sums of the difference array.
  std::vector<double> sigma() const;
  const std::vector<RangeUpdate>& updates() const { return updates_; }

 private:
  int universe_log_;
  std::vector<RangeUpdate> updates_;
};

Norms oracle_norms(const ExactCounters& counters);

// One update per line: "a b delta". '#' starts a comment.
std::vector<RangeUpdate> parse_stream(std::istream& in);

}  // namespace rangesum
