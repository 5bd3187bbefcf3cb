#pragma once

#include <vector>

namespace rangesum {

// Exact running sum of doubles kept as non-overlapping partials (Shewchuk);
// value() is the correctly rounded total. The sum is independent of the
// order and grouping of the additions.
class ExactSum {
 public:
  ExactSum() = default;
  explicit ExactSum(double x) { add(x); }

  void add(double x);
  void add(const ExactSum& other);
  double value() const;
  void clear() {
    partials_.clear();
    special_ = 0.0;
  }

 private:
  std::vector<double> partials_;
  double special_ = 0.0;  // inf/nan inputs, summed naively
};

}  // namespace rangesum
