#include "rangesum/prefix.hpp"

#include <bit>
#include <sstream>

#include "rangesum/errors.hpp"

namespace rangesum {

void check_universe_log(int universe_log) {
  if (universe_log < 1 || universe_log > kMaxUniverseLog) {
    throw ArgumentError("universe_log must be in [1, 63], got " +
                        std::to_string(universe_log));
  }
}

void check_range(std::uint64_t a, std::uint64_t b, int universe_log) {
  check_universe_log(universe_log);
  const std::uint64_t u = universe_size(universe_log);
  if (a > b || b > u) {
    throw ArgumentError("invalid range [" + std::to_string(a) + ", " +
                        std::to_string(b) + ") for universe 2^" +
                        std::to_string(universe_log));
  }
}

void Prefix::validate(int universe_log) const {
  check_universe_log(universe_log);
  if (level < 0 || level > universe_log ||
      (level < 64 && index >= (std::uint64_t{1} << level))) {
    throw ArgumentError("prefix (" + std::to_string(level) + ", " +
                        std::to_string(index) + ") outside universe 2^" +
                        std::to_string(universe_log));
  }
}

std::vector<Prefix> dyadic_cover(std::uint64_t a, std::uint64_t b,
                                 int universe_log) {
  check_range(a, b, universe_log);
  std::vector<Prefix> cover;
  while (a < b) {
    // Largest aligned block starting at a that fits in [a, b).
    int k = a == 0 ? universe_log : std::countr_zero(a);
    if (k > universe_log) k = universe_log;
    while ((std::uint64_t{1} << k) > b - a) --k;
    cover.push_back({universe_log - k, a >> k});
    a += std::uint64_t{1} << k;
  }
  return cover;
}

std::string format_cover(const std::vector<Prefix>& cover, int universe_log) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (i) out << ' ';
    out << '[' << cover[i].begin(universe_log) << ','
        << cover[i].end(universe_log) << ')';
  }
  return out.str();
}

}  // namespace rangesum
