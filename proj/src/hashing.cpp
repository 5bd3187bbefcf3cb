#include "rangesum/hashing.hpp"

#include "rangesum/errors.hpp"

namespace rangesum {

std::uint64_t poly_hash(std::span<const std::uint64_t> coeffs,
                        std::uint64_t key) {
  const std::uint64_t x = mersenne_reduce(key);
  std::uint64_t acc = 0;
  for (std::uint64_t c : coeffs) acc = mersenne_add(mersenne_mul(acc, x), c);
  return acc;
}

void HashFamily::validate() const {
  if (kind == HashKind::PolyKWise && k < 2) {
    throw ArgumentError("PolyKWise needs k >= 2, got " + std::to_string(k));
  }
}

std::string HashFamily::name() const {
  return kind == HashKind::FastMixer ? "fast" : "poly" + std::to_string(k);
}

HashFamily HashFamily::parse(const std::string& name) {
  if (name == "fast") return fast_mixer();
  if (name.rfind("poly", 0) == 0 && name.size() > 4) {
    int k = 0;
    try {
      k = std::stoi(name.substr(4));
    } catch (const std::exception&) {
      throw ArgumentError("unknown hash family '" + name + "'");
    }
    HashFamily f = poly(k);
    f.validate();
    return f;
  }
  throw ArgumentError("unknown hash family '" + name + "'");
}

HashFamilySpec derive_level_seeds(std::uint64_t master_seed, int levels,
                                  HashFamily family) {
  family.validate();
  if (levels < 1) throw ArgumentError("levels must be >= 1");
  HashFamilySpec spec{family, levels, {}};
  SplitMix64 stream(master_seed);
  if (family.kind == HashKind::FastMixer) {
    spec.words.reserve(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) spec.words.push_back(stream.next());
    return spec;
  }
  spec.words.reserve(static_cast<std::size_t>(levels) *
                     static_cast<std::size_t>(family.k));
  for (int l = 0; l < levels; ++l) {
    for (int j = 0; j < family.k; ++j) {
      std::uint64_t c;
      do {
        c = stream.next() >> 3;
      } while (c == kMersenne61 || (j == 0 && c == 0));
      spec.words.push_back(c);
    }
  }
  return spec;
}

SplitSeed hash_node(const HashFamilySpec& spec, int level, std::uint64_t index,
                    unsigned attempt) {
  if (attempt >= kAttemptSlots) {
    throw ArgumentError("attempt index " + std::to_string(attempt) +
                        " exceeds the 128 key slots");
  }
  if (level < 0 || level >= spec.levels) {
    throw ArgumentError("level " + std::to_string(level) + " outside spec");
  }
  if (spec.family.kind == HashKind::FastMixer) {
    return detail::fast_node_hash(spec.words[static_cast<std::size_t>(level)],
                                  index, attempt);
  }
  if (index >= (std::uint64_t{1} << 54) - 1) {
    throw ArgumentError("node index too large for the GF(2^61-1) key space");
  }
  return detail::poly_node_hash(spec.level_words(level), index, attempt);
}

}  // namespace rangesum
