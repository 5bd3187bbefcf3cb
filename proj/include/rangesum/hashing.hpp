#pragma once

// Sources of the per-node uniform strings that drive every split.
//
// Two families are provided. Both assign one independently seeded function
// to every level of the tree.
//
//   FastMixer      h(index, attempt) = mix64(mix64(index ^ s_l) + (attempt + 1) * G)
//   PolyKWise(k)   h(index, attempt) = mix64(P_l(index * 128 + attempt mod p))
//
// mix64 is the SplitMix64 finalizer, G = 0x9e3779b97f4a7c15, p = 2^61 - 1 and
// P_l is a degree k-1 polynomial over GF(p) with coefficients c[0..k-1]
// evaluated by Horner's rule in storage order (c[0] is the leading
// coefficient): ((c0 * x + c1) * x + c2) ...
//
// Level seeds are the outputs of a SplitMix64 stream started at the master
// seed: state += G, out = mix64(state). A FastMixer level takes one output.
// A PolyKWise level takes k outputs, each shifted right by 3 (61 bits) and
// redrawn if equal to p, and the leading coefficient is redrawn while zero.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rangesum {

using SplitSeed = std::uint64_t;

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
// Attempt indices are packed into 7 bits of the polynomial key.
inline constexpr unsigned kAttemptSlots = 128;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateful SplitMix64 stream; used for every seed expansion in the library.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}
  constexpr std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Arithmetic in GF(2^61 - 1).
constexpr std::uint64_t mersenne_reduce(unsigned __int128 x) {
  std::uint64_t r = static_cast<std::uint64_t>(x & kMersenne61) +
                    static_cast<std::uint64_t>(x >> 61);
  r = (r & kMersenne61) + (r >> 61);
  return r >= kMersenne61 ? r - kMersenne61 : r;
}
constexpr std::uint64_t mersenne_mul(std::uint64_t a, std::uint64_t b) {
  return mersenne_reduce(static_cast<unsigned __int128>(a) * b);
}
constexpr std::uint64_t mersenne_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r >= kMersenne61 ? r - kMersenne61 : r;
}

// Horner evaluation of the polynomial with coefficients `coeffs` (leading
// first) at key mod p. Result is in [0, p).
std::uint64_t poly_hash(std::span<const std::uint64_t> coeffs,
                        std::uint64_t key);

enum class HashKind { FastMixer, PolyKWise };

struct HashFamily {
  HashKind kind = HashKind::FastMixer;
  int k = 0;  // independence degree, PolyKWise only

  static constexpr HashFamily fast_mixer() { return {HashKind::FastMixer, 0}; }
  static constexpr HashFamily poly(int k) { return {HashKind::PolyKWise, k}; }

  // Words of seed material per level.
  int words_per_level() const { return kind == HashKind::FastMixer ? 1 : k; }
  void validate() const;
  std::string name() const;  // "fast", "poly2", "poly4", ...
  static HashFamily parse(const std::string& name);

  friend bool operator==(const HashFamily&, const HashFamily&) = default;
};

struct HashFamilySpec {
  HashFamily family;
  int levels = 0;
  std::vector<std::uint64_t> words;  // levels * family.words_per_level()

  std::span<const std::uint64_t> level_words(int level) const {
    const auto w = static_cast<std::size_t>(family.words_per_level());
    return {words.data() + static_cast<std::size_t>(level) * w, w};
  }

  friend bool operator==(const HashFamilySpec&, const HashFamilySpec&) = default;
};

HashFamilySpec derive_level_seeds(std::uint64_t master_seed, int levels,
                                  HashFamily family);

/// The split seed of node `index` at `level` for rejection attempt
/// `attempt`. Throws ArgumentError for attempt >= 128, a level outside the
/// spec, or (PolyKWise) an index whose packed key would leave GF(p).
SplitSeed hash_node(const HashFamilySpec& spec, int level, std::uint64_t index,
                    unsigned attempt);

namespace detail {

inline SplitSeed fast_node_hash(std::uint64_t level_seed, std::uint64_t index,
                                unsigned attempt) {
  return mix64(mix64(index ^ level_seed) + (attempt + std::uint64_t{1}) * kGolden);
}

inline SplitSeed poly_node_hash(std::span<const std::uint64_t> coeffs,
                                std::uint64_t index, unsigned attempt) {
  return mix64(poly_hash(coeffs, index * kAttemptSlots + attempt));
}

}  // namespace detail

}  // namespace rangesum
