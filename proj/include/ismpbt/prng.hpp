#pragma once

#include <cstdint>
#include <utility>

namespace ismpbt {

// Splittable pseudo-random generator state: a 64-bit linear congruential step
// with a per-stream additive constant, plus an output scrambler.  Quality is
// adequate for test-case generation; no cryptographic promises are made.
struct RngState {
  std::uint64_t state = 0;
  std::uint64_t stream = 1;  // invariant: always odd

  friend constexpr bool operator==(const RngState&, const RngState&) = default;
};

// Spectrally good 64-bit LCG multiplier.
inline constexpr std::uint64_t kRngMult = 0xd1342543de82ef95ull;

// Golden-ratio constant used when deriving the stream word from a seed.
inline constexpr std::uint64_t kRngGolden = 0x9e3779b97f4a7c15ull;

// Odd constant XORed into the stream when deriving the right split branch.
inline constexpr std::uint64_t kRngStreamXor = 0xd1b54a32d192ed03ull;

// Fixed 64-bit xorshift-multiply finalizer used for seeding and splitting.
constexpr std::uint64_t rng_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Expands a 64-bit seed into an RngState; pure function of the seed.
RngState rng_new(std::uint64_t seed) noexcept;

// Advances one step; returns the new state and an output word derived from
// the new state by a fixed xor-shift of its high bits.
std::pair<RngState, std::uint64_t> rng_next(RngState r) noexcept;

// Splits into two branches whose output sequences are unrelated: the left
// branch keeps the stepped state and original stream, the right branch is
// re-keyed on both words.  Consuming one branch never advances the other.
std::pair<RngState, RngState> rng_split(RngState r) noexcept;

// Uniform draw from the inclusive range [lo, hi] via rejection sampling, so
// there is no modulo bias.  Throws std::invalid_argument if lo > hi.
std::pair<RngState, std::int64_t> rng_range(RngState r, std::int64_t lo, std::int64_t hi);

}  // namespace ismpbt
