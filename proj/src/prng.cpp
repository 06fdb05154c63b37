#include "ismpbt/prng.hpp"

#include <stdexcept>

namespace ismpbt {

namespace {

constexpr std::uint64_t scramble(std::uint64_t s) noexcept { return s ^ (s >> 32); }

constexpr std::uint64_t step(const RngState& r) noexcept {
  return r.state * kRngMult + r.stream;
}

}  // namespace

RngState rng_new(std::uint64_t seed) noexcept {
  return RngState{rng_mix(seed), rng_mix(seed + kRngGolden) | 1};
}

std::pair<RngState, std::uint64_t> rng_next(RngState r) noexcept {
  r.state = step(r);
  return {r, scramble(r.state)};
}

std::pair<RngState, RngState> rng_split(RngState r) noexcept {
  const std::uint64_t advanced = step(r);
  RngState left{advanced, r.stream};
  RngState right{rng_mix(advanced), (r.stream ^ kRngStreamXor) | 1};
  return {left, right};
}

std::pair<RngState, std::int64_t> rng_range(RngState r, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("rng_range: lo > hi");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) {  // the full 64-bit range: every output is in range
    auto [r2, x] = rng_next(r);
    return {r2, static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x)};
  }
  const std::uint64_t threshold = (0 - span) % span;  // 2^64 mod span
  for (;;) {
    auto [r2, x] = rng_next(r);
    r = r2;
    if (x >= threshold) {
      return {r, static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % span)};
    }
  }
}

}  // namespace ismpbt
