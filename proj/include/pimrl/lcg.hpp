#pragma once

// Park-Miller "minimal standard" multiplicative LCG. Cores cannot rely on the
// C library rand(), so every random decision in the project (behavior policy,
// FrozenLake slips, RAN sampling, epsilon-greedy) is driven through this.

#include <cstdint>
#include <numeric>

#include "pimrl/error.hpp"

namespace pimrl {

inline constexpr std::uint64_t kLcgMultiplier = 16807;
inline constexpr std::uint64_t kLcgModulus = 2147483647;  // 2^31 - 1

class RngState {
 public:
  // Reduces the seed modulo 2^31-1; the absorbing state 0 is remapped to 1.
  constexpr explicit RngState(std::uint64_t seed = 1) : x_(seed % kLcgModulus) {
    if (x_ == 0) x_ = 1;
  }

  constexpr std::uint64_t value() const noexcept { return x_; }

  friend constexpr bool operator==(const RngState&, const RngState&) = default;

 private:
  friend constexpr std::uint32_t lcg_next(RngState& rng) noexcept;
  std::uint64_t x_;
};

// x' = 16807 * x mod (2^31 - 1). Returns x'.
constexpr std::uint32_t lcg_next(RngState& rng) noexcept {
  rng.x_ = (kLcgMultiplier * rng.x_) % kLcgModulus;
  return static_cast<std::uint32_t>(rng.x_);
}

// One LCG step reduced modulo n.
constexpr std::uint32_t rand_below(RngState& rng, std::uint32_t n) {
  if (n == 0 || n > kLcgModulus - 1) throw DomainError("rand_below: n must be in [1, 2^31-2]");
  return lcg_next(rng) % n;
}

// 16807^e mod (2^31 - 1): the generator state e steps after state 1.
constexpr std::uint64_t lcg_power(std::uint64_t e) noexcept {
  std::uint64_t result = 1;
  std::uint64_t base = kLcgMultiplier;
  while (e > 0) {
    if (e & 1) result = result * base % kLcgModulus;
    base = base * base % kLcgModulus;
    e >>= 1;
  }
  return result;
}

// Stream `stream` of a run seeded with `seed`. 16807 is a primitive root of
// 2^31-1, so the generator walks one cycle of length 2^31-2; each stream
// starts at its own offset on that cycle, hash(seed) + stream * kStreamJump.
// The jump is coprime with the cycle length, so stream ids below 2^31-2 never
// share a starting state. (Adjacent integer seeds are not used directly:
// states x and 2x or 3x produce visibly correlated low-order residues.)
inline constexpr std::uint64_t kStreamJump = 987'654'323;
static_assert(std::gcd(kStreamJump, kLcgModulus - 1) == 1);

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {  // splitmix64 finalizer
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr RngState derive_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
  constexpr std::uint64_t cycle = kLcgModulus - 1;
  const std::uint64_t offset = (mix64(seed) % cycle + (stream % cycle) * kStreamJump % cycle) % cycle;
  RngState rng(lcg_power(offset));
  lcg_next(rng);
  return rng;
}

}  // namespace pimrl
