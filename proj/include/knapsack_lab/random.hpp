#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "knapsack_lab/bigint.hpp"

namespace knapsack_lab {

// splitmix64 finalizer, used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded generator. mt19937_64 output is fixed by the standard, and every
// derived quantity below uses only raw 64-bit draws, so a seed reproduces the
// same values on any conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  bool coin() { return (engine_() >> 63) != 0; }

  // Uniform in [0, bound), bound >= 1.
  std::uint64_t below_u64(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorKind::domain, "below_u64: zero bound");
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  // Uniform over all integers with at most `bits` bits.
  BigInt bits(std::size_t bits) {
    BigInt v = 0;
    std::size_t filled = 0;
    while (filled < bits) {
      const std::size_t take = bits - filled < 64 ? bits - filled : 64;
      std::uint64_t word = engine_();
      if (take < 64) word &= (std::uint64_t{1} << take) - 1;
      v |= BigInt(word) << filled;
      filled += take;
    }
    return v;
  }

  // Uniform in [0, bound), bound >= 1.
  BigInt below(const BigInt& bound) {
    if (bound < 1) throw Error(ErrorKind::domain, "below: bound must be positive");
    const std::size_t nbits = bit_length(bound - 1);
    BigInt v;
    do {
      v = bits(nbits);
    } while (v >= bound);
    return v;
  }

  // Uniform in [lo, hi], lo <= hi.
  BigInt between(const BigInt& lo, const BigInt& hi) {
    if (hi < lo) throw Error(ErrorKind::domain, "between: empty range");
    return lo + below(hi - lo + 1);
  }

  // Child stream for trial `index`; independent of how much this stream has been consumed.
  Rng fork(std::uint64_t index) const { return Rng(mix_seed(seed_ ^ mix_seed(index))); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace knapsack_lab
