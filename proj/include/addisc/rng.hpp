#pragma once

#include <cstdint>

#include "addisc/common.hpp"

namespace addisc {

// SplitMix64 (Steele, Lea, Flood 2014). The stream is part of the report
// contract: a 128-bit draw is (next() << 64) | next(), high word first.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr u128 next_u128() {
    const u128 hi = next();
    const u128 lo = next();
    return (hi << 64) | lo;
  }

  // Uniform in [0, bound) by rejection; bound > 0.
  constexpr std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace addisc
