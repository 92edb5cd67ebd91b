#pragma once

#include <cstdint>
#include <vector>

#include "mertens/enclosure.hpp"

namespace mertens {

inline constexpr std::int64_t kDefaultSegmentWidth = std::int64_t(1) << 22;

// Half-open integer range [lo, hi), lo >= 1.
struct Segment {
  std::int64_t lo = 1;
  std::int64_t hi = 2;
  std::int64_t width() const { return hi - lo; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// Consecutive segments of at most `width` integers covering [lo, hi).
std::vector<Segment> tile(std::int64_t lo, std::int64_t hi, std::int64_t width);

std::int64_t isqrt(std::int64_t n);

// All primes <= limit. `limit` records how far the list is complete, which
// is what the block sieves need to validate (the largest prime may be
// smaller than the limit).
struct PrimeTable {
  std::int64_t limit = 0;
  std::vector<std::int64_t> primes;
};

PrimeTable base_primes(std::int64_t limit);

struct MobiusBlock {
  Segment segment;
  std::vector<std::int8_t> values;  // mu(lo + i)
  int mu(std::int64_t n) const { return values[static_cast<std::size_t>(n - segment.lo)]; }
};

// n = p^k with p prime, k >= 1; Lambda(n) = log p.
struct PrimePower {
  std::int64_t n = 0;
  std::int64_t p = 0;
  int k = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct MangoldtBlock {
  Segment segment;
  std::vector<PrimePower> entries;  // sorted by n
};

// Both sieves require primes complete up to isqrt(hi - 1) and throw
// std::invalid_argument("insufficient base primes ...") otherwise.
MobiusBlock sieve_mobius(const Segment& segment, const PrimeTable& table);
MangoldtBlock sieve_mangoldt(const Segment& segment, const PrimeTable& table);

}  // namespace mertens
