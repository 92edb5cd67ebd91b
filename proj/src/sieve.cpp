#include "mertens/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mertens {

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw std::domain_error("isqrt of negative value");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<int128>(r) * r > n) --r;
  while (static_cast<int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<Segment> tile(std::int64_t lo, std::int64_t hi, std::int64_t width) {
  if (lo < 1) throw std::invalid_argument("tile: lo must be >= 1");
  if (width < 1) throw std::invalid_argument("tile: width must be >= 1");
  std::vector<Segment> out;
  for (std::int64_t a = lo; a < hi; a += std::min(width, hi - a)) out.push_back({a, std::min(hi, a + width)});
  return out;
}

PrimeTable base_primes(std::int64_t limit) {
  if (limit < 2) throw std::invalid_argument("base_primes: limit must be >= 2");
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  PrimeTable t;
  t.limit = limit;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    t.primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return t;
}

namespace {

void validate(const Segment& s, const PrimeTable& table) {
  if (s.lo < 1 || s.hi <= s.lo) throw std::invalid_argument("invalid segment");
  std::int64_t need = isqrt(s.hi - 1);
  if (table.limit < need)
    throw std::invalid_argument("insufficient base primes: need primes up to " + std::to_string(need) +
                                ", have up to " + std::to_string(table.limit));
}

std::int64_t first_multiple(std::int64_t m, std::int64_t lo) { return ((lo + m - 1) / m) * m; }

}  // namespace

namespace {

// Sub-block size keeping the product array cache resident.
constexpr std::int64_t kMobiusTile = std::int64_t(1) << 16;

void mobius_tile(std::int64_t lo, std::int64_t hi, const PrimeTable& table, std::int8_t* mu,
                 std::uint64_t* prod) {
  const auto w = static_cast<std::size_t>(hi - lo);
  std::fill(mu, mu + w, std::int8_t{1});
  std::fill(prod, prod + w, std::uint64_t{1});
  const std::int64_t sq = isqrt(hi - 1);
  for (std::int64_t p : table.primes) {
    if (p > sq) break;
    for (std::int64_t m = first_multiple(p, lo); m < hi; m += p) {
      mu[m - lo] = static_cast<std::int8_t>(-mu[m - lo]);
      prod[m - lo] *= static_cast<std::uint64_t>(p);
    }
    const std::int64_t p2 = p * p;
    for (std::int64_t m = first_multiple(p2, lo); m < hi; m += p2) mu[m - lo] = 0;
  }
  // At most one prime factor exceeds sqrt(hi - 1).
  for (std::size_t i = 0; i < w; ++i) {
    if (mu[i] != 0 && prod[i] != static_cast<std::uint64_t>(lo) + i) mu[i] = static_cast<std::int8_t>(-mu[i]);
  }
}

}  // namespace

MobiusBlock sieve_mobius(const Segment& segment, const PrimeTable& table) {
  validate(segment, table);
  MobiusBlock block{segment, std::vector<std::int8_t>(static_cast<std::size_t>(segment.width()))};
  std::vector<std::uint64_t> prod(static_cast<std::size_t>(std::min(segment.width(), kMobiusTile)));
  for (std::int64_t a = segment.lo; a < segment.hi; a += kMobiusTile) {
    std::int64_t b = std::min(segment.hi, a + kMobiusTile);
    mobius_tile(a, b, table, block.values.data() + (a - segment.lo), prod.data());
  }
  return block;
}

MangoldtBlock sieve_mangoldt(const Segment& segment, const PrimeTable& table) {
  validate(segment, table);
  const std::int64_t lo = segment.lo;
  const std::int64_t hi = segment.hi;
  const auto w = static_cast<std::size_t>(hi - lo);
  std::vector<std::uint8_t> composite(w, 0);
  if (lo == 1) composite[0] = 1;
  const std::int64_t sq = isqrt(hi - 1);
  std::vector<PrimePower> powers;
  for (std::int64_t p : table.primes) {
    if (p > sq) break;
    for (std::int64_t m = std::max(p * p, first_multiple(p, lo)); m < hi; m += p) composite[m - lo] = 1;
    // p^k for k >= 2, all below hi since p <= sqrt(hi - 1)
    std::int64_t pk = p * p;
    for (int k = 2;; ++k) {
      if (pk >= lo) powers.push_back({pk, p, k});
      if (pk > (hi - 1) / p) break;
      pk *= p;
    }
  }
  std::vector<PrimePower> primes;
  for (std::size_t i = 0; i < w; ++i) {
    if (!composite[i]) {
      std::int64_t n = lo + static_cast<std::int64_t>(i);
      primes.push_back({n, n, 1});
    }
  }
  std::sort(powers.begin(), powers.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
  MangoldtBlock block{segment, {}};
  block.entries.reserve(primes.size() + powers.size());
  std::merge(primes.begin(), primes.end(), powers.begin(), powers.end(), std::back_inserter(block.entries),
             [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
  return block;
}

}  // namespace mertens
