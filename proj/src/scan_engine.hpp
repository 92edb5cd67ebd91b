#pragma once

#include <algorithm>
#include <future>
#include <vector>

#include "mertens/sieve.hpp"
#include "mertens/summatory.hpp"

namespace mertens::detail {

// Sieves [lo, hi) segment by segment and hands each block to `consume` in
// ascending order. Up to cfg.workers segments are sieved concurrently;
// consumption is always serial, so results do not depend on worker count.
template <class SieveFn, class Consume>
void drive(std::int64_t lo, std::int64_t hi, const ScanConfig& cfg, SieveFn sieve, Consume consume) {
  if (hi <= lo) return;
  const PrimeTable table = base_primes(std::max<std::int64_t>(2, isqrt(hi - 1)));
  const std::int64_t width = std::max<std::int64_t>(1, cfg.segment_width);
  const int workers = std::max(1, cfg.workers);
  std::int64_t a = lo;
  while (a < hi) {
    std::vector<Segment> batch;
    for (int k = 0; k < workers && a < hi; ++k) {
      Segment s{a, std::min(hi, a + width)};
      batch.push_back(s);
      a = s.hi;
    }
    if (batch.size() == 1) {
      consume(sieve(batch.front(), table));
      continue;
    }
    using Block = decltype(sieve(batch.front(), table));
    std::vector<std::future<Block>> pending;
    pending.reserve(batch.size());
    for (const Segment& s : batch)
      pending.push_back(std::async(std::launch::async, [&table, &sieve, s] { return sieve(s, table); }));
    for (auto& f : pending) consume(f.get());
  }
}

template <class Consume>
void drive_mobius(std::int64_t lo, std::int64_t hi, const ScanConfig& cfg, Consume consume) {
  drive(lo, hi, cfg, [](const Segment& s, const PrimeTable& t) { return sieve_mobius(s, t); }, consume);
}

template <class Consume>
void drive_mangoldt(std::int64_t lo, std::int64_t hi, const ScanConfig& cfg, Consume consume) {
  drive(lo, hi, cfg, [](const Segment& s, const PrimeTable& t) { return sieve_mangoldt(s, t); }, consume);
}

}  // namespace mertens::detail
