#pragma once

// Property suites shared by the unit tests and the acceptance binary. Each
// returns a verdict with enough detail to locate the first failure.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mertens/certify.hpp"
#include "mertens/identity.hpp"
#include "mertens/summatory.hpp"
#include "oracles.hpp"

namespace props {

struct Verdict {
  bool ok = true;
  std::int64_t cases = 0;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

using mertens::Enclosure;
using oracle::Big;

// ------------------------------------------------------ expression trees

struct Pair {
  Enclosure e;
  Big v;
};

class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

  Pair leaf() {
    switch (pick(4)) {
      case 0: {
        const std::int64_t n = static_cast<std::int64_t>(pick(2001)) - 1000;
        return {Enclosure::integer(n), Big(n)};
      }
      case 1: {
        const std::int64_t a = static_cast<std::int64_t>(pick(199)) - 99;
        const std::int64_t b = static_cast<std::int64_t>(pick(97)) + 1;
        return {Enclosure::ratio(a, b), Big(a) / Big(b)};
      }
      default: {
        std::uniform_real_distribution<double> d(-8.0, 8.0);
        const double x = d(rng_);
        return {Enclosure::point(x), Big(x)};
      }
    }
  }

  Pair tree(int depth) {
    if (depth == 0 || pick(5) == 0) return leaf();
    using boost::multiprecision::abs;
    switch (pick(9)) {
      case 0: {
        Pair a = tree(depth - 1), b = tree(depth - 1);
        return {a.e + b.e, a.v + b.v};
      }
      case 1: {
        Pair a = tree(depth - 1), b = tree(depth - 1);
        return {a.e - b.e, a.v - b.v};
      }
      case 2: {
        Pair a = tree(depth - 1), b = tree(depth - 1);
        if (magnitude(a.e) * magnitude(b.e) > 1e12) return a;
        return {a.e * b.e, a.v * b.v};
      }
      case 3: {
        Pair a = tree(depth - 1), b = tree(depth - 1);
        if (b.e.lo <= 0 && b.e.hi >= 0) return a;
        if (magnitude(a.e) / std::min(std::fabs(b.e.lo), std::fabs(b.e.hi)) > 1e12) return a;
        return {a.e / b.e, a.v / b.v};
      }
      case 4: {
        Pair a = tree(depth - 1);
        return {sqrt(abs(a.e)), boost::multiprecision::sqrt(abs(a.v))};
      }
      case 5: {
        Pair a = tree(depth - 1);
        if (magnitude(a.e) > 1e6) return a;
        return {log(1 + square(a.e)), boost::multiprecision::log(1 + a.v * a.v)};
      }
      case 6: {
        Pair a = tree(depth - 1);
        if (a.e.hi > 30 || a.e.lo < -30) return a;
        return {exp(a.e), boost::multiprecision::exp(a.v)};
      }
      case 7: {
        Pair a = tree(depth - 1);
        if (magnitude(a.e) > 1e6) return a;
        return {log1p(square(a.e)), boost::multiprecision::log1p(a.v * a.v)};
      }
      default: {
        Pair a = tree(depth - 1);
        if (magnitude(a.e) > 1e6) return a;
        return {square(a.e), a.v * a.v};
      }
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  static double magnitude(const Enclosure& e) { return std::max(std::fabs(e.lo), std::fabs(e.hi)); }
  std::mt19937_64 rng_;
};

// Every random tree's enclosure contains the value computed in 166-bit
// binary floating point.
inline Verdict expression_tree_containment(std::int64_t count, std::uint64_t seed) {
  Verdict v;
  TreeGen gen(seed);
  for (std::int64_t i = 0; i < count; ++i) {
    const Pair p = gen.tree(4);
    ++v.cases;
    if (!oracle::contains(p.e, p.v)) {
      v.fail("tree " + std::to_string(i) + ": " + p.e.str() + " misses " + p.v.str(30));
      return v;
    }
  }
  return v;
}

// ------------------------------------------------------ ledger monotonicity

// Step points of the large-x chain, fixed from a reference ledger. The
// iteration picks y = (c L)^2 from model.M, which trades its terms against
// each other; monotonicity is a statement about bounds at fixed y.
struct LargePlan {
  std::vector<Enclosure> y;
  std::vector<std::string> labels;
};

inline LargePlan large_plan(const mertens::HypothesisLedger& L, const mertens::PipelineOptions& opt) {
  const auto lx = mertens::large_x_iteration(L, opt);
  LargePlan p;
  p.y = lx.y_values;
  for (const auto& v : lx.L_values) p.labels.push_back(v ? std::to_string(*v) : "L*");
  return p;
}

// Every certificate bound the pipelines produce, keyed by name.
inline std::vector<std::pair<std::string, Enclosure>> all_bounds(const mertens::HypothesisLedger& L,
                                                                 const mertens::PipelineOptions& opt,
                                                                 const LargePlan& plan) {
  std::vector<std::pair<std::string, Enclosure>> out;
  const auto fr = mertens::first_range_pipeline(L, opt);
  out.emplace_back("first.N", fr.bounds.N.bound);
  out.emplace_back("first.M", fr.bounds.M.bound);
  const auto dy = mertens::dyadic_pipeline(L, opt, Enclosure::ratio(1, opt.reciprocal));
  for (std::size_t i = 0; i < dy.steps.size(); ++i) {
    out.emplace_back("dyadic.N." + dy.a_values[i].str(), dy.steps[i].N.bound);
    out.emplace_back("dyadic.M." + dy.a_values[i].str(), dy.steps[i].M.bound);
  }
  const mertens::LedgerEntry& cdm = L.entry("cdm");
  const std::int64_t L0 =
      mertens::Rational::parse(cdm.weaken == mertens::Weaken::up ? cdm.hi_text : cdm.lo_text).floor();
  Enclosure tail = Enclosure::ratio(1, L0);
  std::vector<std::string> sources = {"cdm", "model.M"};
  for (std::size_t i = 0; i < plan.y.size(); ++i) {
    const auto s = mertens::large_x_step_at(L, plan.y[i], tail, plan.labels[i], opt, sources);
    out.emplace_back("large.N." + plan.labels[i], s.N.bound);
    out.emplace_back("large.M." + plan.labels[i], s.M.bound);
    tail = Enclosure::ratio(1, mertens::reciprocal_floor(s.M.bound.hi));
    sources = {"model.M"};
  }
  return out;
}

// Moving one ledger entry by `permille` in its weakening direction never
// lowers a bound; moving it the other way never raises one.
inline Verdict ledger_monotonicity(const mertens::HypothesisLedger& L, const mertens::PipelineOptions& opt,
                                   const std::vector<std::int64_t>& permille = {1, 10}) {
  Verdict v;
  const LargePlan plan = large_plan(L, opt);
  const auto base = all_bounds(L, opt, plan);
  for (const mertens::LedgerEntry& e : L.entries()) {
    for (std::int64_t pm : permille) {
      for (int dir : {+1, -1}) {
        const bool weaker = dir > 0;
        const std::int64_t sign = (e.weaken == mertens::Weaken::up) == weaker ? +1 : -1;
        const mertens::Rational factor(1000 + sign * pm, 1000);
        const mertens::HypothesisLedger moved = L.scaled(e.key, factor);
        std::vector<std::pair<std::string, Enclosure>> b;
        try {
          b = all_bounds(moved, opt, plan);
        } catch (const std::exception& ex) {
          // A weaker ledger may make a lemma inapplicable; that is a refusal,
          // not a smaller bound. A stronger ledger must still certify.
          if (!weaker) v.fail(e.key + " strengthened: pipeline threw " + ex.what());
          continue;
        }
        for (std::size_t i = 0; i < base.size(); ++i) {
          ++v.cases;
          const bool bad = weaker ? b[i].second.hi < base[i].second.hi : b[i].second.hi > base[i].second.hi;
          if (bad)
            v.fail(e.key + (weaker ? " weakened " : " strengthened ") + std::to_string(pm) + " permille moves " +
                   base[i].first + " from " + base[i].second.str(12) + " to " + b[i].second.str(12));
        }
      }
    }
  }
  return v;
}

// ------------------------------------------------------ trace replay

inline Verdict trace_replay(const std::vector<mertens::BoundCertificate>& certs) {
  Verdict v;
  for (const mertens::BoundCertificate& c : certs) {
    ++v.cases;
    if (!mertens::replay_matches(c)) v.fail(c.name + ": replay differs");
    const mertens::BoundCertificate back = mertens::certificate_from_json(mertens::certificate_json(c));
    if (!mertens::replay_matches(back) || !(back.bound == c.bound) || back.trace.size() != c.trace.size())
      v.fail(c.name + ": JSON round trip differs");
    for (std::size_t i = 0; i < c.trace.size() && i < back.trace.size(); ++i)
      if (!(back.trace[i].value == c.trace[i].value)) v.fail(c.name + ": term " + c.trace[i].term + " differs");
  }
  return v;
}

// ------------------------------------------------------ determinism

inline bool same_series(const mertens::SummatorySeries& a, const mertens::SummatorySeries& b) {
  if (a.checkpoints.size() != b.checkpoints.size()) return false;
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    const auto& p = a.checkpoints[i];
    const auto& q = b.checkpoints[i];
    if (p.x != q.x || p.exact != q.exact || !(p.value == q.value) || p.estimate != q.estimate) return false;
  }
  return true;
}

// Serial and multi-worker scans agree bitwise for every kind and mode.
inline Verdict parallel_serial_determinism(std::int64_t X, std::int64_t stride) {
  using namespace mertens;
  Verdict v;
  for (Kind k : {Kind::M, Kind::psi, Kind::N, Kind::m, Kind::m1, Kind::Q, Kind::lambda_over_k,
                 Kind::lambda_over_sqrt_k, Kind::mu2_over_sqrt, Kind::mu2_over_n}) {
    for (Mode mode : {Mode::rigorous, Mode::fast}) {
      ScanConfig serial;
      serial.mode = mode;
      serial.segment_width = 1 << 14;
      ScanConfig par = serial;
      par.workers = 4;
      ScanConfig wide = serial;
      wide.segment_width = 1 << 20;
      wide.workers = 3;
      const SummatorySeries a = scan(k, X, stride, serial);
      ++v.cases;
      if (!same_series(a, scan(k, X, stride, par)) || !same_series(a, scan(k, X, stride, wide)))
        v.fail(std::string(kind_name(k)) + " " + std::string(mode_name(mode)) + ": parallel scan differs");
    }
  }
  return v;
}

// ------------------------------------------------------ floor identity

// sum_{n<=u} mu(n) floor(u/(kn)) = [u >= k] for random rational u and k,
// against a trial-division mu table.
inline Verdict floor_identity_random(std::int64_t count, std::uint64_t seed, std::int64_t max_u = 20000) {
  Verdict v;
  std::mt19937_64 rng(seed);
  const std::vector<int> mu = oracle::mobius_table(max_u);
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t den = std::uniform_int_distribution<std::int64_t>(1, 50)(rng);
    const std::int64_t num = std::uniform_int_distribution<std::int64_t>(den, max_u * den)(rng);
    const mertens::Rational u(num, den);
    const std::int64_t uf = u.floor();
    const std::int64_t k = std::uniform_int_distribution<std::int64_t>(1, std::max<std::int64_t>(1, 2 * uf))(rng);
    std::int64_t naive = 0;
    for (std::int64_t n = 1; n <= uf; ++n)
      if (mu[static_cast<std::size_t>(n)]) naive += mu[static_cast<std::size_t>(n)] * (u.num / (u.den * k * n));
    const std::int64_t expected = mertens::Rational(k) <= u ? 1 : 0;
    const std::int64_t got = mertens::mobius_floor_sum(u, k);
    ++v.cases;
    if (naive != expected || got != expected || !mertens::mobius_floor_identity_check(u, k))
      v.fail("u = " + u.str() + ", k = " + std::to_string(k) + ": library " + std::to_string(got) + ", oracle " +
             std::to_string(naive) + ", expected " + std::to_string(expected));
  }
  return v;
}

}  // namespace props
