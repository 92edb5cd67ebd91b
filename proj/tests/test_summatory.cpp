#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mertens/error.hpp"
#include "mertens/summatory.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace mertens;
using oracle::Big;
using oracle::contains;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mertens_test_" + name)).string();
}

// Reference running sums in 166-bit floating point.
struct Naive {
  std::vector<int> mu;
  std::vector<std::int64_t> M;
  explicit Naive(std::int64_t X) : mu(oracle::mobius_table(X)), M(static_cast<std::size_t>(X + 1), 0) {
    for (std::int64_t n = 1; n <= X; ++n) M[n] = M[n - 1] + mu[n];
  }
  Big sum(Kind k, std::int64_t x) const {
    using boost::multiprecision::log;
    using boost::multiprecision::sqrt;
    Big s = 0;
    for (std::int64_t n = 1; n <= x; ++n) {
      const Big N(n);
      const std::int64_t p = oracle::prime_power_base(n);
      switch (k) {
        case Kind::N: s += mu[n] * log(N); break;
        case Kind::m: s += Big(mu[n]) / N; break;
        case Kind::m1: s += Big(mu[n]) / N - Big(mu[n]) / Big(x); break;
        case Kind::psi: if (p) s += log(Big(p)); break;
        case Kind::lambda_over_k: if (p) s += log(Big(p)) / N; break;
        case Kind::lambda_over_sqrt_k: if (p) s += log(Big(p)) / sqrt(N); break;
        case Kind::mu2_over_sqrt: if (mu[n]) s += 1 / sqrt(N); break;
        case Kind::mu2_over_n: if (mu[n]) s += 1 / N; break;
        case Kind::absM_log_weight: if (n < x) s += std::llabs(M[n]) * boost::multiprecision::log1p(1 / N); break;
        default: break;
      }
    }
    return s;
  }
};

}  // namespace

TEST_CASE("M and Q scans are exact") {
  const Naive ref(100000);
  const SummatorySeries s = mertens_scan(100000, 1000);
  REQUIRE(s.checkpoints.size() == 100);
  for (const Checkpoint& cp : s.checkpoints) CHECK(cp.exact == ref.M[cp.x]);
  const SummatorySeries q = scan(Kind::Q, 99999, 1000);
  CHECK(q.final().x == 99999);
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= 99999; ++n) count += ref.mu[n] != 0;
  CHECK(q.final().exact == count);
}

TEST_CASE("real-valued kinds enclose the reference sums") {
  const Naive ref(3000);
  for (Kind k : {Kind::N, Kind::m, Kind::m1, Kind::psi, Kind::lambda_over_k, Kind::lambda_over_sqrt_k,
                 Kind::mu2_over_sqrt, Kind::mu2_over_n}) {
    const SummatorySeries s = scan(k, 3000, 700);
    for (const Checkpoint& cp : s.checkpoints) {
      INFO(kind_name(k) << " at " << cp.x);
      CHECK(contains(cp.value, ref.sum(k, cp.x)));
    }
    CHECK(contains(weighted_sum(k, 2999), ref.sum(k, 2999)));
  }
  CHECK(contains(weighted_sum(Kind::absM_log_weight, 33), ref.sum(Kind::absM_log_weight, 33)));
  CHECK(contains(m1_at(2500), ref.sum(Kind::m1, 2500)));
}

TEST_CASE("psi(10) = log 2520") {
  const Enclosure p = psi_scan(10, 10).final().value;
  CHECK(matches_truncated(p, "7.8320"));
  CHECK(contains(p, boost::multiprecision::log(Big(2520))));
  CHECK(p.width() < 1e-12);
}

TEST_CASE("fast mode agrees with rigorous mode within its reported error") {
  ScanConfig fast;
  fast.mode = Mode::fast;
  for (Kind k : {Kind::N, Kind::m1, Kind::psi, Kind::mu2_over_sqrt}) {
    const auto a = scan(k, 200000, 50000, fast);
    const auto b = scan(k, 200000, 50000);
    CHECK(a.mode == Mode::fast);
    for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
      CHECK(a.checkpoints[i].value.lo <= b.checkpoints[i].value.hi);
      CHECK(b.checkpoints[i].value.lo <= a.checkpoints[i].value.hi);
    }
  }
  // integer kinds ignore the fast request
  CHECK(scan(Kind::M, 1000, 100, fast).mode == Mode::rigorous);
}

TEST_CASE("parallel scans equal serial scans bitwise") {
  const props::Verdict v = props::parallel_serial_determinism(300000, 30000);
  INFO(v.detail);
  CHECK(v.ok);
}

TEST_CASE("a resumed scan equals an uninterrupted one") {
  const std::string path = temp_path("resume.log");
  for (Kind k : {Kind::M, Kind::psi, Kind::m1}) {
    std::filesystem::remove(path);
    const SummatorySeries whole = scan(k, 1000000, 10000);
    scan(k, 400000, 10000, {}, path);
    const SummatorySeries resumed = scan(k, 1000000, 10000, {}, path);
    CHECK(props::same_series(whole, resumed));

    // a torn final line is dropped, the scan still matches
    {
      std::ifstream in(path);
      std::stringstream ss;
      ss << in.rdbuf();
      std::string text = ss.str();
      text.resize(text.size() - 7);
      std::ofstream(path, std::ios::trunc) << text;
    }
    CHECK(props::same_series(whole, scan(k, 1000000, 10000, {}, path)));
  }
  std::filesystem::remove(path);
}

TEST_CASE("an incompatible checkpoint is an error, not a restart") {
  const std::string path = temp_path("incompatible.log");
  std::filesystem::remove(path);
  scan(Kind::M, 50000, 1000, {}, path);
  CHECK_THROWS_AS(scan(Kind::M, 50000, 2000, {}, path), checkpoint_error);
  CHECK_THROWS_AS(scan(Kind::psi, 50000, 1000, {}, path), checkpoint_error);
  std::filesystem::remove(path);
}

TEST_CASE("the scan ceiling is enforced") {
  ScanConfig c;
  c.ceiling = 1000;
  CHECK_THROWS_AS(mertens_scan(1001, 10, c), resource_error);
  CHECK_NOTHROW(mertens_scan(1000, 10, c));
}

TEST_CASE("square-root models hold at desk scale") {
  const ScanReport m = verify_root_model(RootModel::mertens(), 33, 2000000);
  CHECK(m.passed());
  CHECK(m.checked == 2000000 - 33 + 1);
  CHECK(m.max_statistic.hi <= 0.571);
  const ScanReport p = verify_root_model(RootModel::psi(), 11, 2000000);
  CHECK(p.passed());
  CHECK(p.inconclusive_count == 0);
  const ScanReport q = verify_root_model(RootModel::m1().with_range(5e6, 1e16), 5000000, 5020000);
  CHECK(q.passed());
}

TEST_CASE("the M model fails below its range") {
  const ScanReport r = verify_root_model(RootModel::mertens().with_range(1, 32), 1, 32);
  CHECK_FALSE(r.passed());
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations.front() == 1);
  CHECK_THROWS_AS(verify_root_model(RootModel::mertens(), 1, 32), hypothesis_error);
}

TEST_CASE("Lambda sums stay inside their envelopes") {
  CHECK(lambda_sqrt_envelope_check(11, 300000).passed());
  CHECK(lambda_over_k_check(300, 300000).passed());
  // log y - 1 is below the sum from some point on
  CHECK_FALSE(lambda_over_k_check(300, 300000, Rational(1)).passed());
  EnvelopeConstants tight;
  tight.log_coefficient = Rational(1, 100);
  tight.upper_offset = Rational(-5, 2);  // the difference reaches -1.96 on this range
  CHECK_FALSE(lambda_sqrt_envelope_check(11, 300000, {}, tight).passed());
}

TEST_CASE("threshold scan finds the last crossing") {
  const Naive ref(1000000);
  for (std::int64_t R : {10, 1000, 160383}) {
    std::int64_t last = 0;
    for (std::int64_t n = 1; n <= 1000000; ++n)
      if (static_cast<__int128>(std::llabs(ref.M[n])) * R > n) last = n;
    const ThresholdResult t = threshold_scan(R, 1000000, 100000);
    REQUIRE(t.last_crossing.has_value());
    CHECK(*t.last_crossing == last);
  }
  CHECK_FALSE(threshold_scan(1, 200000, 10000).last_crossing.has_value());

  const std::string path = temp_path("threshold.log");
  std::filesystem::remove(path);
  const ThresholdResult whole = threshold_scan(160383, 1000000, 10000);
  threshold_scan(160383, 300000, 10000, {}, path);
  const ThresholdResult resumed = threshold_scan(160383, 1000000, 10000, {}, path);
  CHECK(resumed.last_crossing == whole.last_crossing);
  CHECK(resumed.crossings == whole.crossings);
  std::filesystem::remove(path);
}
