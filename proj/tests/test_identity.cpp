#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/special_functions/zeta.hpp>

#include "mertens/error.hpp"
#include "mertens/identity.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace mertens;
using oracle::Big;

TEST_CASE("hyperbola and Schoenfeld residuals contain zero") {
  for (std::int64_t x : {1000, 10000, 100000}) {
    for (const Rational& y : {Rational(2), Rational(x / 10), Rational(x), Rational(31623, 1000), Rational(7, 2)}) {
      if (Rational(x) < y) continue;
      INFO("x = " << x << ", y = " << y.str());
      const IdentityResidual h = hyperbola_residual(x, y);
      CHECK(h.passed());
      CHECK(h.residual.contains_zero());
      CHECK(h.residual.width() < 1e-9);
      const IdentityResidual s = schoenfeld_residual(x, y);
      CHECK(s.passed());
    }
  }
}

TEST_CASE("hyperbola terms are itemized by name") {
  const IdentityResidual h = hyperbola_residual(100000, Rational(316));
  REQUIRE(h.rhs_terms.size() == 4);
  CHECK(h.rhs_terms[0].first == "lambda_sum");
  CHECK(h.rhs_terms[1].first == "psi_sum");
  CHECK(h.rhs_terms[2].first == "boundary_term");
  CHECK(h.rhs_terms[3].first == "m1_term");
  CHECK_THROWS(hyperbola_residual(100, Rational(101)));
  CHECK_THROWS(hyperbola_residual(100, Rational(1, 2)));
}

TEST_CASE("A(t) takes the values 0 and 1 with period 30") {
  for (std::int64_t n = 1; n < 600; ++n) {
    const std::int64_t a = chebyshev_A(Rational(n));
    CHECK((a == 0 || a == 1));
    CHECK(a == oracle::A(n));
    CHECK(chebyshev_A(Rational(n + 30)) == a);
    // constant on [n, n + 1)
    CHECK(chebyshev_A(Rational(2 * n + 1, 2)) == a);
  }
}

TEST_CASE("alpha and beta agree with quadrature and the zeta formula") {
  const Enclosure alpha = alpha_constant();
  const Enclosure beta = beta_constant();
  CHECK(alpha.width() <= 1e-6);
  CHECK(matches_truncated(alpha, "0.3962"));
  CHECK(matches_truncated(beta, "0.07870"));
  CHECK(beta.hi <= 0.08);
  CHECK(std::fabs(alpha.mid() - static_cast<double>(oracle::step_integral(0.5L))) < 1e-9);
  CHECK(std::fabs(beta.mid() - static_cast<double>(oracle::step_integral(1.0L))) < 1e-9);
  const Big z = boost::math::zeta(Big(1) / 2);
  using boost::multiprecision::sqrt;
  const Big closed = 2 - 2 * (1 - 1 / sqrt(Big(2)) - 1 / sqrt(Big(3)) - 1 / sqrt(Big(5)) + 1 / sqrt(Big(30))) * z;
  CHECK(oracle::contains(alpha, closed));
}

TEST_CASE("Mellin transform of the step weight matches its closed form") {
  for (const Rational& s : {Rational(2), Rational(3, 2), Rational(3), Rational(21, 20)}) {
    INFO("s = " << s.str());
    const Enclosure r = mellin_identity_check(s, 3000);
    CHECK(r.contains_zero());
    const Enclosure crude = step_weight_integral(s, 3000, TailBound::crude);
    const Enclosure periodic = step_weight_integral(s, 3000, TailBound::periodic);
    CHECK(periodic.width() <= crude.width());
    const double ref = static_cast<double>(oracle::step_integral(static_cast<long double>(s.approx())));
    CHECK(periodic.lo <= ref + 1e-12);
    CHECK(ref - 1e-12 <= periodic.hi);
  }
  CHECK_THROWS(mellin_identity_check(Rational(1), 300));
}

TEST_CASE("the mobius floor identity holds for random arguments") {
  const props::Verdict v = props::floor_identity_random(300, 99, 5000);
  INFO(v.detail);
  CHECK(v.ok);
  CHECK(mobius_floor_sum(Rational(10), 11) == 0);
  CHECK(mobius_floor_sum(Rational(11), 11) == 1);
  CHECK(mobius_floor_sum(Rational(21, 2), 10) == 1);
}

TEST_CASE("the N to M gap respects its explicit bound") {
  const GapReport g = mn_gap_scan(1000, 2000000, 10000, {GapBound::Form::derived}, true);
  CHECK(g.report.passed());
  CHECK(g.report.checked == 201);  // 1000 + 10000 j up to 1991000, then X_hi
  CHECK(g.abel_checked == g.report.checked);
  CHECK(g.abel_disagreements == 0);
  CHECK(g.report.max_statistic.hi <= 1.0);
  CHECK_THROWS_AS(mn_gap_scan(1000, 2000, 100), hypothesis_error);
  CHECK_THROWS_AS(mn_gap_scan(100, 2000, 100, {GapBound::Form::derived}), hypothesis_error);
}
