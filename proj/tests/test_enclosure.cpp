#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <random>

#include "mertens/enclosure.hpp"
#include "mertens/rational.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace mertens;
using oracle::Big;
using oracle::contains;

TEST_CASE("directed roundings bracket the exact result") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-40, 40);
  for (int i = 0; i < 20000; ++i) {
    const double a = std::ldexp(mant(rng), ex(rng));
    double b = std::ldexp(mant(rng), ex(rng));
    if (b == 0) b = 1;
    const Big A(a), B(b);
    CHECK(Big(rounding::add_down(a, b)) <= A + B);
    CHECK(Big(rounding::add_up(a, b)) >= A + B);
    CHECK(Big(rounding::sub_down(a, b)) <= A - B);
    CHECK(Big(rounding::sub_up(a, b)) >= A - B);
    CHECK(Big(rounding::mul_down(a, b)) <= A * B);
    CHECK(Big(rounding::mul_up(a, b)) >= A * B);
    CHECK(Big(rounding::div_down(a, b)) <= A / B);
    CHECK(Big(rounding::div_up(a, b)) >= A / B);
    const double c = std::fabs(a);
    CHECK(Big(rounding::sqrt_down(c)) <= boost::multiprecision::sqrt(Big(c)));
    CHECK(Big(rounding::sqrt_up(c)) >= boost::multiprecision::sqrt(Big(c)));
    // never more than one ulp outward
    CHECK(rounding::add_up(a, b) <= std::nextafter(a + b, INFINITY));
  }
}

TEST_CASE("exact operations stay points") {
  CHECK((Enclosure::integer(3) + Enclosure::integer(4)).is_point());
  CHECK((Enclosure::point(0.5) * Enclosure::point(0.25)).is_point());
  CHECK(log(Enclosure::integer(1)) == Enclosure::integer(0));
  CHECK(exp(Enclosure::integer(0)) == Enclosure::integer(1));
  CHECK(sqrt(Enclosure::integer(49)) == Enclosure::integer(7));
}

TEST_CASE("named constructors contain their exact values") {
  CHECK(contains(Enclosure::decimal("0.1"), Big(1) / 10));
  CHECK(contains(Enclosure::decimal("8.6386e-8"), Big(86386) / Big("1e12")));
  CHECK(contains(Enclosure::decimal("-1.19"), Big(-119) / 100));
  CHECK(contains(Enclosure::ratio(1, 3), Big(1) / 3));
  CHECK(contains(Enclosure::ratio(-22, 7), Big(-22) / 7));
  CHECK(contains(Enclosure::rational(Rational(571, 1000)), Big(571) / 1000));
  const std::int64_t big = (std::int64_t(1) << 53) + 1;
  CHECK(contains(Enclosure::integer(big), Big(big)));
  CHECK_FALSE(Enclosure::integer(big).is_point());
  CHECK(Enclosure::decimal("0.5").is_point());
}

TEST_CASE("transcendental functions contain the reference values") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(1e-6, 1e6);
  for (int i = 0; i < 5000; ++i) {
    const double x = d(rng);
    CHECK(contains(log(Enclosure::point(x)), boost::multiprecision::log(Big(x))));
    CHECK(contains(log1p(Enclosure::point(x)), boost::multiprecision::log1p(Big(x))));
    CHECK(contains(sqrt(Enclosure::point(x)), boost::multiprecision::sqrt(Big(x))));
    const double y = std::fmod(x, 60.0) - 30.0;
    CHECK(contains(exp(Enclosure::point(y)), boost::multiprecision::exp(Big(y))));
  }
  CHECK_THROWS_AS(log(Enclosure::integer(0)), std::domain_error);
  CHECK_THROWS_AS(sqrt(Enclosure(-1.0, 1.0)), std::domain_error);
}

TEST_CASE("pow agrees with the reference for rational exponents") {
  for (const auto& [base, num, den] : std::vector<std::tuple<double, int, int>>{
           {2.0, 1, 2}, {30.0, -1, 2}, {7.5, 3, 2}, {1e10, -3, 4}, {3.0, 21, 20}, {0.1, -2, 1}}) {
    const Big ref = boost::multiprecision::pow(Big(base), Big(num) / Big(den));
    CHECK(contains(pow(Enclosure::point(base), Rational(num, den)), ref));
  }
}

TEST_CASE("random expression trees are enclosed") {
  const props::Verdict v = props::expression_tree_containment(20000, 2024);
  INFO(v.detail);
  CHECK(v.ok);
  CHECK(v.cases == 20000);
}

TEST_CASE("exact sums do not depend on the order of the terms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Enclosure> terms;
  Big ref = 0;
  for (int i = 0; i < 5000; ++i) {
    const double x = d(rng) / (1 + i);
    terms.push_back(log1p(Enclosure::point(std::fabs(x))));
    ref += boost::multiprecision::log1p(Big(std::fabs(x)));
  }
  ExactSum a;
  for (const auto& t : terms) a.add(t);
  std::shuffle(terms.begin(), terms.end(), rng);
  ExactSum b, c;
  for (std::size_t i = 0; i < terms.size(); ++i) (i % 2 ? b : c).add(terms[i]);
  c += b;
  CHECK(a.value() == c.value());
  CHECK(a.raw_lo() == c.raw_lo());
  CHECK(contains(a.value(), ref));
  CHECK(a.value().width() < 1e-9);
}

TEST_CASE("constants contain their reference values") {
  using boost::math::constants::euler;
  using boost::math::constants::pi;
  const ConstantTable& k = constants();
  CHECK(contains(k.pi, pi<Big>()));
  CHECK(contains(k.pi_squared, pi<Big>() * pi<Big>()));
  CHECK(contains(k.euler_gamma, euler<Big>()));
  const Big z = boost::math::zeta(Big(1) / 2);
  CHECK(contains(k.zeta_half, z));
  for (const Enclosure& e : {k.pi, k.pi_squared, k.euler_gamma, k.zeta_half}) CHECK(e.width() <= 1e-9);
  CHECK(contains(zeta_real(Rational(2)), pi<Big>() * pi<Big>() / 6));
  CHECK(contains(zeta_real(Rational(3, 2)), boost::math::zeta(Big(3) / 2)));
  CHECK(contains(zeta_real(Rational(21, 20)), boost::math::zeta(Big(21) / 20)));
  CHECK_THROWS_AS(zeta_real(Rational(101, 100)), std::domain_error);
}

TEST_CASE("printed-value cells") {
  CHECK(matches_truncated(Enclosure(0.39624, 0.39625), "0.3962..."));
  CHECK_FALSE(matches_truncated(Enclosure(0.39631, 0.39632), "0.3962"));
  CHECK(matches_rounded(Enclosure::decimal("8386657011.6"), "8.3867e9"));
  CHECK_FALSE(matches_rounded(Enclosure::decimal("8386757011.6"), "8.3867e9"));
  CHECK(round_up_significant(5.2525e-8, 2) == "5.3e-8");
  CHECK(round_up_significant(5.3e-8, 2) == "5.3e-8");
}

TEST_CASE("certified reciprocal floors") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(1e-7, 1e-3);
  for (int i = 0; i < 20000; ++i) {
    const double u = d(rng);
    const std::int64_t L = reciprocal_floor(u);
    CHECK(Big(L) * Big(u) <= 1);
    CHECK(Big(L + 1) * Big(u) > 1);
  }
  CHECK(reciprocal_floor(0.25) == 4);
  CHECK_THROWS(reciprocal_floor(0.0));
}

TEST_CASE("rationals parse decimal and scientific literals exactly") {
  CHECK(Rational::parse("1.3e9") == Rational(1300000000));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("0.571") == Rational(571, 1000));
  CHECK(Rational::parse("2e-3") == Rational(1, 500));
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(parse_integer("2160535") == 2160535);
  CHECK(parse_integer("8.4e9") == 8400000000LL);
  CHECK_THROWS_AS(parse_integer("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_integer("1e30"), std::invalid_argument);
  CHECK(floor_div(std::int64_t{-7}, std::int64_t{2}) == -4);
  const DecimalLiteral d = parse_decimal_literal("-1.25e3");
  CHECK(d.mantissa == -125);
  CHECK(d.exponent == 1);
}
