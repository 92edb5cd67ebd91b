#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "mertens/rational.hpp"

namespace mertens {

// Directed roundings built from error-free transforms under the default
// round-to-nearest mode. Each result is nudged one ulp only when the
// operation was inexact in the wrong direction. Overflow throws.
namespace rounding {
double next_up(double x);
double next_down(double x);
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
// int64 -> double, exact below 2^53.
double from_int_down(std::int64_t n);
double from_int_up(std::int64_t n);
}  // namespace rounding

// Closed real interval [lo, hi]; every operation returns an interval that
// contains the exact image of all points of its inputs.
//
// Rounding per operation:
//   + - * / sqrt     exact direction via residuals, at most 1 ulp outward
//   log exp log1p    libm result widened by 2 ulps on each side
//                    (log 1 = 0, exp 0 = 1, log1p 0 = 0 are exact)
// Domain violations and non-finite results throw std::domain_error.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Enclosure() = default;
  Enclosure(double lo_, double hi_);

  // The exact double v, as a degenerate interval.
  static Enclosure point(double v);
  static Enclosure integer(std::int64_t n);
  // num / den for den != 0.
  static Enclosure ratio(std::int64_t num, std::int64_t den);
  static Enclosure rational(const Rational& r);
  // Exact decimal literal such as "0.571", "8.6386e-8", "1/4345".
  static Enclosure decimal(std::string_view text);

  double width() const;
  double mid() const { return lo + (hi - lo) / 2; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Enclosure& e) const { return lo <= e.lo && e.hi <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool is_point() const { return lo == hi; }
  // Strict comparisons hold for every pair of points.
  bool certainly_less(const Enclosure& o) const { return hi < o.lo; }
  bool certainly_le(const Enclosure& o) const { return hi <= o.lo; }
  std::string str(int digits = 17) const;

  friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

Enclosure operator-(const Enclosure& a);
Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
Enclosure operator/(const Enclosure& a, const Enclosure& b);

template <std::integral I>
Enclosure operator*(const Enclosure& a, I n) {
  return a * Enclosure::integer(static_cast<std::int64_t>(n));
}
template <std::integral I>
Enclosure operator*(I n, const Enclosure& a) {
  return Enclosure::integer(static_cast<std::int64_t>(n)) * a;
}
template <std::integral I>
Enclosure operator/(const Enclosure& a, I n) {
  return a / Enclosure::integer(static_cast<std::int64_t>(n));
}
template <std::integral I>
Enclosure operator+(const Enclosure& a, I n) {
  return a + Enclosure::integer(static_cast<std::int64_t>(n));
}
template <std::integral I>
Enclosure operator/(I n, const Enclosure& a) {
  return Enclosure::integer(static_cast<std::int64_t>(n)) / a;
}
template <std::integral I>
Enclosure operator+(I n, const Enclosure& a) {
  return Enclosure::integer(static_cast<std::int64_t>(n)) + a;
}
template <std::integral I>
Enclosure operator-(const Enclosure& a, I n) {
  return a - Enclosure::integer(static_cast<std::int64_t>(n));
}
template <std::integral I>
Enclosure operator-(I n, const Enclosure& a) {
  return Enclosure::integer(static_cast<std::int64_t>(n)) - a;
}

Enclosure sqrt(const Enclosure& a);
Enclosure log(const Enclosure& a);
Enclosure log1p(const Enclosure& a);
Enclosure exp(const Enclosure& a);
// a^s for a > 0; integer and half-integer exponents avoid exp/log.
Enclosure pow(const Enclosure& a, const Rational& s);
Enclosure pow(const Enclosure& a, const Enclosure& s);
Enclosure square(const Enclosure& a);
Enclosure abs(const Enclosure& a);
Enclosure max(const Enclosure& a, const Enclosure& b);
Enclosure min(const Enclosure& a, const Enclosure& b);
Enclosure hull(const Enclosure& a, const Enclosure& b);
Enclosure intersect(const Enclosure& a, const Enclosure& b);

// Order-independent accumulator. Endpoints are rounded outward onto a fixed
// point grid of step 2^-64 and summed in 128-bit integers, so any grouping
// of the same terms yields bitwise identical results. Magnitudes must stay
// below 2^62.
class ExactSum {
 public:
  ExactSum() = default;
  void add(const Enclosure& e);
  void add_integer(std::int64_t n);
  ExactSum& operator+=(const ExactSum& o);
  Enclosure value() const;
  std::int64_t terms() const { return terms_; }

  // Raw grid state for checkpoints.
  int128 raw_lo() const { return lo_; }
  int128 raw_hi() const { return hi_; }
  static ExactSum from_raw(int128 lo, int128 hi, std::int64_t terms);

  friend bool operator==(const ExactSum&, const ExactSum&) = default;

 private:
  int128 lo_ = 0;
  int128 hi_ = 0;
  std::int64_t terms_ = 0;
};

std::string int128_to_string(int128 v);
int128 int128_from_string(std::string_view text);

// Named constants. Widths are at most 1e-9.
struct ConstantTable {
  Enclosure pi;
  Enclosure pi_squared;
  Enclosure euler_gamma;
  Enclosure zeta_half;
};

const ConstantTable& constants();

// zeta(1/2) by Borwein's accelerated alternating series with n terms,
// including the proven truncation error.
Enclosure zeta_half(int terms = 40);

// zeta(s) for rational s >= 1.05 by direct summation to `cutoff` plus
// convexity bounds on the tail. Throws std::domain_error closer to the pole.
Enclosure zeta_real(const Rational& s, std::int64_t cutoff = 1000);

// Smallest double >= every point of x rounded up to `digits` significant
// decimal digits, as an exact decimal string ("5.3e-8").
std::string round_up_significant(double x, int digits);

// A printed truncated decimal like "0.3962..." or "0.07870" denotes the
// cell [d, d + 10^-k); the enclosure matches when it meets that cell.
bool matches_truncated(const Enclosure& e, std::string_view printed);
// A printed rounded decimal like "8.3867e9" denotes the cell d +- 10^-k/2.
bool matches_rounded(const Enclosure& e, std::string_view printed);

// floor(1/u) for u > 0, certified: L*u <= 1 < (L+1)*u. Throws when the
// rounding grid cannot decide.
std::int64_t reciprocal_floor(double u);

}  // namespace mertens
