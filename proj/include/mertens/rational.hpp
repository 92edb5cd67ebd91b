#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mertens {

using int128 = __int128;

// Exact fraction with 64-bit parts. Used wherever a boundary comparison has
// to be exact (k <= y, the floor arguments of A(t), exact model coefficients).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num(n), den(1) {}  // NOLINT: implicit by design of integer literals
  Rational(std::int64_t n, std::int64_t d);

  // Accepts "17", "-3/4", "0.571", "1.3e9", "2e-3".
  static Rational parse(std::string_view text);

  // floor(num / den)
  std::int64_t floor() const;
  bool is_integer() const { return den == 1; }
  double approx() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<int128>(a.num) * b.den <=> static_cast<int128>(b.num) * a.den;
  }
};

Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);

// floor(a / b) for b > 0, correct for negative a.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
constexpr int128 floor_div(int128 a, int128 b) {
  int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Decimal literal split into an exact integer mantissa and a power of ten:
// "-1.25e3" -> {-125, 1}.
struct DecimalLiteral {
  int128 mantissa = 0;
  int exponent = 0;
};
DecimalLiteral parse_decimal_literal(std::string_view text);

// Parses an integer written either plainly or in scientific notation
// ("1e9", "1.3e9", "2160535"). Throws std::invalid_argument when the value
// is not an integer or overflows int64.
std::int64_t parse_integer(std::string_view text);

}  // namespace mertens
