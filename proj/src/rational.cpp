#include "mertens/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace mertens {

namespace {

std::int64_t narrow(int128 v, std::string_view what) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(std::string(what) + ": overflow");
  return static_cast<std::int64_t>(v);
}

Rational make(int128 n, int128 d) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  int128 a = n < 0 ? -n : n;
  int128 b = d;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  Rational r;
  r.num = narrow(n, "rational");
  r.den = narrow(d, "rational");
  return r;
}

}  // namespace

DecimalLiteral parse_decimal_literal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  DecimalLiteral out;
  bool negative = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (out.mantissa > (int128(1) << 100)) throw std::invalid_argument("too many digits: " + std::string(text));
      out.mantissa = out.mantissa * 10 + (c - '0');
      if (seen_point) --out.exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else if (c == '_' || c == '\'' || c == ' ') {
      continue;  // digit group separators as in "2 160 535"
    } else {
      throw std::invalid_argument("malformed number: " + std::string(text));
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed number: " + std::string(text));
  if (i < text.size()) {
    std::string_view exp_text = text.substr(i + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    int e = 0;
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), e);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size())
      throw std::invalid_argument("malformed exponent: " + std::string(text));
    out.exponent += e;
  }
  if (negative) out.mantissa = -out.mantissa;
  return out;
}

namespace {

int128 pow10(int e) {
  int128 r = 1;
  for (int k = 0; k < e; ++k) {
    r *= 10;
    if (r > (int128(1) << 120)) throw std::overflow_error("power of ten overflow");
  }
  return r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  *this = make(n, d);
}

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational a = parse(text.substr(0, slash));
    Rational b = parse(text.substr(slash + 1));
    return a / b;
  }
  DecimalLiteral d = parse_decimal_literal(text);
  // trailing zeros of the mantissa fold into the exponent
  while (d.exponent < 0 && d.mantissa != 0 && d.mantissa % 10 == 0) {
    d.mantissa /= 10;
    ++d.exponent;
  }
  if (d.exponent >= 0) return make(d.mantissa * pow10(d.exponent), 1);
  return make(d.mantissa, pow10(-d.exponent));
}

std::int64_t Rational::floor() const {
  return floor_div(num, den);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<int128>(a.num) * b.num, static_cast<int128>(a.den) * b.den);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(static_cast<int128>(a.num) * b.den, static_cast<int128>(a.den) * b.num);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<int128>(a.num) * b.den + static_cast<int128>(b.num) * a.den,
              static_cast<int128>(a.den) * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(static_cast<int128>(a.num) * b.den - static_cast<int128>(b.num) * a.den,
              static_cast<int128>(a.den) * b.den);
}

std::int64_t parse_integer(std::string_view text) {
  Rational r;
  try {
    r = Rational::parse(text);
  } catch (const std::overflow_error&) {
    throw std::invalid_argument("integer out of range: " + std::string(text));
  }
  if (!r.is_integer()) throw std::invalid_argument("not an integer: " + std::string(text));
  return r.num;
}

}  // namespace mertens
