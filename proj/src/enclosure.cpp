#include "mertens/enclosure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mertens {

namespace rounding {

namespace {

// Below this magnitude fma residuals may be inexact; nudge unconditionally.
const double kTiny = std::ldexp(1.0, -916);
constexpr double kExactIntLimit = 9007199254740992.0;  // 2^53

double checked(double v, const char* op) {
  if (!std::isfinite(v)) throw std::domain_error(std::string("non-finite result in ") + op);
  return v;
}

struct TwoSum {
  double s;
  double e;
};

TwoSum two_sum(double a, double b) {
  double s = checked(a + b, "add");
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

}  // namespace

// Bit-level successor; callers never pass NaN or infinity.
double next_up(double x) {
  if (x == 0.0) return std::numeric_limits<double>::denorm_min();
  auto b = std::bit_cast<std::uint64_t>(x);
  b = x > 0 ? b + 1 : b - 1;
  return std::bit_cast<double>(b);
}

double next_down(double x) { return -next_up(-x); }

double add_down(double a, double b) {
  auto [s, e] = two_sum(a, b);
  return e < 0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  auto [s, e] = two_sum(a, b);
  return e > 0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = checked(a * b, "mul");
  if (std::fabs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = checked(a * b, "mul");
  if (std::fabs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}

namespace {

// Sign of (a/b - q) for q = fl(a/b); exact unless underflow.
int div_residual_sign(double a, double b, double q) {
  double r = std::fma(-q, b, a);
  if (r == 0) return 0;
  return ((r > 0) == (b > 0)) ? 1 : -1;
}

}  // namespace

double div_down(double a, double b) {
  if (b == 0.0) throw std::domain_error("division by zero");
  if (a == 0.0) return 0.0;
  double q = checked(a / b, "div");
  if (std::fabs(a) < kTiny || std::fabs(q) < kTiny) return next_down(q);
  return div_residual_sign(a, b, q) < 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
  if (b == 0.0) throw std::domain_error("division by zero");
  if (a == 0.0) return 0.0;
  double q = checked(a / b, "div");
  if (std::fabs(a) < kTiny || std::fabs(q) < kTiny) return next_up(q);
  return div_residual_sign(a, b, q) > 0 ? next_up(q) : q;
}

double sqrt_down(double a) {
  if (a < 0) throw std::domain_error("sqrt of negative value");
  if (a == 0.0) return 0.0;
  double r = std::sqrt(a);
  if (a < kTiny) return next_down(r);
  return std::fma(-r, r, a) < 0 ? next_down(r) : r;
}

double sqrt_up(double a) {
  if (a < 0) throw std::domain_error("sqrt of negative value");
  if (a == 0.0) return 0.0;
  double r = std::sqrt(a);
  if (a < kTiny) return next_up(r);
  return std::fma(-r, r, a) > 0 ? next_up(r) : r;
}

double from_int_down(std::int64_t n) {
  double d = static_cast<double>(n);
  if (std::fabs(d) < kExactIntLimit) return d;
  return static_cast<int128>(d) > n ? next_down(d) : d;
}

double from_int_up(std::int64_t n) {
  double d = static_cast<double>(n);
  if (std::fabs(d) < kExactIntLimit) return d;
  return static_cast<int128>(d) < n ? next_up(d) : d;
}

}  // namespace rounding

using namespace rounding;

namespace {

double widen_down(double v, int ulps) {
  for (int i = 0; i < ulps; ++i) v = next_down(v);
  return v;
}

double widen_up(double v, int ulps) {
  for (int i = 0; i < ulps; ++i) v = next_up(v);
  return v;
}

constexpr int kLibmUlps = 2;

double from_int128_down(int128 v) {
  double d = static_cast<double>(v);
  return static_cast<int128>(d) > v ? next_down(d) : d;
}

double from_int128_up(int128 v) {
  double d = static_cast<double>(v);
  return static_cast<int128>(d) < v ? next_up(d) : d;
}

Enclosure from_int128(int128 v) {
  return Enclosure(from_int128_down(v), from_int128_up(v));
}

Enclosure pow10_enclosure(int k) {
  Enclosure r = Enclosure::integer(1);
  Enclosure ten = Enclosure::integer(10);
  for (int i = 0; i < k; ++i) r = r * ten;
  return r;
}

// mantissa * 10^exponent, directed.
Enclosure decimal_value(int128 mantissa, int exponent) {
  Enclosure m = from_int128(mantissa);
  if (exponent >= 0) return m * pow10_enclosure(exponent);
  return m / pow10_enclosure(-exponent);
}

Enclosure pow_int(const Enclosure& a, std::int64_t n) {
  if (n < 0) return Enclosure::integer(1) / pow_int(a, -n);
  if (n == 0) return Enclosure::integer(1);
  if (a.lo >= 0) {
    Enclosure r = Enclosure::integer(1);
    Enclosure base = a;
    while (n > 0) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return r;
  }
  Enclosure r = a;
  for (std::int64_t i = 1; i < n; ++i) r = r * a;
  return r;
}

}  // namespace

Enclosure::Enclosure(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::domain_error("enclosure: non-finite endpoint");
  if (!(lo <= hi)) throw std::domain_error("enclosure: lo > hi");
}

Enclosure Enclosure::point(double v) { return Enclosure(v, v); }

Enclosure Enclosure::integer(std::int64_t n) { return Enclosure(from_int_down(n), from_int_up(n)); }

Enclosure Enclosure::ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("ratio: zero denominator");
  constexpr std::int64_t lim = std::int64_t(1) << 53;
  if (num > -lim && num < lim && den > -lim && den < lim) {
    double a = static_cast<double>(num);
    double b = static_cast<double>(den);
    return Enclosure(div_down(a, b), div_up(a, b));
  }
  return integer(num) / integer(den);
}

Enclosure Enclosure::rational(const Rational& r) { return ratio(r.num, r.den); }

Enclosure Enclosure::decimal(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return decimal(text.substr(0, slash)) / decimal(text.substr(slash + 1));
  DecimalLiteral d = parse_decimal_literal(text);
  return decimal_value(d.mantissa, d.exponent);
}

double Enclosure::width() const { return sub_up(hi, lo); }

std::string Enclosure::str(int digits) const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.*g, %.*g]", digits, lo, digits, hi);
  return buf;
}

Enclosure operator-(const Enclosure& a) { return Enclosure(-a.hi, -a.lo); }

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  return Enclosure(add_down(a.lo, b.lo), add_up(a.hi, b.hi));
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  return Enclosure(sub_down(a.lo, b.hi), sub_up(a.hi, b.lo));
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  if (a.lo >= 0 && b.lo >= 0) return Enclosure(mul_down(a.lo, b.lo), mul_up(a.hi, b.hi));
  double lo = std::min({mul_down(a.lo, b.lo), mul_down(a.lo, b.hi), mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)});
  double hi = std::max({mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)});
  return Enclosure(lo, hi);
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.contains_zero()) throw std::domain_error("division by an enclosure containing zero");
  if (a.lo >= 0 && b.lo > 0) return Enclosure(div_down(a.lo, b.hi), div_up(a.hi, b.lo));
  double lo = std::min({div_down(a.lo, b.lo), div_down(a.lo, b.hi), div_down(a.hi, b.lo), div_down(a.hi, b.hi)});
  double hi = std::max({div_up(a.lo, b.lo), div_up(a.lo, b.hi), div_up(a.hi, b.lo), div_up(a.hi, b.hi)});
  return Enclosure(lo, hi);
}

Enclosure sqrt(const Enclosure& a) {
  if (a.lo < 0) throw std::domain_error("sqrt: enclosure reaches below zero");
  return Enclosure(sqrt_down(a.lo), sqrt_up(a.hi));
}

Enclosure log(const Enclosure& a) {
  if (a.lo <= 0) throw std::domain_error("log: enclosure not strictly positive");
  double lo = a.lo == 1.0 ? 0.0 : widen_down(std::log(a.lo), kLibmUlps);
  double hi = a.hi == 1.0 ? 0.0 : widen_up(std::log(a.hi), kLibmUlps);
  return Enclosure(lo, hi);
}

Enclosure log1p(const Enclosure& a) {
  if (a.lo <= -1) throw std::domain_error("log1p: enclosure not above -1");
  double lo = a.lo == 0.0 ? 0.0 : widen_down(std::log1p(a.lo), kLibmUlps);
  double hi = a.hi == 0.0 ? 0.0 : widen_up(std::log1p(a.hi), kLibmUlps);
  return Enclosure(lo, hi);
}

Enclosure exp(const Enclosure& a) {
  double lo = a.lo == 0.0 ? 1.0 : std::max(0.0, widen_down(std::exp(a.lo), kLibmUlps));
  double hi = a.hi == 0.0 ? 1.0 : widen_up(std::exp(a.hi), kLibmUlps);
  return Enclosure(lo, hi);
}

Enclosure pow(const Enclosure& a, const Rational& s) {
  if (s.den == 1) return pow_int(a, s.num);
  if (a.lo <= 0) throw std::domain_error("pow: base not strictly positive");
  if (s.den == 2) return pow_int(sqrt(a), s.num);
  return exp(Enclosure::rational(s) * log(a));
}

Enclosure pow(const Enclosure& a, const Enclosure& s) {
  if (a.lo <= 0) throw std::domain_error("pow: base not strictly positive");
  return exp(s * log(a));
}

Enclosure square(const Enclosure& a) {
  if (a.lo >= 0) return Enclosure(mul_down(a.lo, a.lo), mul_up(a.hi, a.hi));
  if (a.hi <= 0) return Enclosure(mul_down(a.hi, a.hi), mul_up(a.lo, a.lo));
  return Enclosure(0.0, std::max(mul_up(a.lo, a.lo), mul_up(a.hi, a.hi)));
}

Enclosure abs(const Enclosure& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return Enclosure(0.0, std::max(-a.lo, a.hi));
}

Enclosure max(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

Enclosure min(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  double lo = std::max(a.lo, b.lo);
  double hi = std::min(a.hi, b.hi);
  if (lo > hi) throw std::domain_error("intersect: disjoint enclosures");
  return Enclosure(lo, hi);
}

// ---- ExactSum ----

namespace {

const double kFixedLimit = std::ldexp(1.0, 62);

// d * 2^64 is exact (|d| < 2^62 and no underflow matters after floor).
int128 fixed_floor(double d) {
  if (!(std::fabs(d) < kFixedLimit)) throw std::domain_error("ExactSum: term magnitude out of range");
  return static_cast<int128>(std::floor(d * 0x1p64));
}

int128 fixed_ceil(double d) {
  if (!(std::fabs(d) < kFixedLimit)) throw std::domain_error("ExactSum: term magnitude out of range");
  return static_cast<int128>(std::ceil(d * 0x1p64));
}

double fixed_to_double_down(int128 v) { return std::ldexp(from_int128_down(v), -64); }
double fixed_to_double_up(int128 v) { return std::ldexp(from_int128_up(v), -64); }

}  // namespace

void ExactSum::add(const Enclosure& e) {
  lo_ += fixed_floor(e.lo);
  hi_ += fixed_ceil(e.hi);
  ++terms_;
}

void ExactSum::add_integer(std::int64_t n) {
  lo_ += static_cast<int128>(n) << 64;
  hi_ += static_cast<int128>(n) << 64;
  ++terms_;
}

ExactSum& ExactSum::operator+=(const ExactSum& o) {
  lo_ += o.lo_;
  hi_ += o.hi_;
  terms_ += o.terms_;
  return *this;
}

Enclosure ExactSum::value() const { return Enclosure(fixed_to_double_down(lo_), fixed_to_double_up(hi_)); }

ExactSum ExactSum::from_raw(int128 lo, int128 hi, std::int64_t terms) {
  if (lo > hi) throw std::invalid_argument("ExactSum: raw lo > hi");
  ExactSum s;
  s.lo_ = lo;
  s.hi_ = hi;
  s.terms_ = terms;
  return s;
}

std::string int128_to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // magnitude as unsigned handles the minimum value
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string out;
  while (u > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

int128 int128_from_string(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty int128");
  bool neg = text.front() == '-';
  if (neg || text.front() == '+') text.remove_prefix(1);
  if (text.empty() || text.size() > 39) throw std::invalid_argument("malformed int128");
  int128 v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed int128");
    v = v * 10 + (c - '0');
  }
  return neg ? -v : v;
}

// ---- printed decimals ----

bool matches_truncated(const Enclosure& e, std::string_view printed) {
  while (!printed.empty() && printed.back() == '.') printed.remove_suffix(1);
  DecimalLiteral d = parse_decimal_literal(printed);
  bool negative = d.mantissa < 0 || (!printed.empty() && printed.front() == '-');
  int128 step = negative ? -1 : 1;
  Enclosure a = decimal_value(d.mantissa, d.exponent);
  Enclosure b = decimal_value(d.mantissa + step, d.exponent);
  Enclosure cell_lo = negative ? b : a;
  Enclosure cell_hi = negative ? a : b;
  // Half-open cell on the side away from zero.
  if (negative) return cell_lo.hi < e.lo && e.hi <= cell_hi.lo;
  return cell_lo.hi <= e.lo && e.hi < cell_hi.lo;
}

bool matches_rounded(const Enclosure& e, std::string_view printed) {
  DecimalLiteral d = parse_decimal_literal(printed);
  // cell = (2m -+ 1) * 10^k / 2
  Enclosure lo = decimal_value(2 * d.mantissa - 1, d.exponent) / 2;
  Enclosure hi = decimal_value(2 * d.mantissa + 1, d.exponent) / 2;
  return lo.hi <= e.lo && e.hi <= hi.lo;
}

std::string round_up_significant(double x, int digits) {
  if (digits < 1 || digits > 17) throw std::invalid_argument("round_up_significant: digits out of range");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  DecimalLiteral d = parse_decimal_literal(buf);
  Enclosure v = decimal_value(d.mantissa, d.exponent);
  // Bump unless the printed decimal is certainly >= x.
  if (!(v.lo >= x)) d.mantissa += 1;
  // Normalize to a single leading digit.
  int128 m = d.mantissa;
  int e = d.exponent;
  bool neg = m < 0;
  std::string digits_str = int128_to_string(neg ? -m : m);
  while (digits_str.size() > 1 && digits_str.back() == '0') {
    digits_str.pop_back();
    ++e;
  }
  int exp10 = e + static_cast<int>(digits_str.size()) - 1;
  std::string out = neg ? "-" : "";
  out += digits_str.substr(0, 1);
  if (digits_str.size() > 1) out += "." + digits_str.substr(1);
  if (exp10 != 0) out += "e" + std::to_string(exp10);
  return out;
}

std::int64_t reciprocal_floor(double u) {
  if (!(u > 0)) throw std::domain_error("reciprocal_floor: non-positive argument");
  auto L = static_cast<std::int64_t>(std::floor(div_down(1.0, u)));
  if (mul_up(static_cast<double>(L), u) <= 1.0 && mul_down(static_cast<double>(L + 1), u) > 1.0) return L;
  if (mul_up(static_cast<double>(L + 1), u) <= 1.0 && mul_down(static_cast<double>(L + 2), u) > 1.0) return L + 1;
  throw std::domain_error("reciprocal_floor: undecidable at double resolution");
}

}  // namespace mertens
