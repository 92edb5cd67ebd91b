#include <stdexcept>
#include <vector>

#include "mertens/enclosure.hpp"

namespace mertens {

Enclosure zeta_half(int terms) {
  if (terms < 4) throw std::invalid_argument("zeta_half: need at least 4 terms");
  const int n = terms;
  // d_k = sum_{i<=k} t_i, t_0 = 1, t_i / t_{i-1} = 4(n+i-1)(n-i+1) / ((2i)(2i-1))
  std::vector<Enclosure> d(n + 1);
  Enclosure t = Enclosure::integer(1);
  d[0] = t;
  for (int i = 1; i <= n; ++i) {
    t = t * Enclosure::ratio(4LL * (n + i - 1) * (n - i + 1), (2LL * i) * (2LL * i - 1));
    d[i] = d[i - 1] + t;
  }
  Enclosure sum;
  for (int k = 0; k < n; ++k) {
    Enclosure term = (d[k] - d[n]) / sqrt(Enclosure::integer(k + 1));
    sum = (k % 2 == 0) ? sum + term : sum - term;
  }
  Enclosure eta_factor = Enclosure::integer(1) - sqrt(Enclosure::integer(2));  // 1 - 2^{1-s}
  Enclosure z = -sum / (d[n] * eta_factor);
  // |error| <= 3 / ((3 + sqrt 8)^n |1 - 2^{1-s}|) for real s >= 1/2
  Enclosure rate = Enclosure::integer(3) + sqrt(Enclosure::integer(8));
  Enclosure err = Enclosure::integer(3) / (pow(rate, Rational(n)) * abs(eta_factor));
  return z + Enclosure(-err.hi, err.hi);
}

Enclosure zeta_real(const Rational& s, std::int64_t cutoff) {
  if (s < Rational(105, 100)) throw std::domain_error("zeta_real: s must be at least 1.05");
  if (cutoff < 1) throw std::invalid_argument("zeta_real: cutoff must be positive");
  ExactSum head;
  for (std::int64_t n = 1; n <= cutoff; ++n) head.add(pow(Enclosure::integer(n), Rational(0) - s));
  // f(t) = t^-s is convex and decreasing:
  //   f(T+1)/2 + int_{T+1}^inf f  <=  sum_{n>T} f(n)  <=  int_{T+1/2}^inf f
  Enclosure sm1 = Enclosure::rational(s - Rational(1));
  Enclosure t_half = Enclosure::ratio(2 * cutoff + 1, 2);
  Enclosure t_next = Enclosure::integer(cutoff + 1);
  Enclosure upper = pow(t_half, Rational(1) - s) / sm1;
  Enclosure lower = pow(t_next, Rational(0) - s) / 2 + pow(t_next, Rational(1) - s) / sm1;
  Enclosure h = head.value();
  return Enclosure(rounding::add_down(h.lo, lower.lo), rounding::add_up(h.hi, upper.hi));
}

namespace {

ConstantTable build_constants() {
  ConstantTable c;
  // 3.141592653589793 is the double just below pi.
  c.pi = Enclosure(3.141592653589793, rounding::next_up(3.141592653589793));
  c.pi_squared = square(c.pi);
  // Used only where -log x + gamma enters the Lambda(k)/k remainder.
  c.euler_gamma = hull(Enclosure::decimal("0.5772156649"), Enclosure::decimal("0.5772156650"));
  c.zeta_half = zeta_half(40);
  Enclosure reference = hull(Enclosure::decimal("-1.460354508809586813"), Enclosure::decimal("-1.460354508809586812"));
  if (c.zeta_half.hi < reference.lo || reference.hi < c.zeta_half.lo)
    throw std::logic_error("zeta(1/2) enclosure disagrees with reference digits");
  return c;
}

}  // namespace

const ConstantTable& constants() {
  static const ConstantTable table = build_constants();
  return table;
}

}  // namespace mertens
