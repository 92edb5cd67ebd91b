#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mertens/enclosure.hpp"
#include "mertens/rational.hpp"
#include "mertens/summatory.hpp"

namespace mertens {

struct IdentityResidual {
  std::int64_t x = 0;
  Rational y;
  Enclosure lhs;
  std::vector<std::pair<std::string, Enclosure>> rhs_terms;
  Enclosure residual;  // lhs - sum of rhs_terms
  bool passed() const { return residual.contains_zero(); }
};

// -N(x)/x = sum_{k<=y} Lambda(k) M(x/k)/x + sum_{j<=x/y} mu(j)(psi(x/j) - x/j)/x
//           - (psi(y) - y) M(x/y)/x + m1(x/y),   1 <= y <= x.
// Terms: lambda_sum, psi_sum, boundary, m1_term.
IdentityResidual hyperbola_residual(std::int64_t x, const Rational& y, const ScanConfig& cfg = {});

// -N(x) - 1 = sum_{k<=y} (Lambda(k) - 1) M(x/k) + sum_{j<=x/y} mu(j)(psi(x/j) - floor(x/j))
//             - (psi(y) - floor(y)) M(x/y),   unscaled.
// Terms: lambda_sum, psi_sum, boundary.
IdentityResidual schoenfeld_residual(std::int64_t x, const Rational& y, const ScanConfig& cfg = {});

// A(t) = floor(t) - floor(t/2) - floor(t/3) - floor(t/5) + floor(t/30), t >= 1.
std::int64_t chebyshev_A(const Rational& t);

// 2 - 2 (1 - 2^-1/2 - 3^-1/2 - 5^-1/2 + 30^-1/2) zeta(1/2)
Enclosure alpha_constant();
// 1 - log 2/2 - log 3/3 - log 5/5 + log 30/30
Enclosure beta_constant();

enum class TailBound {
  crude,     // 0 <= 1 - A <= 1:  [0, T^-s / s]
  periodic,  // uses the count of ones per period of 30; T must be a multiple of 30
};

// int_1^inf |1 - A(t)| t^{-1-s} dt for s > 0. 1 - A is constant on each
// [n, n+1), so the head over [1, T] is the exact finite sum
// sum_{n<T} (1 - A(n)) (n^-s - (n+1)^-s) / s, plus a tail enclosure.
Enclosure step_weight_integral(const Rational& s, std::int64_t T, TailBound tail);

// Quadrature (crude tail) minus 1/s - (zeta(s)/s)(1 - 2^-s - 3^-s - 5^-s + 30^-s).
// Requires s >= 1.05.
Enclosure mellin_identity_check(const Rational& s, std::int64_t T);

// sum_{n<=u} mu(n) floor(u/(kn)), exactly.
std::int64_t mobius_floor_sum(const Rational& u, std::int64_t k, const ScanConfig& cfg = {});
// The sum equals 1 when u >= k and 0 otherwise.
bool mobius_floor_identity_check(const Rational& u, std::int64_t k, const ScanConfig& cfg = {});

// Bound tested by mn_gap_scan on |N(x)/(x log x) - M(x)/x|.
struct GapBound {
  enum class Form {
    constant, // c / (sqrt(x) log x), c = 0.227, claimed for x >= 1.3e9
    derived,  // f(x) = 0.571 alpha / (sqrt(x) log x) + 1/x + 5/(x log x), x >= 198
  };
  Form form = Form::constant;
  Rational constant{227, 1000};
};

struct GapReport {
  ScanReport report;
  std::int64_t abel_checked = 0;
  std::int64_t abel_disagreements = 0;
};

// Checks the bound at x = X_lo, X_lo + stride, ..., and X_hi. The statistic
// is gap sqrt(x) log x (constant form) or gap / f(x) (derived form, limit 1).
// With abel_cross_check, N is also rebuilt as M(x) log x - sum_{n<x} M(n) log(1 + 1/n)
// and compared against the direct sum at every checkpoint.
GapReport mn_gap_scan(std::int64_t X_lo, std::int64_t X_hi, std::int64_t stride, const GapBound& bound = {},
                      bool abel_cross_check = false, const ScanConfig& cfg = {});

}  // namespace mertens
