#include "mertens/identity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mertens/error.hpp"
#include "report_builder.hpp"
#include "scan_engine.hpp"

namespace mertens {

namespace {

// Values of a running sum at a sorted list of arguments, filled in while
// the scan passes each argument.
template <class V>
class PointTable {
 public:
  explicit PointTable(std::vector<std::int64_t> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    values_.resize(points_.size());
  }
  // Records `v` for every pending point <= n.
  void record_through(std::int64_t n, const V& v) {
    while (next_ < points_.size() && points_[next_] <= n) values_[next_++] = v;
  }
  const V& at(std::int64_t t) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), t);
    if (it == points_.end() || *it != t) throw std::logic_error("PointTable: argument not tabulated");
    return values_[static_cast<std::size_t>(it - points_.begin())];
  }

 private:
  std::vector<std::int64_t> points_;
  std::vector<V> values_;
  std::size_t next_ = 0;
};

// A superset of { floor(x/k) : 1 <= k <= K }.
std::vector<std::int64_t> floor_quotients(std::int64_t x, std::int64_t K) {
  std::vector<std::int64_t> out;
  if (K < 1) return out;
  const std::int64_t s = isqrt(x);
  for (std::int64_t k = 1; k <= std::min(K, s); ++k) out.push_back(x / k);
  if (K > s)
    for (std::int64_t v = x / K; v <= s; ++v) out.push_back(v);
  return out;
}

struct PrimePowerTerm {
  std::int64_t n;
  Enclosure log_p;
};

// Everything both identities need at one split (x, y).
struct SplitData {
  std::int64_t Y = 0;  // floor(y)
  std::int64_t J = 0;  // floor(x/y)
  PointTable<std::int64_t> M{{}};
  PointTable<Enclosure> psi{{}};
  std::vector<std::int8_t> mu;  // mu(j) for j <= J
  std::vector<PrimePowerTerm> prime_powers;  // n <= Y
  Enclosure m_J;
  Enclosure N_x;
};

SplitData gather(std::int64_t x, const Rational& y, const ScanConfig& cfg) {
  if (x < 1) throw std::invalid_argument("identity: x must be >= 1");
  if (y < Rational(1) || Rational(x) < y) throw std::invalid_argument("identity: need 1 <= y <= x");
  check_ceiling(x, cfg);
  ScanConfig rig = cfg;
  rig.mode = Mode::rigorous;

  SplitData d;
  d.Y = y.floor();
  d.J = static_cast<std::int64_t>(floor_div(static_cast<int128>(x) * y.den, int128(y.num)));

  std::vector<std::int64_t> mpts = floor_quotients(x, d.Y);
  mpts.push_back(d.J);
  d.M = PointTable<std::int64_t>(std::move(mpts));
  std::vector<std::int64_t> ppts = floor_quotients(x, d.J);
  ppts.push_back(d.Y);
  d.psi = PointTable<Enclosure>(std::move(ppts));
  d.mu.assign(static_cast<std::size_t>(d.J) + 1, 0);

  std::int64_t M = 0;
  ExactSum m, N;
  detail::drive_mobius(1, x + 1, rig, [&](const MobiusBlock& b) {
    for (std::int64_t n = b.segment.lo; n < b.segment.hi; ++n) {
      const int u = b.mu(n);
      M += u;
      if (n <= d.J) {
        d.mu[static_cast<std::size_t>(n)] = static_cast<std::int8_t>(u);
        if (u != 0) m.add(Enclosure::ratio(u, n));
        if (n == d.J) d.m_J = m.value();
      }
      if (u != 0 && n > 1) {
        Enclosure l = log(Enclosure::point(static_cast<double>(n)));
        N.add(u > 0 ? l : -l);
      }
      d.M.record_through(n, M);
    }
  });
  d.N_x = N.value();

  ExactSum psi;
  detail::drive_mangoldt(1, x + 1, rig, [&](const MangoldtBlock& b) {
    for (const PrimePower& e : b.entries) {
      d.psi.record_through(e.n - 1, psi.value());
      Enclosure lp = log(Enclosure::point(static_cast<double>(e.p)));
      psi.add(lp);
      if (e.n <= d.Y) d.prime_powers.push_back({e.n, lp});
    }
  });
  d.psi.record_through(x, psi.value());
  return d;
}

Enclosure sum_of(const std::vector<std::pair<std::string, Enclosure>>& terms) {
  Enclosure s = Enclosure::integer(0);
  for (const auto& t : terms) s = s + t.second;
  return s;
}

}  // namespace

IdentityResidual hyperbola_residual(std::int64_t x, const Rational& y, const ScanConfig& cfg) {
  SplitData d = gather(x, y, cfg);
  const Enclosure X = Enclosure::integer(x);
  const Enclosure Yr = Enclosure::rational(y);

  ExactSum lambda_sum;
  for (const PrimePowerTerm& t : d.prime_powers) lambda_sum.add(t.log_p * d.M.at(x / t.n));

  ExactSum psi_sum;
  for (std::int64_t j = 1; j <= d.J; ++j) {
    const int u = d.mu[static_cast<std::size_t>(j)];
    if (u == 0) continue;
    Enclosure t = d.psi.at(x / j) - Enclosure::ratio(x, j);
    psi_sum.add(u > 0 ? t : -t);
  }

  const std::int64_t M_J = d.M.at(d.J);
  IdentityResidual r;
  r.x = x;
  r.y = y;
  r.lhs = -d.N_x / X;
  r.rhs_terms = {
      {"lambda_sum", lambda_sum.value() / X},
      {"psi_sum", psi_sum.value() / X},
      {"boundary_term", -((d.psi.at(d.Y) - Yr) * M_J) / X},
      {"m1_term", d.m_J - Yr * M_J / X},
  };
  r.residual = r.lhs - sum_of(r.rhs_terms);
  return r;
}

IdentityResidual schoenfeld_residual(std::int64_t x, const Rational& y, const ScanConfig& cfg) {
  SplitData d = gather(x, y, cfg);

  ExactSum lambda_sum;
  for (const PrimePowerTerm& t : d.prime_powers) lambda_sum.add(t.log_p * d.M.at(x / t.n));
  int128 plain = 0;
  for (std::int64_t k = 1; k <= d.Y; ++k) plain += d.M.at(x / k);
  if (plain > (int128(1) << 62) || plain < -(int128(1) << 62))
    throw std::overflow_error("schoenfeld_residual: sum out of range");
  lambda_sum.add_integer(-static_cast<std::int64_t>(plain));

  ExactSum psi_sum;
  for (std::int64_t j = 1; j <= d.J; ++j) {
    const int u = d.mu[static_cast<std::size_t>(j)];
    if (u == 0) continue;
    Enclosure t = d.psi.at(x / j) - (x / j);
    psi_sum.add(u > 0 ? t : -t);
  }

  IdentityResidual r;
  r.x = x;
  r.y = y;
  r.lhs = -d.N_x - 1;
  r.rhs_terms = {
      {"lambda_sum", lambda_sum.value()},
      {"psi_sum", psi_sum.value()},
      {"boundary_term", -((d.psi.at(d.Y) - d.Y) * d.M.at(d.J))},
  };
  r.residual = r.lhs - sum_of(r.rhs_terms);
  return r;
}

std::int64_t chebyshev_A(const Rational& t) {
  if (t < Rational(1)) throw std::domain_error("chebyshev_A: t must be >= 1");
  auto fl = [&](std::int64_t d) { return floor_div(int128(t.num), static_cast<int128>(t.den) * d); };
  return static_cast<std::int64_t>(fl(1) - fl(2) - fl(3) - fl(5) + fl(30));
}

namespace {

// 1 - 2^-s - 3^-s - 5^-s + 30^-s
Enclosure dirichlet_factor(const Rational& s) {
  auto p = [&](std::int64_t d) { return pow(Enclosure::integer(d), Rational(0) - s); };
  return 1 - p(2) - p(3) - p(5) + p(30);
}

Enclosure log_over(std::int64_t d) { return log(Enclosure::integer(d)) / d; }

}  // namespace

Enclosure alpha_constant() { return 2 - 2 * dirichlet_factor(Rational(1, 2)) * constants().zeta_half; }

Enclosure beta_constant() { return 1 - log_over(2) - log_over(3) - log_over(5) + log_over(30); }

Enclosure step_weight_integral(const Rational& s, std::int64_t T, TailBound tail) {
  if (!(Rational(0) < s)) throw std::domain_error("step_weight_integral: s must be > 0");
  if (T < 1) throw std::invalid_argument("step_weight_integral: T must be >= 1");
  if (tail == TailBound::periodic && T % 30 != 0)
    throw std::invalid_argument("step_weight_integral: periodic tail needs T divisible by 30");
  const Enclosure S = Enclosure::rational(s);
  auto neg_pow = [&](std::int64_t n) { return pow(Enclosure::integer(n), Rational(0) - s); };

  // Sum of n^-s - (n+1)^-s over maximal runs of n with 1 - A(n) = 1, so
  // each run costs two powers.
  ExactSum head;
  std::int64_t run_start = 0;
  for (std::int64_t n = 1; n <= T; ++n) {
    const bool one = n < T && 1 - chebyshev_A(Rational(n)) == 1;
    if (one && run_start == 0) run_start = n;
    if (!one && run_start != 0) {
      head.add(neg_pow(run_start) - neg_pow(n));
      run_start = 0;
    }
  }
  Enclosure total = head.value() / S;

  const Enclosure T_s = neg_pow(T);  // T^-s
  if (tail == TailBound::crude) return total + Enclosure(0.0, (T_s / S).hi);

  std::int64_t G = 0;
  for (std::int64_t n = 1; n <= 30; ++n) G += 1 - chebyshev_A(Rational(n));
  // Block i covers [T + 30i, T + 30(i+1)); each of its G unit steps has
  // integral between (T + 30(i+1))^{-1-s} and (T + 30i)^{-1-s}. Comparing
  // the block sums with integrals of the decreasing u^{-1-s}:
  //   G (T+30)^-s / (30 s)  <=  tail  <=  G T^{-1-s} + G T^-s / (30 s).
  const Enclosure lower = G * neg_pow(T + 30) / (30 * S);
  const Enclosure upper = G * T_s / T + G * T_s / (30 * S);
  return total + Enclosure(lower.lo, upper.hi);
}

Enclosure mellin_identity_check(const Rational& s, std::int64_t T) {
  if (s < Rational(105, 100)) throw std::domain_error("mellin_identity_check: s must be >= 1.05");
  const Enclosure S = Enclosure::rational(s);
  const Enclosure closed = 1 / S - zeta_real(s) / S * dirichlet_factor(s);
  return step_weight_integral(s, T, TailBound::crude) - closed;
}

std::int64_t mobius_floor_sum(const Rational& u, std::int64_t k, const ScanConfig& cfg) {
  if (u < Rational(1)) throw std::invalid_argument("mobius_floor_sum: u must be >= 1");
  if (k < 1) throw std::invalid_argument("mobius_floor_sum: k must be >= 1");
  const std::int64_t U = u.floor();
  check_ceiling(U, cfg);
  // floor(u/(kn)) = floor(U/(kn)), and the terms vanish for n > U/k.
  const std::int64_t top = U / k;
  std::int64_t sum = 0;
  detail::drive_mobius(1, top + 1, cfg, [&](const MobiusBlock& b) {
    for (std::int64_t n = b.segment.lo; n < b.segment.hi; ++n) sum += b.mu(n) * (U / (k * n));
  });
  return sum;
}

bool mobius_floor_identity_check(const Rational& u, std::int64_t k, const ScanConfig& cfg) {
  return mobius_floor_sum(u, k, cfg) == (Rational(k) <= u ? 1 : 0);
}

GapReport mn_gap_scan(std::int64_t X_lo, std::int64_t X_hi, std::int64_t stride, const GapBound& bound,
                      bool abel_cross_check, const ScanConfig& cfg) {
  const bool fixed = bound.form == GapBound::Form::constant;
  if (X_lo < 2 || X_hi < X_lo) throw std::invalid_argument("mn_gap_scan: invalid range");
  if (stride < 1) throw std::invalid_argument("mn_gap_scan: stride must be >= 1");
  check_ceiling(X_hi, cfg);
  if (fixed && X_lo < 1300000000)
    throw hypothesis_error("mn_gap_scan: the 0.227 bound is claimed only for x >= 1.3e9");
  if (!fixed && X_lo < 198)
    throw hypothesis_error("mn_gap_scan: the derived bound needs x >= 6 * 33");
  if (!fixed && static_cast<double>(X_hi) > 6e16)
    throw hypothesis_error("mn_gap_scan: the derived bound rests on the M model, valid to 1e16 * 6");

  ScanReport base;
  base.X_lo = X_lo;
  base.X_hi = X_hi;
  base.claim = fixed ? "|N(x)/(x log x) - M(x)/x| sqrt(x) log x <= " + bound.constant.str()
                     : "|N(x)/(x log x) - M(x)/x| / f(x) <= 1";
  base.limit = fixed ? Enclosure::rational(bound.constant) : Enclosure::integer(1);
  detail::ReportBuilder rb(base);
  const Enclosure alpha_model = alpha_constant() * Enclosure::ratio(571, 1000);

  GapReport out;
  std::int64_t M = 0;
  ExactSum N, abel;
  std::int64_t next = X_lo;
  auto checkpoint = [&](std::int64_t x) {
    const Enclosure X = Enclosure::integer(x);
    const Enclosure L = log(X);
    const Enclosure Nx = N.value();
    const Enclosure gap = abs(Nx / (X * L) - Enclosure::integer(M) / X);
    const Enclosure root = sqrt(X) * L;
    if (fixed) {
      rb.observe(x, gap * root);
    } else {
      const Enclosure f = alpha_model / root + 1 / X + 5 / (X * L);
      rb.observe(x, gap / f);
    }
    if (abel_cross_check) {
      ++out.abel_checked;
      const Enclosure other = Enclosure::integer(M) * L - abel.value();
      if (Nx.hi < other.lo || other.hi < Nx.lo) ++out.abel_disagreements;
    }
  };
  detail::drive_mobius(1, X_hi + 1, cfg, [&](const MobiusBlock& b) {
    for (std::int64_t n = b.segment.lo; n < b.segment.hi; ++n) {
      if (abel_cross_check && n >= 2 && M != 0)
        abel.add(Enclosure::integer(M) * log1p(Enclosure::ratio(1, n - 1)));
      const int u = b.mu(n);
      M += u;
      if (u != 0 && n > 1) {
        Enclosure l = log(Enclosure::point(static_cast<double>(n)));
        N.add(u > 0 ? l : -l);
      }
      if (n == next) {
        checkpoint(n);
        next = (n == X_hi) ? X_hi + 1 : std::min(X_hi, n + stride);
      }
    }
  });
  out.report = rb.take();
  return out;
}

}  // namespace mertens
