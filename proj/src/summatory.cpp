#include "mertens/summatory.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>

#include "mertens/checkpoint.hpp"
#include "mertens/error.hpp"
#include "report_builder.hpp"
#include "scan_engine.hpp"

namespace mertens {

using namespace rounding;

// ---- names ----

namespace {

struct KindInfo {
  Kind kind;
  std::string_view name;
};

constexpr KindInfo kKinds[] = {
    {Kind::M, "M"},
    {Kind::psi, "psi"},
    {Kind::N, "N"},
    {Kind::m, "m"},
    {Kind::m1, "m1"},
    {Kind::Q, "Q"},
    {Kind::lambda_over_k, "lambda_over_k"},
    {Kind::lambda_over_sqrt_k, "lambda_over_sqrt_k"},
    {Kind::mu2_over_sqrt, "mu2_over_sqrt"},
    {Kind::mu2_over_n, "mu2_over_n"},
    {Kind::absM_log_weight, "absM_log_weight"},
};

bool uses_mangoldt(Kind k) {
  return k == Kind::psi || k == Kind::lambda_over_k || k == Kind::lambda_over_sqrt_k;
}

}  // namespace

std::string_view kind_name(Kind k) {
  for (const auto& info : kKinds)
    if (info.kind == k) return info.name;
  return "?";
}

Kind parse_kind(std::string_view name) {
  for (const auto& info : kKinds)
    if (info.name == name) return info.kind;
  throw std::invalid_argument("unknown function: " + std::string(name));
}

bool kind_is_integer(Kind k) { return k == Kind::M || k == Kind::Q; }

std::string_view mode_name(Mode m) { return m == Mode::fast ? "fast" : "rigorous"; }

Mode parse_mode(std::string_view name) {
  if (name == "fast") return Mode::fast;
  if (name == "rigorous") return Mode::rigorous;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

std::int64_t default_scan_ceiling() {
  if (const char* env = std::getenv("MERTENS_SCAN_CEILING"); env && *env) return parse_integer(env);
  return kDefaultScanCeiling;
}

void check_ceiling(std::int64_t X, const ScanConfig& cfg) {
  if (X > cfg.ceiling)
    throw resource_error("scan limit " + std::to_string(X) + " exceeds the configured ceiling " +
                         std::to_string(cfg.ceiling));
}

// ---- accumulators ----

namespace {

constexpr double kUnit = 0x1p-53;

// Compensated summation of hardware-float terms. Each term is assumed to
// carry a relative error of at most 4u from its own evaluation.
struct Neumaier {
  double s = 0;
  double c = 0;
  double abs_sum = 0;
  std::int64_t n = 0;

  void add(double t) {
    double sum = s + t;
    if (std::fabs(s) >= std::fabs(t))
      c += (s - sum) + t;
    else
      c += (t - sum) + s;
    s = sum;
    abs_sum += std::fabs(t);
    ++n;
  }
  double value() const { return s + c; }
  // 4u sum|t| + 3u |S| + 2 n^2 u^2 sum|t|, inflated by 1e-6 relative
  double error_bound() const {
    double a = mul_up(abs_sum, 1.000001);
    double nu = mul_up(static_cast<double>(n), kUnit);
    double e = mul_up(4 * kUnit, a);
    e = add_up(e, mul_up(3 * kUnit, mul_up(std::fabs(value()), 1.000001)));
    e = add_up(e, mul_up(2.0, mul_up(mul_up(nu, nu), a)));
    return e;
  }
  Enclosure enclosure() const {
    double v = value();
    double e = error_bound();
    return Enclosure(sub_down(v, e), add_up(v, e));
  }
};

struct State {
  std::int64_t M = 0;
  std::int64_t count = 0;
  ExactSum sum;
  Neumaier fast;
};

Enclosure inv_sqrt(double n) { return Enclosure(div_down(1.0, sqrt_up(n)), div_up(1.0, sqrt_down(n))); }

Checkpoint checkpoint_of(Kind kind, Mode mode, const State& st, std::int64_t x) {
  Checkpoint cp;
  cp.x = x;
  switch (kind) {
    case Kind::M:
      cp.exact = st.M;
      cp.value = Enclosure::integer(st.M);
      cp.estimate = static_cast<double>(st.M);
      return cp;
    case Kind::Q:
      cp.exact = st.count;
      cp.value = Enclosure::integer(st.count);
      cp.estimate = static_cast<double>(st.count);
      return cp;
    case Kind::m1: {
      Enclosure Mx = Enclosure::ratio(st.M, x);
      if (mode == Mode::rigorous) {
        cp.value = st.sum.value() - Mx;
        cp.estimate = cp.value.mid();
      } else {
        double q = static_cast<double>(st.M) / static_cast<double>(x);
        cp.estimate = st.fast.value() - q;
        double e = add_up(st.fast.error_bound(), mul_up(2 * kUnit, add_up(std::fabs(q), std::fabs(cp.estimate))));
        cp.value = Enclosure(sub_down(cp.estimate, e), add_up(cp.estimate, e));
      }
      return cp;
    }
    default:
      if (mode == Mode::rigorous) {
        cp.value = st.sum.value();
        cp.estimate = cp.value.mid();
      } else {
        cp.value = st.fast.enclosure();
        cp.estimate = st.fast.value();
      }
      return cp;
  }
}

void accumulate_mobius(Kind kind, Mode mode, const MobiusBlock& b, std::int64_t from, std::int64_t to, State& st) {
  const std::int8_t* mu = b.values.data() - b.segment.lo;
  const bool rig = mode == Mode::rigorous;
  switch (kind) {
    case Kind::M:
      for (std::int64_t n = from; n < to; ++n) st.M += mu[n];
      return;
    case Kind::Q:
      for (std::int64_t n = from; n < to; ++n) st.count += mu[n] != 0;
      return;
    case Kind::N:
      for (std::int64_t n = from; n < to; ++n) {
        if (mu[n] == 0 || n == 1) continue;
        if (rig) {
          Enclosure l = log(Enclosure::point(static_cast<double>(n)));
          st.sum.add(mu[n] > 0 ? l : -l);
        } else {
          st.fast.add(mu[n] * std::log(static_cast<double>(n)));
        }
      }
      return;
    case Kind::m:
    case Kind::m1:
      for (std::int64_t n = from; n < to; ++n) {
        st.M += mu[n];
        if (mu[n] == 0) continue;
        if (rig)
          st.sum.add(Enclosure::ratio(mu[n], n));
        else
          st.fast.add(mu[n] / static_cast<double>(n));
      }
      return;
    case Kind::mu2_over_sqrt:
      for (std::int64_t n = from; n < to; ++n) {
        if (mu[n] == 0) continue;
        if (rig)
          st.sum.add(inv_sqrt(static_cast<double>(n)));
        else
          st.fast.add(1.0 / std::sqrt(static_cast<double>(n)));
      }
      return;
    case Kind::mu2_over_n:
      for (std::int64_t n = from; n < to; ++n) {
        if (mu[n] == 0) continue;
        if (rig)
          st.sum.add(Enclosure::ratio(1, n));
        else
          st.fast.add(1.0 / static_cast<double>(n));
      }
      return;
    case Kind::absM_log_weight:
      // Processing n adds the term of n - 1, so the state after n holds
      // sum_{m<n} |M(m)| log(1 + 1/m).
      for (std::int64_t n = from; n < to; ++n) {
        if (n >= 2 && st.M != 0) {
          std::int64_t m = n - 1;
          std::int64_t a = st.M < 0 ? -st.M : st.M;
          if (rig)
            st.sum.add(Enclosure::integer(a) * log1p(Enclosure::ratio(1, m)));
          else
            st.fast.add(static_cast<double>(a) * std::log1p(1.0 / static_cast<double>(m)));
        }
        st.M += mu[n];
      }
      return;
    default:
      throw std::logic_error("accumulate_mobius: unsupported kind");
  }
}

void accumulate_mangoldt(Kind kind, Mode mode, const PrimePower& e, State& st) {
  const auto n = static_cast<double>(e.n);
  if (mode == Mode::rigorous) {
    Enclosure lp = log(Enclosure::point(static_cast<double>(e.p)));
    switch (kind) {
      case Kind::psi: st.sum.add(lp); return;
      case Kind::lambda_over_k: st.sum.add(lp / Enclosure::point(n)); return;
      case Kind::lambda_over_sqrt_k: st.sum.add(lp * inv_sqrt(n)); return;
      default: throw std::logic_error("accumulate_mangoldt: unsupported kind");
    }
  }
  double lp = std::log(static_cast<double>(e.p));
  switch (kind) {
    case Kind::psi: st.fast.add(lp); return;
    case Kind::lambda_over_k: st.fast.add(lp / n); return;
    case Kind::lambda_over_sqrt_k: st.fast.add(lp / std::sqrt(n)); return;
    default: throw std::logic_error("accumulate_mangoldt: unsupported kind");
  }
}

// Yields stride multiples and the final X, in order.
class Emitter {
 public:
  Emitter(std::int64_t X, std::int64_t stride, std::int64_t done) : X_(X), stride_(stride) { set_after(done); }
  std::int64_t next() const { return next_; }
  void advance() { set_after(next_); }

 private:
  void set_after(std::int64_t last) {
    if (last >= X_) {
      next_ = std::numeric_limits<std::int64_t>::max();
      return;
    }
    std::int64_t cand = (last / stride_ + 1) * stride_;
    next_ = std::min(cand, X_);
  }
  std::int64_t X_;
  std::int64_t stride_;
  std::int64_t next_ = 0;
};

const std::vector<std::string> kSeriesColumns = {"x",  "lo",    "hi", "M",  "count", "sum_lo",
                                                 "sum_hi", "terms", "fs", "fc", "fa",    "fn"};

CheckpointLog::Record encode(const Checkpoint& cp, const State& st) {
  return {std::to_string(cp.x),
          decimal17(cp.value.lo),
          decimal17(cp.value.hi),
          std::to_string(st.M),
          std::to_string(st.count),
          int128_to_string(st.sum.raw_lo()),
          int128_to_string(st.sum.raw_hi()),
          std::to_string(st.sum.terms()),
          hexfloat(st.fast.s),
          hexfloat(st.fast.c),
          hexfloat(st.fast.abs_sum),
          std::to_string(st.fast.n)};
}

State decode(const CheckpointLog::Record& r) {
  State st;
  st.M = std::stoll(r[3]);
  st.count = std::stoll(r[4]);
  st.sum = ExactSum::from_raw(int128_from_string(r[5]), int128_from_string(r[6]), std::stoll(r[7]));
  st.fast.s = parse_hexfloat(r[8]);
  st.fast.c = parse_hexfloat(r[9]);
  st.fast.abs_sum = parse_hexfloat(r[10]);
  st.fast.n = std::stoll(r[11]);
  return st;
}

void validate_scan_args(std::int64_t X, std::int64_t stride, const ScanConfig& cfg) {
  if (X < 1) throw std::invalid_argument("scan limit must be >= 1");
  if (stride < 1) throw std::invalid_argument("checkpoint stride must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("worker count must be >= 1");
  check_ceiling(X, cfg);
}

}  // namespace

SummatorySeries scan(Kind kind, std::int64_t X, std::int64_t stride, const ScanConfig& cfg,
                     const std::string& checkpoint_path) {
  validate_scan_args(X, stride, cfg);
  const Mode mode = kind_is_integer(kind) ? Mode::rigorous : cfg.mode;
  SummatorySeries series;
  series.kind = kind;
  series.mode = mode;
  series.stride = stride;
  series.final_x = X;

  State st;
  std::int64_t done = 0;
  std::optional<CheckpointLog> log;
  if (!checkpoint_path.empty()) {
    CheckpointLog::Header header = {
        {"kind", std::string(kind_name(kind))}, {"mode", std::string(mode_name(mode))}, {"stride", std::to_string(stride)}};
    std::int64_t expected = stride;
    auto keep = [&](const CheckpointLog::Record& r) {
      try {
        std::int64_t x = std::stoll(r[0]);
        if (x != expected || x > X) return false;
        decode(r);
        expected += stride;
        return true;
      } catch (const std::exception&) {
        return false;
      }
    };
    log.emplace(checkpoint_path, header, kSeriesColumns, keep);
    for (const auto& rec : log->resumed()) {
      st = decode(rec);
      done = std::stoll(rec[0]);
      series.checkpoints.push_back(checkpoint_of(kind, mode, st, done));
    }
  }

  Emitter em(X, stride, done);
  auto emit = [&] {
    std::int64_t x = em.next();
    series.checkpoints.push_back(checkpoint_of(kind, mode, st, x));
    if (log && x % stride == 0) log->append(encode(series.checkpoints.back(), st));
    em.advance();
  };

  if (done < X) {
    if (uses_mangoldt(kind)) {
      detail::drive_mangoldt(done + 1, X + 1, cfg, [&](const MangoldtBlock& b) {
        for (const PrimePower& e : b.entries) {
          while (em.next() < e.n) emit();
          accumulate_mangoldt(kind, mode, e, st);
        }
        while (em.next() < b.segment.hi) emit();
        if (log) log->flush();
      });
    } else {
      detail::drive_mobius(done + 1, X + 1, cfg, [&](const MobiusBlock& b) {
        std::int64_t n = b.segment.lo;
        while (n < b.segment.hi) {
          std::int64_t stop = std::min(b.segment.hi, em.next() + 1);
          accumulate_mobius(kind, mode, b, n, stop, st);
          n = stop;
          if (stop - 1 == em.next()) emit();
        }
        if (log) log->flush();
      });
    }
  }
  if (log) log->flush();
  return series;
}

SummatorySeries mertens_scan(std::int64_t X, std::int64_t stride, const ScanConfig& cfg) {
  return scan(Kind::M, X, stride, cfg);
}

SummatorySeries psi_scan(std::int64_t X, std::int64_t stride, const ScanConfig& cfg) {
  return scan(Kind::psi, X, stride, cfg);
}

SummatorySeries n_scan(std::int64_t X, std::int64_t stride, const ScanConfig& cfg) {
  return scan(Kind::N, X, stride, cfg);
}

Enclosure m1_at(std::int64_t X, const ScanConfig& cfg) {
  validate_scan_args(X, 1, cfg);
  ExactSum sum;
  const std::int64_t single_limit = (std::int64_t(1) << 53) / X;
  const Enclosure x_enc = Enclosure::integer(X);
  detail::drive_mobius(1, X + 1, cfg, [&](const MobiusBlock& b) {
    for (std::int64_t n = b.segment.lo; n < b.segment.hi; ++n) {
      int mu = b.mu(n);
      if (mu == 0 || n == X) continue;
      // mu(n) (X - n) / (n X)
      if (n <= single_limit)
        sum.add(Enclosure::ratio(mu * (X - n), n * X));
      else
        sum.add(Enclosure::ratio(mu * (X - n), n) / x_enc);
    }
  });
  return sum.value();
}

Enclosure weighted_sum(Kind kind, std::int64_t X, const ScanConfig& cfg) {
  if (kind == Kind::m1) return m1_at(X, cfg);
  ScanConfig rig = cfg;
  rig.mode = Mode::rigorous;
  return scan(kind, X, X, rig).final().value;
}

// ---- exhaustive checks ----

namespace {

using detail::kListedPoints;
using detail::ReportBuilder;

void validate_range(std::int64_t lo, std::int64_t hi, const ScanConfig& cfg) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("invalid scan range");
  check_ceiling(hi, cfg);
}

// Calls visit(a, b, value) for each maximal stretch [a, b] of [1, X_hi]
// on which the running Mangoldt sum is constant, with value its enclosure.
template <class Term, class Visit>
void mangoldt_plateaus(std::int64_t X_hi, const ScanConfig& cfg, Term term, Visit visit) {
  ExactSum sum;
  std::int64_t start = 1;
  detail::drive_mangoldt(1, X_hi + 1, cfg, [&](const MangoldtBlock& b) {
    for (const PrimePower& e : b.entries) {
      if (e.n > start) visit(start, e.n - 1, sum.value());
      sum.add(term(e));
      start = e.n;
    }
  });
  visit(start, X_hi, sum.value());
}

Enclosure log_p(const PrimePower& e) { return log(Enclosure::point(static_cast<double>(e.p))); }

}  // namespace

ScanReport verify_root_model(const RootModel& model, std::int64_t X_lo, std::int64_t X_hi, const ScanConfig& cfg) {
  validate_range(X_lo, X_hi, cfg);
  if (static_cast<double>(X_lo) < model.range_lo || static_cast<double>(X_hi) > model.range_hi)
    throw hypothesis_error("verify_root_model: range [" + std::to_string(X_lo) + ", " + std::to_string(X_hi) +
                           "] outside the model's claimed range");
  ScanReport base;
  base.X_lo = X_lo;
  base.X_hi = X_hi;
  base.model = model;
  base.limit = model.coefficient_enclosure();
  const bool inv = model.form == ModelForm::inv_sqrt_upper;

  switch (model.target) {
    case ModelTarget::M: {
      if (inv) throw std::invalid_argument("verify_root_model: M models use the c sqrt(X) form");
      base.claim = "|M(x)| <= " + model.coefficient.str() + " sqrt(x)";
      const std::int64_t num = model.coefficient.num;
      const std::int64_t den = model.coefficient.den;
      if (num <= 0 || num > (1LL << 31) || den > (1LL << 31))
        throw std::invalid_argument("verify_root_model: coefficient needs a small positive rational");
      const int128 num2 = static_cast<int128>(num) * num;
      const int128 den2 = static_cast<int128>(den) * den;
      ScanReport r = base;
      std::int64_t M = 0;
      std::int64_t best_M = 0;
      std::int64_t best_n = 0;
      detail::drive_mobius(1, X_hi + 1, cfg, [&](const MobiusBlock& b) {
        for (std::int64_t n = b.segment.lo; n < b.segment.hi; ++n) {
          M += b.mu(n);
          if (n < X_lo) continue;
          ++r.checked;
          const int128 M2 = static_cast<int128>(M) * M;
          // |M| <= (num/den) sqrt(n)  <=>  M^2 den^2 <= num^2 n
          if (M2 * den2 > num2 * n) {
            ++r.violation_count;
            if (r.violations.size() < kListedPoints) r.violations.push_back(n);
          }
          // M^2/n > best_M^2/best_n, exactly
          if (best_n == 0 || M2 * best_n > static_cast<int128>(best_M) * best_M * n) {
            best_M = M;
            best_n = n;
          }
        }
      });
      r.argmax_x = best_n;
      r.max_statistic = abs(Enclosure::integer(best_M)) / sqrt(Enclosure::integer(best_n));
      return r;
    }
    case ModelTarget::psi_minus_x: {
      base.claim = inv ? "|psi(x) - x| <= " + model.coefficient.str() + " / sqrt(x)"
                       : "|psi(x) - x| <= " + model.coefficient.str() + " sqrt(x)";
      ReportBuilder rb(base);
      auto check = [&](std::int64_t x, const Enclosure& psi) {
        Enclosure d = abs(psi - Enclosure::integer(x));
        Enclosure r = sqrt(Enclosure::point(static_cast<double>(x)));
        rb.observe(x, inv ? d * r : d / r);
      };
      mangoldt_plateaus(X_hi, cfg, log_p, [&](std::int64_t a, std::int64_t b, const Enclosure& v) {
        std::int64_t l = std::max(a, X_lo);
        std::int64_t r = std::min(b, X_hi);
        if (l > r) return;
        check(l, v);
        if (r != l) check(r, v);
      });
      return rb.take();
    }
    case ModelTarget::m1: {
      base.claim = inv ? "|m1(x)| <= " + model.coefficient.str() + " / sqrt(x)"
                       : "|m1(x)| <= " + model.coefficient.str() + " sqrt(x)";
      ReportBuilder rb(base);
      ExactSum m;
      std::int64_t M = 0;
      detail::drive_mobius(1, X_hi + 1, cfg, [&](const MobiusBlock& b) {
        for (std::int64_t n = b.segment.lo; n < b.segment.hi; ++n) {
          int mu = b.mu(n);
          M += mu;
          if (mu != 0) m.add(Enclosure::ratio(mu, n));
          if (n < X_lo) continue;
          Enclosure d = abs(m.value() - Enclosure::ratio(M, n));
          Enclosure r = sqrt(Enclosure::point(static_cast<double>(n)));
          rb.observe(n, inv ? d * r : d / r);
        }
      });
      return rb.take();
    }
  }
  throw std::logic_error("verify_root_model: unknown target");
}

ScanReport lambda_sqrt_envelope_check(std::int64_t X_lo, std::int64_t X_hi, const ScanConfig& cfg,
                                      const EnvelopeConstants& k) {
  validate_range(X_lo, X_hi, cfg);
  if (X_lo < 2) throw std::invalid_argument("envelope check needs X >= 2");
  ScanReport base;
  base.claim = "-" + (Rational(0) - k.lower_offset).str() + " - c log X <= sum_{k<=X} Lambda(k)/sqrt(k) - 2 sqrt(X) <= c log X " +
               k.upper_offset.str() + ", c = " + k.log_coefficient.str();
  base.X_lo = X_lo;
  base.X_hi = X_hi;
  base.limit = Enclosure::rational(k.log_coefficient);
  const Enclosure up = Enclosure::rational(k.upper_offset);
  const Enclosure low = Enclosure::rational(k.lower_offset);
  ReportBuilder rb(base);
  auto term = [](const PrimePower& e) { return log_p(e) * inv_sqrt(static_cast<double>(e.n)); };
  mangoldt_plateaus(X_hi, cfg, term, [&](std::int64_t a, std::int64_t b, const Enclosure& S) {
    std::int64_t l = std::max(a, X_lo);
    std::int64_t r = std::min(b, X_hi);
    if (l > r) return;
    // S - 2 sqrt X - c log X decreases in X: upper side at the left end.
    {
      Enclosure X = Enclosure::point(static_cast<double>(l));
      rb.observe(l, (S - 2 * sqrt(X) - up) / log(X));
    }
    // S - 2 sqrt X + c log X decreases for X > c^2: lower side at the right end.
    {
      Enclosure X = Enclosure::point(static_cast<double>(r));
      rb.observe(r, -(S - 2 * sqrt(X) - low) / log(X));
    }
  });
  return rb.take();
}

ScanReport lambda_over_k_check(std::int64_t y_lo, std::int64_t y_hi, const Rational& offset, const ScanConfig& cfg) {
  validate_range(y_lo, y_hi, cfg);
  ScanReport base;
  base.claim = "sum_{k<=y} Lambda(k)/k <= log y - " + offset.str();
  base.X_lo = y_lo;
  base.X_hi = y_hi;
  base.limit = -Enclosure::rational(offset);
  ReportBuilder rb(base);
  auto term = [](const PrimePower& e) { return log_p(e) / Enclosure::point(static_cast<double>(e.n)); };
  mangoldt_plateaus(y_hi, cfg, term, [&](std::int64_t a, std::int64_t b, const Enclosure& S) {
    std::int64_t l = std::max(a, y_lo);
    if (l > std::min(b, y_hi)) return;
    // S - log y decreases in y: the left end dominates.
    rb.observe(l, S - log(Enclosure::point(static_cast<double>(l))));
  });
  return rb.take();
}

ThresholdResult threshold_scan(std::int64_t reciprocal, std::int64_t X_hi, std::int64_t stride, const ScanConfig& cfg,
                               const std::string& checkpoint_path) {
  if (reciprocal < 1) throw std::invalid_argument("threshold: reciprocal must be >= 1");
  validate_scan_args(X_hi, stride, cfg);
  std::int64_t M = 0;
  std::int64_t last = 0;  // 0 = none
  std::int64_t crossings = 0;
  std::int64_t done = 0;
  std::optional<CheckpointLog> log;
  const std::vector<std::string> columns = {"x", "M", "last_crossing", "crossings"};
  if (!checkpoint_path.empty()) {
    CheckpointLog::Header header = {
        {"kind", "threshold"}, {"reciprocal", std::to_string(reciprocal)}, {"stride", std::to_string(stride)}};
    std::int64_t expected = stride;
    auto keep = [&](const CheckpointLog::Record& r) {
      try {
        std::int64_t x = std::stoll(r[0]);
        if (x != expected || x > X_hi) return false;
        expected += stride;
        return true;
      } catch (const std::exception&) {
        return false;
      }
    };
    log.emplace(checkpoint_path, header, columns, keep);
    if (!log->resumed().empty()) {
      const auto& r = log->resumed().back();
      done = std::stoll(r[0]);
      M = std::stoll(r[1]);
      last = std::stoll(r[2]);
      crossings = std::stoll(r[3]);
    }
  }
  const int128 L = reciprocal;
  detail::drive_mobius(done + 1, X_hi + 1, cfg, [&](const MobiusBlock& b) {
    for (std::int64_t n = b.segment.lo; n < b.segment.hi; ++n) {
      M += b.mu(n);
      int128 a = M < 0 ? -static_cast<int128>(M) : M;
      if (a * L > n) {
        last = n;
        ++crossings;
      }
      if (log && n % stride == 0)
        log->append({std::to_string(n), std::to_string(M), std::to_string(last), std::to_string(crossings)});
    }
    if (log) log->flush();
  });
  ThresholdResult out;
  if (last > 0) out.last_crossing = last;
  out.scanned_to = X_hi;
  out.crossings = crossings;
  return out;
}

}  // namespace mertens
