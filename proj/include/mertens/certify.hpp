#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mertens/enclosure.hpp"
#include "mertens/model.hpp"
#include "mertens/rational.hpp"
#include "mertens/summatory.hpp"

namespace mertens {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- ledger

// Direction in which a coefficient makes its hypothesis weaker. Bounds
// built from the ledger never decrease when an entry moves that way.
enum class Weaken { up, down };

struct LedgerEntry {
  std::string key;
  std::string lo_text;  // decimal literals as written in the ledger
  std::string hi_text;
  double range_lo = 0;
  double range_hi = kInfinity;
  std::string range_lo_text = "0";  // kept so serialization round-trips exactly
  std::string range_hi_text = "inf";
  Weaken weaken = Weaken::up;
  std::string provenance;

  Enclosure lo() const;
  Enclosure hi() const;
  // The endpoint a bound must use: hi() when weaken is up, lo() otherwise.
  Enclosure worst() const;
};

// External estimates the certificates rest on. Text format, one entry per
// line, '#' starts a comment:
//
//   key  lo  hi  range_lo  range_hi  up|down  provenance text...
//
// Range endpoints accept decimal literals, "inf" and "exp(N)".
class HypothesisLedger {
 public:
  static HypothesisLedger standard();
  static HypothesisLedger parse(std::string_view text);
  static HypothesisLedger load(const std::string& path);

  std::string serialize() const;
  // FNV-1a 64 of serialize().
  std::uint64_t hash() const;
  std::string hash_hex() const;

  bool has(std::string_view key) const;
  const LedgerEntry& entry(std::string_view key) const;  // throws hypothesis_error
  Enclosure value(std::string_view key) const { return entry(key).worst(); }
  const std::vector<LedgerEntry>& entries() const { return entries_; }

  // Throws hypothesis_error naming the entry unless [lo, hi] lies in its range.
  void require_range(std::string_view key, double lo, double hi) const;

  // Copy with both endpoints of one coefficient multiplied by `factor`.
  HypothesisLedger scaled(std::string_view key, const Rational& factor) const;

  // The square-root model stored under model.M, model.psi or model.m1.
  RootModel root_model(ModelTarget target) const;

 private:
  std::vector<LedgerEntry> entries_;
};

// ---------------------------------------------------------- certificates

enum class Quantity {
  N,  // sup |N(x)| / (x log x)
  M,  // sup |M(x)| / x
};
std::string_view quantity_name(Quantity q);

struct TraceTerm {
  std::string lemma;
  std::string term;
  Enclosure value;
  std::vector<std::string> hypotheses;  // ledger keys consumed
};

struct BoundCertificate {
  std::string name;
  Quantity quantity = Quantity::N;
  double x_lo = 0;
  double x_hi = kInfinity;
  std::vector<TraceTerm> trace;
  // [sum of lower endpoints, sum of upper endpoints], accumulated in trace
  // order with outward rounding. The certified claim is quantity <= bound.hi.
  Enclosure bound;
  std::string ledger_hash;
  std::vector<std::string> conditions;  // side conditions verified while building

  std::vector<std::string> hypotheses() const;  // sorted, unique
};

// Recomputes the bound from the trace.
Enclosure replay_trace(const std::vector<TraceTerm>& trace);
// True when replay_trace reproduces cert.bound bitwise.
bool replay_matches(const BoundCertificate& cert);

// JSON document with exact hexfloat endpoints; round-trips bitwise.
std::string certificate_json(const BoundCertificate& cert, int indent = 2);
BoundCertificate certificate_from_json(std::string_view text);

// ----------------------------------------------------- reproduction checks

// Comparison of a computed bound with a published printed value.
struct Reproduction {
  std::string label;
  std::string printed;
  Enclosure computed;
  std::string computed_text;
  bool passed = false;
};

// Printed upper bound p whose last digit has unit u ("5.60e-6": u = 1e-8):
// passes iff computed.hi <= p + u. Smaller values pass.
Reproduction reproduce_upper(std::string label, std::string_view printed, const Enclosure& computed);
// Printed "1/L": passes iff floor(1 / computed.hi) == L.
Reproduction reproduce_reciprocal(std::string label, std::int64_t L, const Enclosure& computed);

// ------------------------------------------------------------- evaluators

struct PipelineOptions {
  // Coefficient of log in the Lambda/sqrt(k) envelope as used by the
  // Lambda-part bounds. The envelope lemma itself proves 0.47; the bound
  // evaluators use 0.14 unless the conservative value is selected.
  Rational envelope_log_coefficient{14, 100};
  Rational envelope_offset{119, 100};       // sum - 2 sqrt(X) <= c log X - offset
  Rational lambda_over_k_offset{1, 2};      // sum Lambda(k)/k <= log y - offset, y >= 300
  Rational mu2_sqrt_coefficient{17, 100};   // (1/sqrt x) sum mu^2/sqrt k <= 12/(pi^2 sqrt y) + c log(x/y)/sqrt x
  Rational gap_constant{227, 1000};         // |N/(x log x) - M/x| <= c / (sqrt x log x), x in [1.3e9, 6e16]
  Rational beta_rounded{8, 100};
  bool use_beta_enclosure = false;          // beta itself instead of its rounding 0.08
  // Digits kept when rounding (6/pi^2) sup |psi(t) - t| / t upward; 0 keeps
  // the enclosure.
  int far_psi_digits = 2;

  // Inputs computed by summatory when absent: m1(1e8) and sum_{j<=1e8} mu^2(j)/sqrt(j).
  std::optional<Enclosure> m1_at_y;
  std::optional<Enclosure> mu2_sqrt_sum;
  ScanConfig scan;

  std::int64_t reciprocal = 160383;         // certified: |M(x)| <= x / reciprocal
  std::int64_t threshold = 8400000000LL;    // from this x on
};

PipelineOptions conservative_options();  // envelope log coefficient 0.47

// A bound with its itemized terms.
struct TermBound {
  Enclosure value;  // sum of the terms
  std::vector<TraceTerm> terms;
};

// Hyperbola split with y = 1e8 on [x_lo, x_hi] within [1e16, 2e16].
TermBound bound_tail_small(const HypothesisLedger& L, std::int64_t y, double x_lo, double x_hi,
                           const Enclosure& m1_value);
TermBound bound_lambda_part_small(const HypothesisLedger& L, std::int64_t y, double x_lo, double x_hi,
                                  const PipelineOptions& opt = {});
TermBound bound_psi_part_small(const HypothesisLedger& L, std::int64_t y, double x_lo, double x_hi,
                               const Enclosure& mu2_sqrt_sum);

// 5 + 2 c (sqrt(T) - sqrt(33)) >= int_1^T |M(t)|/t dt, c the M model.
Enclosure integral_head_constant(const HypothesisLedger& L, const Enclosure& T);

// Upper bound on |N(x)/(x log x) - M(x)/x| for every x >= x_lo, assuming
// |M(u)|/u <= sup_M for T <= u <= x/6. Requires 33 <= T <= 1e16.
TermBound n_to_m_gap(const HypothesisLedger& L, double x_lo, const Enclosure& sup_M, const Enclosure& T,
                     const PipelineOptions& opt = {});

// T = (c / sup)^2 with c the M model: the least T with c/sqrt(T) <= sup.
Enclosure model_threshold(const HypothesisLedger& L, std::int64_t reciprocal);

struct StepResult {
  BoundCertificate N;
  BoundCertificate M;
};

struct FirstRangeResult {
  StepResult bounds;
  std::vector<Reproduction> reproductions;
  bool passed() const;
};
FirstRangeResult first_range_pipeline(const HypothesisLedger& L, const PipelineOptions& opt = {});

// X = a 1e16, y = sqrt(X), x in [X, 2X]; `sup_M` bounds |M(t)|/t on [1e16, 2X].
StepResult dyadic_step(const HypothesisLedger& L, const Rational& a, const Enclosure& sup_M,
                       const PipelineOptions& opt = {});

struct DyadicResult {
  std::vector<Rational> a_values;
  std::vector<StepResult> steps;
  std::vector<bool> within_reciprocal;  // the table's last row
  std::vector<Reproduction> reproductions;
  bool chain_ok = false;
  std::string chain_message;
  bool passed() const;
};
DyadicResult dyadic_pipeline(const HypothesisLedger& L, const PipelineOptions& opt = {},
                             const Enclosure& sup_M = Enclosure::ratio(1, 160383));

// 10^(19/4) / c: the largest L with y = (c L)^2 satisfying y^2 <= 1e19.
Enclosure L_star(const HypothesisLedger& L);

// x >= 1e19 with y = (c L)^2, or y = 10^9.5 exactly when L is absent (L = L*).
// Throws hypothesis_error when y^2 <= 1e19 cannot be certified.
// `sup_sources` names the ledger entries behind |M(u)|/u <= 1/L for u >= y.
StepResult large_x_step(const HypothesisLedger& L, std::optional<std::int64_t> Lvalue,
                        const PipelineOptions& opt = {}, const std::vector<std::string>& sup_sources = {"model.M"});

// The same step at a given y, with |M(u)|/u <= tail_sup for u > 1e16. The
// model covers [y, 1e16]. Bounds here never decrease as the ledger weakens;
// large_x_step itself ties y to model.M and so does not share that property.
StepResult large_x_step_at(const HypothesisLedger& L, const Enclosure& y, const Enclosure& tail_sup,
                           const std::string& label, const PipelineOptions& opt = {},
                           const std::vector<std::string>& sup_sources = {"model.M"},
                           std::vector<std::string> conditions = {});

struct LargeXResult {
  std::vector<std::optional<std::int64_t>> L_values;  // nullopt is L*
  std::vector<Enclosure> y_values;
  std::vector<StepResult> steps;
  std::vector<std::int64_t> N_floors;
  std::vector<std::int64_t> M_floors;
  Enclosure L_star;
  std::vector<Reproduction> reproductions;
  bool converged = false;
  bool passed() const;
};
LargeXResult large_x_iteration(const HypothesisLedger& L, const PipelineOptions& opt = {}, int max_steps = 10);

// Upper bounds on squarefree sums.
//   over_n(X)            >= sum_{n<=X} mu^2(n)/n                 (6/pi^2) log(7X), X >= 1
//   window(x, y, Y)      >= sum_{x/Y<j<=x/y} mu^2(j)/(j sqrt(x/j))
//                           (6/pi^2)(2/sqrt y - 2/sqrt Y) + 1.31 sqrt(Y)/x + 0.35 log(Y/y)/sqrt x
//   sqrt_sum(x, y)       >= (1/sqrt x) sum_{k<=x/y} mu^2(k)/sqrt(k)
//                           12/(pi^2 sqrt y) + 0.17 log(x/y)/sqrt x, x/y >= 1e4
struct Mu2Bounds {
  std::optional<Enclosure> over_n;
  std::optional<Enclosure> window;
  std::optional<Enclosure> sqrt_sum;
};
Enclosure mu2_over_n_bound(const HypothesisLedger& L, const Enclosure& X);
Enclosure mu2_window_bound(const HypothesisLedger& L, const Enclosure& x, const Enclosure& y, const Enclosure& Y);
Enclosure mu2_sqrt_sum_bound(const Enclosure& x, const Enclosure& y, const PipelineOptions& opt = {});
Mu2Bounds mu2_sum_bounds(const HypothesisLedger& L, const Enclosure& x, const Enclosure& y, const Enclosure& Y,
                         const PipelineOptions& opt = {});

// An intermediate constant re-derived from the ledger.
struct DerivedCheck {
  std::string name;
  std::string claim;
  Enclosure computed;
  bool passed = false;
  bool derivable = true;  // false: the constant does not follow from the ledger
};
std::vector<DerivedCheck> derived_constant_checks(const HypothesisLedger& L, const PipelineOptions& opt = {});

struct ThresholdAssembly {
  FirstRangeResult first_range;
  DyadicResult dyadic;
  LargeXResult large_x;
  BoundCertificate root_extension;             // [threshold, 1e16] from the M model
  std::vector<BoundCertificate> certificates;  // M certificates, sorted by x_lo
  Enclosure T;                                 // (c * reciprocal)^2
  std::vector<DerivedCheck> derived;
  std::vector<Reproduction> reproductions;
  bool cover_ok = false;
  std::string cover_message;
  std::int64_t reciprocal = 0;        // every certificate is <= 1/reciprocal
  std::int64_t large_reciprocal = 0;  // floor(1 / bound) for x >= 1e19
  bool passed() const;
};
ThresholdAssembly threshold_assembly(const HypothesisLedger& L, const PipelineOptions& opt = {});

// log10 of the x where 1/R = 0.130/log x - 0.118/log^2 x (the larger root).
Enclosure ramare_crossover(std::int64_t R = 160383);

}  // namespace mertens
