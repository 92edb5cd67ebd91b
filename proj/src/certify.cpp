#include "mertens/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mertens/checkpoint.hpp"
#include "mertens/error.hpp"
#include "mertens/identity.hpp"

namespace mertens {

namespace {

Enclosure E(const Rational& r) { return Enclosure::rational(r); }
Enclosure dec(std::string_view s) { return Enclosure::decimal(s); }
Enclosure pt(double v) { return Enclosure::point(v); }

Enclosure six_over_pi2() { return Enclosure::integer(6) / constants().pi_squared; }
Enclosure twelve_over_pi2() { return Enclosure::integer(12) / constants().pi_squared; }

class TermList {
 public:
  explicit TermList(std::string lemma) : lemma_(std::move(lemma)) {}
  TermList& add(std::string term, const Enclosure& v, std::vector<std::string> hyps) {
    terms_.push_back({lemma_, std::move(term), v, std::move(hyps)});
    return *this;
  }
  TermBound done() { return {replay_trace(terms_), std::move(terms_)}; }

 private:
  std::string lemma_;
  std::vector<TraceTerm> terms_;
};

BoundCertificate make_certificate(std::string name, Quantity q, double x_lo, double x_hi,
                                  const std::vector<const TermBound*>& parts, const HypothesisLedger& L,
                                  std::vector<std::string> conditions = {}) {
  BoundCertificate c;
  c.name = std::move(name);
  c.quantity = q;
  c.x_lo = x_lo;
  c.x_hi = x_hi;
  for (const TermBound* p : parts) c.trace.insert(c.trace.end(), p->terms.begin(), p->terms.end());
  c.bound = replay_trace(c.trace);
  c.ledger_hash = L.hash_hex();
  c.conditions = std::move(conditions);
  return c;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw hypothesis_error(what);
}

// The largest value a term with these itemized parts can take is at the
// endpoint noted beside each formula; every evaluator below states it.
Enclosure envelope_bracket(const Enclosure& y, const PipelineOptions& opt) {
  // sum_{k<=y} Lambda(k)/sqrt(k) <= 2 sqrt(y) + c log y - offset
  return 2 * sqrt(y) + E(opt.envelope_log_coefficient) * log(y) - E(opt.envelope_offset);
}

Enclosure beta_used(const PipelineOptions& opt) {
  const Enclosure beta = beta_constant();
  if (opt.use_beta_enclosure) return beta;
  const Enclosure r = E(opt.beta_rounded);
  require(beta.certainly_le(r), "beta rounding " + opt.beta_rounded.str() + " is below beta");
  return r;
}

}  // namespace

PipelineOptions conservative_options() {
  PipelineOptions o;
  o.envelope_log_coefficient = Rational(47, 100);
  return o;
}

// ---------------------------------------------------------------- first range

TermBound bound_tail_small(const HypothesisLedger& L, std::int64_t y, double x_lo, double x_hi,
                           const Enclosure& m1_value) {
  require(x_lo > 1 && x_lo <= x_hi, "tail bound: invalid x range");
  const double Y = static_cast<double>(y);
  L.require_range("model.psi", x_lo / Y, x_hi / Y);
  L.require_range("model.M", Y, Y);
  const Enclosure xl = pt(x_lo);
  const Enclosure lx = log(xl);
  // (|psi(x/y) - x/y|/(x/y)) (|M(y)|/y) <= c_psi c_M / sqrt(x): largest at x_lo.
  return TermList("hyperbola tail, y = " + std::to_string(y))
      .add("psi_M_product", L.value("model.psi") * L.value("model.M") / (sqrt(xl) * lx), {"model.psi", "model.M"})
      .add("m1", abs(m1_value) / lx, {})
      .done();
}

TermBound bound_lambda_part_small(const HypothesisLedger& L, std::int64_t y, double x_lo, double x_hi,
                                  const PipelineOptions& opt) {
  require(x_lo > 1 && x_lo <= x_hi, "lambda part: invalid x range");
  const double Yd = static_cast<double>(y);
  // M(x/k) for 1 < k <= x/y: arguments in [y, x_hi/2].
  L.require_range("model.M", Yd, x_hi / 2);
  // Envelope at X = x/y rests on the psi model over [11, X].
  L.require_range("model.psi", 11, x_hi / Yd);
  const Enclosure cM = L.value("model.M");
  const Enclosure c = E(opt.envelope_log_coefficient);
  const Enclosure yv = Enclosure::integer(y);
  const Enclosure xl = pt(x_lo), xh = pt(x_hi);
  // cM (2 sqrt(x/y) + c log x - c log y - offset) / (sqrt(x) log x), split:
  //   cM 2 / (sqrt(y) log x)                    decreasing: x_lo
  //   cM c / sqrt(x)                            decreasing: x_lo
  //   -cM (offset + c log y) / (sqrt(x) log x)  negative, increasing: x_hi
  return TermList("Lambda part, y = " + std::to_string(y))
      .add("leading", cM * 2 / (sqrt(yv) * log(xl)), {"model.M"})
      .add("log_term", cM * c / sqrt(xl), {"model.M", "model.psi"})
      .add("offset_term", -(cM * (E(opt.envelope_offset) + c * log(yv))) / (sqrt(xh) * log(xh)),
           {"model.M", "model.psi"})
      .done();
}

TermBound bound_psi_part_small(const HypothesisLedger& L, std::int64_t y, double x_lo, double x_hi,
                               const Enclosure& mu2_sqrt_sum) {
  require(x_lo > 1 && x_lo <= x_hi, "psi part: invalid x range");
  L.require_range("model.psi", x_lo / static_cast<double>(y), x_hi);
  const Enclosure xl = pt(x_lo);
  // c_psi S / (sqrt(x) log x): x_lo.
  return TermList("psi part, y = " + std::to_string(y))
      .add("mu2_sqrt_sum", L.value("model.psi") * mu2_sqrt_sum / (sqrt(xl) * log(xl)), {"model.psi"})
      .done();
}

bool FirstRangeResult::passed() const {
  for (const Reproduction& r : reproductions)
    if (!r.passed) return false;
  return true;
}

namespace {

Reproduction bounded_check(std::string label, std::string printed, const Enclosure& computed, bool ok) {
  Reproduction r;
  r.label = std::move(label);
  r.printed = std::move(printed);
  r.computed = computed;
  r.computed_text = computed.str(10);
  r.passed = ok;
  return r;
}

}  // namespace

FirstRangeResult first_range_pipeline(const HypothesisLedger& L, const PipelineOptions& opt) {
  constexpr std::int64_t y = 100000000;
  constexpr double x_lo = 1e16, x_hi = 2e16;
  const Enclosure m1 = opt.m1_at_y ? *opt.m1_at_y : m1_at(y, opt.scan);
  const Enclosure S = opt.mu2_sqrt_sum ? *opt.mu2_sqrt_sum : weighted_sum(Kind::mu2_over_sqrt, y, opt.scan);

  FirstRangeResult out;
  auto& rep = out.reproductions;
  rep.push_back(bounded_check("m1(1e8) in (0, 1.195e-6)", "(0, 1.195e-6)", m1,
                              m1.lo > 0 && m1.certainly_less(dec("1.195e-6"))));
  rep.push_back(bounded_check("sum_{j<=1e8} mu^2(j)/sqrt(j) <= 12158.55", "12158.55", S,
                              S.certainly_le(dec("12158.55"))));

  const TermBound tail = bound_tail_small(L, y, x_lo, x_hi, m1);
  const TermBound lam = bound_lambda_part_small(L, y, x_lo, x_hi, opt);
  const TermBound psi = bound_psi_part_small(L, y, x_lo, x_hi, S);

  rep.push_back(reproduce_upper("tail: psi_M_product", "1.46e-10", tail.terms[0].value));
  rep.push_back(reproduce_upper("tail: m1 term", "3.25e-8", tail.terms[1].value));
  rep.push_back(reproduce_upper("tail bound", "3.3e-8", tail.value));
  rep.push_back(reproduce_upper("Lambda part: leading", "3.0998e-6", lam.terms[0].value));
  rep.push_back(reproduce_upper("Lambda part: log term", "8e-10", lam.terms[1].value));
  rep.push_back(reproduce_upper("Lambda part: offset term", "-4e-10", lam.terms[2].value));
  rep.push_back(reproduce_upper("Lambda part", "3.1002e-6", lam.value));
  rep.push_back(reproduce_upper("psi part", "3.1023e-6", psi.value));

  out.bounds.N = make_certificate("N on [1e16, 2e16]", Quantity::N, x_lo, x_hi, {&tail, &lam, &psi}, L);
  rep.push_back(reproduce_upper("N bound on [1e16, 2e16]", "6.234983e-6", out.bounds.N.bound));
  rep.push_back(bounded_check("N bound <= 1/160385", "1/160385", out.bounds.N.bound,
                              out.bounds.N.bound.certainly_le(Enclosure::ratio(1, 160385))));

  // |N/(x log x) - M/x| <= c / (sqrt(x) log x) on [1.3e9, 6e16]; decreasing: x_lo.
  require(x_lo >= 1.3e9 && x_hi <= 6e16, "gap constant used outside [1.3e9, 6e16]");
  const Enclosure xl = pt(x_lo);
  const TermBound gap = TermList("N to M gap").add("gap", E(opt.gap_constant) / (sqrt(xl) * log(xl)), {"model.M"}).done();
  out.bounds.M = make_certificate("M on [1e16, 2e16]", Quantity::M, x_lo, x_hi, {&tail, &lam, &psi, &gap}, L);
  rep.push_back(reproduce_upper("M bound on [1e16, 2e16]", "6.235045e-6", out.bounds.M.bound));
  rep.push_back(bounded_check("M bound <= 1/" + std::to_string(opt.reciprocal), "1/" + std::to_string(opt.reciprocal),
                              out.bounds.M.bound,
                              out.bounds.M.bound.certainly_le(Enclosure::ratio(1, opt.reciprocal))));
  return out;
}

// ---------------------------------------------------------------- N to M gap

Enclosure integral_head_constant(const HypothesisLedger& L, const Enclosure& T) {
  // int_1^33 |M(t)|/t dt = sum_{n<33} |M(n)| log(1 + 1/n) < 5, and the
  // model bounds the rest by c int_33^T t^{-1/2} dt.
  return 5 + 2 * L.value("model.M") * (sqrt(T) - sqrt(Enclosure::integer(33)));
}

TermBound n_to_m_gap(const HypothesisLedger& L, double x_lo, const Enclosure& sup_M, const Enclosure& T,
                     const PipelineOptions& opt) {
  const LedgerEntry& m = L.entry("model.M");
  if (T.lo < 33 || T.hi > m.range_hi)
    throw hypothesis_error("N to M gap: T = " + T.str(8) + " outside [33, " + std::to_string(m.range_hi) + "]");
  L.require_range("model.M", 33, T.hi);
  require(x_lo > 1, "N to M gap: x_lo must exceed 1");
  const Enclosure xl = pt(x_lo);
  const Enclosure lx = log(xl);
  // Each term decreases in x: x_lo.
  return TermList("N to M gap")
      .add("beta_sup", beta_used(opt) * sup_M / lx, {})
      .add("integral_head", integral_head_constant(L, T) / (xl * lx), {"model.M"})
      .add("one_over_x", 1 / xl, {})
      .done();
}

Enclosure model_threshold(const HypothesisLedger& L, std::int64_t reciprocal) {
  return square(L.value("model.M") * reciprocal);
}

// ---------------------------------------------------------------- dyadic

StepResult dyadic_step(const HypothesisLedger& L, const Rational& a, const Enclosure& sup_M,
                       const PipelineOptions& opt) {
  if (!(Rational(0) < a) || Rational(500) < a)
    throw hypothesis_error("dyadic step: a = " + a.str() + " outside (0, 500]");
  const Enclosure X = E(a) * dec("1e16");
  const Enclosure X2 = 2 * X;
  const Enclosure y = sqrt(X);
  const Enclosure lX = log(X);
  const Enclosure cM = L.value("model.M"), cpsi = L.value("model.psi"), cm1 = L.value("model.m1");

  // psi(y) and psi(x/j) for x/j >= x/y >= y, up to 2X.
  L.require_range("model.psi", y.lo, X2.hi);
  // M(x/y) and M(x/k) for 2a <= k <= y: arguments in [sqrt(X), 1e16].
  L.require_range("model.M", y.lo, 1e16);
  // m1(x/y), x/y in [y, 2y].
  L.require_range("model.m1", y.lo, 2 * y.hi);
  require(y.lo >= 1e4, "dyadic step: squarefree sqrt-sum bound needs x/y >= 1e4");

  // sum_{k < 2a} Lambda(k)/k <= log(ceil(2a) - 1), empty below a = 1/2.
  const std::int64_t z = Rational(2 * a.num, a.den).floor() + (Rational(2 * a.num, a.den).is_integer() ? 0 : 1) - 1;
  const Enclosure head = z >= 1 ? log(Enclosure::integer(z)) / lX * sup_M : Enclosure::integer(0);

  // Every term decreases in x on [X, 2X], or is constant: x = X.
  const TermBound n_terms =
      TermList("dyadic a = " + a.str())
          .add("root_models", (cpsi * cM / sqrt(X) + cm1 / sqrt(X / y)) / lX, {"model.psi", "model.M", "model.m1"})
          .add("mu2_psi_main", cpsi / lX * twelve_over_pi2() / sqrt(y), {"model.psi", "Q.sharp", "Q.crude"})
          .add("mu2_psi_log", E(opt.mu2_sqrt_coefficient) * cpsi / sqrt(X), {"model.psi", "Q.sharp", "Q.crude"})
          .add("lambda_head", head, {"ramare.R.small"})
          .add("lambda_tail", cM / (sqrt(X) * lX) * envelope_bracket(y, opt), {"model.M", "model.psi"})
          .done();

  StepResult r;
  r.N = make_certificate("N on [" + X.str(6) + ", " + X2.str(6) + "]", Quantity::N, X.lo, X2.hi, {&n_terms}, L);
  // sup over [T, x/6]: the model gives c/sqrt(u) <= c/sqrt(T) = 1/R up to
  // 1e16, the hypothesis covers [1e16, X/3].
  const Enclosure sup_gap = max(sup_M, Enclosure::ratio(1, opt.reciprocal));
  const TermBound gap = n_to_m_gap(L, X.lo, sup_gap, model_threshold(L, opt.reciprocal), opt);
  r.M = make_certificate("M on [" + X.str(6) + ", " + X2.str(6) + "]", Quantity::M, X.lo, X2.hi, {&n_terms, &gap}, L);
  return r;
}

bool DyadicResult::passed() const {
  if (!chain_ok) return false;
  return std::all_of(within_reciprocal.begin(), within_reciprocal.end(), [](bool b) { return b; });
}

DyadicResult dyadic_pipeline(const HypothesisLedger& L, const PipelineOptions& opt, const Enclosure& sup_M) {
  static const char* kN[] = {"5.60e-6", "4.79e-6", "4.13e-6", "3.59e-6", "3.16e-6",
                             "2.82e-6", "2.56e-6", "2.35e-6", "2.19e-6"};
  static const char* kM[] = {"5.61e-6", "4.80e-6", "4.14e-6", "3.60e-6", "3.18e-6",
                             "2.84e-6", "2.57e-6", "2.36e-6", "2.20e-6"};
  DyadicResult out;
  out.a_values = {2, 4, 8, 16, 32, 64, 128, 256, 500};
  const Enclosure limit = Enclosure::ratio(1, opt.reciprocal);
  // [1e16, 2e16] is covered by the first-range certificate.
  double covered = 2e16;
  out.chain_ok = true;
  for (std::size_t i = 0; i < out.a_values.size(); ++i) {
    const Rational& a = out.a_values[i];
    StepResult s = dyadic_step(L, a, sup_M, opt);
    // M(x/k), k >= 2, needs the sup hypothesis on [1e16, X].
    if (out.chain_ok && s.N.x_lo > covered) {
      out.chain_ok = false;
      out.chain_message = "a = " + a.str() + ": hypothesis range [1e16, X] not covered (covered to " +
                          decimal17(covered) + ")";
    }
    const bool ok = s.M.bound.certainly_le(limit) && s.M.bound.certainly_le(sup_M);
    out.within_reciprocal.push_back(ok);
    if (out.chain_ok && !ok) {
      out.chain_ok = false;
      out.chain_message = "a = " + a.str() + ": M bound " + s.M.bound.str(8) + " exceeds the hypothesis";
    }
    if (ok) covered = std::max(covered, s.M.x_hi);
    out.reproductions.push_back(reproduce_upper("a = " + a.str() + " N", kN[i], s.N.bound));
    out.reproductions.push_back(reproduce_upper("a = " + a.str() + " M", kM[i], s.M.bound));
    out.steps.push_back(std::move(s));
  }
  if (out.chain_ok && covered < 1e19) {
    out.chain_ok = false;
    out.chain_message = "dyadic chain ends at " + decimal17(covered) + " < 1e19";
  }
  if (out.chain_ok) out.chain_message = "covers [2e16, 1e19]";
  return out;
}

// ---------------------------------------------------------------- large x

Enclosure L_star(const HypothesisLedger& L) { return sqrt(sqrt(dec("1e19"))) / L.value("model.M"); }

StepResult large_x_step(const HypothesisLedger& L, std::optional<std::int64_t> Lvalue, const PipelineOptions& opt,
                        const std::vector<std::string>& sup_sources) {
  const Enclosure cM = L.value("model.M");
  const Enclosure x0 = dec("1e19");
  const Enclosure root4 = sqrt(sqrt(x0));  // 10^4.75
  if (!Lvalue) {
    // y = 10^9.5, so y^2 = 1e19. The iteration reaches L* only once its 1/L <= c/sqrt(y).
    const Enclosure y = sqrt(x0);
    return large_x_step_at(L, y, cM / sqrt(y), "L*", opt, sup_sources, {"y = 10^9.5 exactly, y^2 = 1e19"});
  }
  const Enclosure cL = cM * *Lvalue;
  if (!cL.certainly_le(root4))
    throw hypothesis_error("large-x step: y = (c L)^2 with L = " + std::to_string(*Lvalue) +
                           " violates y^2 <= 1e19; cap L at L*");
  return large_x_step_at(L, square(cL), Enclosure::ratio(1, *Lvalue), std::to_string(*Lvalue), opt, sup_sources,
                         {"y^2 <= 1e19: c L = " + cL.str(10) + " <= 10^4.75"});
}

StepResult large_x_step_at(const HypothesisLedger& L, const Enclosure& y, const Enclosure& tail_sup,
                           const std::string& label, const PipelineOptions& opt,
                           const std::vector<std::string>& sup_sources, std::vector<std::string> cond) {
  const Enclosure cM = L.value("model.M"), cpsi = L.value("model.psi");
  const Enclosure x0 = dec("1e19");
  const Enclosure lx = log(x0);
  require(!sqrt(x0).certainly_less(y), "large-x step: needs y^2 <= 1e19");
  // |M(u)|/u for u >= y: the model up to 1e16, tail_sup beyond.
  const Enclosure sup = max(cM / sqrt(y), tail_sup);
  const Enclosure Y = exp(Enclosure::integer(40));
  require(y.lo >= 300, "large-x step: Lambda/k bound needs y >= 300");
  require(y.hi <= Y.lo, "large-x step: needs y <= Y");
  L.require_range("model.psi", y.lo, Y.hi);
  L.require_range("faber_kadiri", Y.lo, kInfinity);

  // m1(x/y) with x/y >= 1e19/y: the model up to 1e16, the tail bound from A on.
  const LedgerEntry& tail = L.entry("m1.tail");
  const Enclosure A = pt(tail.range_lo);
  const Enclosure q = x0 / y;
  std::vector<std::string> m1_hyps = {"m1.tail"};
  Enclosure m1_arg = A;
  if (q.lo < A.lo) {
    L.require_range("model.m1", q.lo, tail.range_lo);
    m1_hyps.push_back("model.m1");
    m1_arg = q;
  }
  const Enclosure cm1 = max(L.value("model.m1"), tail.worst());

  // The window bound drops -12/(pi^2 sqrt Y) + 1.31 sqrt(Y)/x, negative for x >= 1e19.
  const Enclosure dropped = -(twelve_over_pi2() / sqrt(Y)) + L.value("mu2_window.sqrt") * sqrt(Y) / x0;
  require(dropped.hi < 0, "large-x step: -12/(pi^2 sqrt Y) + 1.31 sqrt(Y)/x is not negative at x = 1e19");
  cond.push_back("-12/(pi^2 sqrt Y) + 1.31 sqrt(Y)/1e19 = " + dropped.str(6) + " < 0 (Y < 0.92e19)");

  // (6/pi^2) log(7x/Y) / log x <= 6/pi^2 needs Y >= 7; the 7 comes from the
  // mu^2/n upper constant: exp(c pi^2 / 6) <= 7.
  const Enclosure seven = exp(L.value("mu2_over_n.upper") / six_over_pi2());
  require(seven.certainly_le(Enclosure::integer(7)), "large-x step: exp(1.166 pi^2/6) <= 7 fails");
  Enclosure far = six_over_pi2() * L.value("faber_kadiri");
  if (opt.far_psi_digits > 0) far = dec(round_up_significant(far.hi, opt.far_psi_digits));

  // Lambda/k: sum_{k<=y} Lambda(k)/k <= log y - 0.5 for y >= 300.
  const std::vector<std::string> lam_hyps = y.hi <= 1e10 ? std::vector<std::string>{"ramare.R.small"}
                                                         : std::vector<std::string>{"ramare.R.small", "ramare.R.large"};
  std::vector<std::string> sup_hyps = sup_sources;

  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  // Terms decrease in x: x = 1e19.
  const TermBound n_terms =
      TermList("large x, L = " + label)
          .add("root_models", (cpsi / sqrt(y) * sup + cm1 / sqrt(min(m1_arg, A))) / lx,
               with({"model.psi", "model.M"}, m1_hyps))
          .add("lambda_sum", sup * (log(y) - E(opt.lambda_over_k_offset)) / lx, with(lam_hyps, sup_hyps))
          .add("psi_far", far, {"faber_kadiri", "mu2_over_n.upper"})
          .add("psi_near",
               cpsi / lx * (twelve_over_pi2() / sqrt(y) + L.value("mu2_window.log") * log(Y / y) / sqrt(x0)),
               {"model.psi", "mu2_window.sqrt", "mu2_window.log"})
          .done();

  StepResult r;
  r.N = make_certificate("N for x >= 1e19, L = " + label, Quantity::N, x0.lo, kInfinity, {&n_terms}, L, cond);
  const TermBound gap = n_to_m_gap(L, x0.lo, sup, y, opt);
  r.M = make_certificate("M for x >= 1e19, L = " + label, Quantity::M, x0.lo, kInfinity, {&n_terms, &gap}, L, cond);
  return r;
}

bool LargeXResult::passed() const { return converged; }

LargeXResult large_x_iteration(const HypothesisLedger& L, const PipelineOptions& opt, int max_steps) {
  static const std::int64_t kN[] = {11086, 25372, 53324, 104069, 180799};
  static const std::int64_t kM[] = {11035, 25266, 53119, 103697, 180194};
  LargeXResult out;
  out.L_star = L_star(L);
  const LedgerEntry& cdm = L.entry("cdm");
  const std::int64_t L0 = Rational::parse(cdm.weaken == Weaken::down ? cdm.lo_text : cdm.hi_text).floor();
  // The first hypothesis |M(u)|/u <= 1/L0 for u >= y1 needs y1 inside the cdm range.
  const Enclosure y1 = square(L.value("model.M") * L0);
  L.require_range("cdm", y1.lo, kInfinity);

  std::optional<std::int64_t> cur = L0;
  std::vector<std::string> sources = {"cdm", "model.M"};
  for (int i = 0; i < max_steps; ++i) {
    StepResult s = large_x_step(L, cur, opt, sources);
    out.L_values.push_back(cur);
    out.y_values.push_back(cur ? square(L.value("model.M") * *cur) : sqrt(dec("1e19")));
    out.N_floors.push_back(reciprocal_floor(s.N.bound.hi));
    out.M_floors.push_back(reciprocal_floor(s.M.bound.hi));
    out.steps.push_back(std::move(s));
    if (!cur) {
      out.converged = true;
      break;
    }
    const std::int64_t next = out.M_floors.back();
    if (next <= *cur) break;  // no progress
    // For u in [1e16, 1e19] the next hypothesis rests on |M(u)|/u <= 1/R.
    if (next > opt.reciprocal) break;
    const Enclosure nx = Enclosure::integer(next);
    if (out.L_star.certainly_le(nx)) {
      cur.reset();
    } else if (nx.certainly_less(out.L_star)) {
      cur = next;
    } else {
      throw hypothesis_error("large-x iteration: cannot order L = " + std::to_string(next) + " against L*");
    }
    sources = {"model.M"};
  }
  for (std::size_t i = 0; i < out.steps.size() && i < 5; ++i) {
    const std::string label = out.L_values[i] ? std::to_string(*out.L_values[i]) : std::string("L*");
    out.reproductions.push_back(reproduce_reciprocal("L = " + label + " N", kN[i], out.steps[i].N.bound));
    out.reproductions.push_back(reproduce_reciprocal("L = " + label + " M", kM[i], out.steps[i].M.bound));
  }
  Reproduction ls;
  ls.label = "L* ~ 98483";
  ls.printed = "98483";
  ls.computed = out.L_star;
  ls.computed_text = out.L_star.str(10);
  ls.passed = matches_truncated(out.L_star, "98483");
  out.reproductions.push_back(ls);
  return out;
}

// ---------------------------------------------------------------- squarefree sums

Enclosure mu2_over_n_bound(const HypothesisLedger& L, const Enclosure& X) {
  require(X.lo >= 1, "mu2 over n bound needs X >= 1");
  const Enclosure seven = exp(L.value("mu2_over_n.upper") / six_over_pi2());
  require(seven.certainly_le(Enclosure::integer(7)), "mu2 over n bound: exp(c pi^2/6) <= 7 fails");
  return six_over_pi2() * log(7 * X);
}

Enclosure mu2_window_bound(const HypothesisLedger& L, const Enclosure& x, const Enclosure& y, const Enclosure& Y) {
  require(y.lo >= 1 && y.certainly_le(Y) && Y.certainly_le(x), "mu2 window bound needs x >= Y >= y >= 1");
  return six_over_pi2() * (2 / sqrt(y) - 2 / sqrt(Y)) + L.value("mu2_window.sqrt") * sqrt(Y) / x +
         L.value("mu2_window.log") * log(Y / y) / sqrt(x);
}

Enclosure mu2_sqrt_sum_bound(const Enclosure& x, const Enclosure& y, const PipelineOptions& opt) {
  require((x / y).lo >= 1e4, "mu2 sqrt-sum bound needs x/y >= 1e4");
  return twelve_over_pi2() / sqrt(y) + E(opt.mu2_sqrt_coefficient) * log(x / y) / sqrt(x);
}

Mu2Bounds mu2_sum_bounds(const HypothesisLedger& L, const Enclosure& x, const Enclosure& y, const Enclosure& Y,
                         const PipelineOptions& opt) {
  Mu2Bounds b;
  if (x.lo >= 1) b.over_n = mu2_over_n_bound(L, x);
  if (y.lo >= 1 && y.certainly_le(Y) && Y.certainly_le(x)) b.window = mu2_window_bound(L, x, y, Y);
  if ((x / y).lo >= 1e4) b.sqrt_sum = mu2_sqrt_sum_bound(x, y, opt);
  return b;
}

// ---------------------------------------------------------------- derived constants

std::vector<DerivedCheck> derived_constant_checks(const HypothesisLedger& L, const PipelineOptions& opt) {
  std::vector<DerivedCheck> out;
  auto add = [&](std::string name, std::string claim, const Enclosure& v, bool ok, bool derivable = true) {
    out.push_back({std::move(name), std::move(claim), v, ok, derivable});
  };
  const Enclosure cpsi = L.value("model.psi"), cM = L.value("model.M");
  const Enclosure gamma = constants().euler_gamma;

  // Envelope of sum Lambda(k)/sqrt(k) from the psi model by partial summation.
  // Exact: the ledger coefficient is a decimal literal.
  const Rational half = Rational::parse(L.entry("model.psi").hi_text) * Rational(1, 2);
  const Enclosure half_cpsi = E(half);
  add("envelope.log_coefficient", "c_psi/2 <= 0.47", half_cpsi, half <= Rational(47, 100));
  const bool used_ok = half <= opt.envelope_log_coefficient;
  add("envelope.log_coefficient_used", "c_psi/2 <= " + opt.envelope_log_coefficient.str() + " (Lambda-part bounds)",
      half_cpsi, used_ok, used_ok);
  // I = int_1^11 psi(t) t^{-3/2}/2 dt, psi constant between prime powers.
  ExactSum I;
  {
    const std::int64_t pp[] = {2, 3, 4, 5, 7, 8, 9, 11};
    const std::int64_t base[] = {2, 3, 2, 5, 7, 2, 3};
    Enclosure psi = Enclosure::integer(0);
    for (int i = 0; i < 7; ++i) {
      psi = psi + log(Enclosure::integer(base[i]));
      I.add(psi * (1 / sqrt(Enclosure::integer(pp[i])) - 1 / sqrt(Enclosure::integer(pp[i + 1]))));
    }
  }
  const Enclosure sqrt11 = sqrt(Enclosure::integer(11));
  const Enclosure up = cpsi - sqrt11 + I.value();
  add("envelope.upper_offset", "c_psi - sqrt(11) + int_1^11 psi(t) t^-3/2 / 2 <= -" + opt.envelope_offset.str(), up,
      up.certainly_le(-E(opt.envelope_offset)));
  const Enclosure low = -cpsi - sqrt11;
  add("envelope.lower_offset", "-c_psi - sqrt(11) >= -5.44", low, dec("-5.44").certainly_le(low));
  add("envelope.head_integral", "int_1^11 psi(t) t^-3/2 / 2 <= 1.18", I.value(), I.value().certainly_le(dec("1.18")));

  // sum_{k<=y} Lambda(k)/k <= log y - 0.5 for y >= 300.
  const Enclosure gap_needed = gamma - E(opt.lambda_over_k_offset);
  const Enclosure r_small = L.value("ramare.R.small") / sqrt(Enclosure::integer(300));
  const Enclosure r_large = L.value("ramare.R.large") / log(dec("1e10"));
  const Enclosure r = max(r_small, r_large);
  add("lambda_over_k.offset", "max(1.31/sqrt(300), 0.0067/log 1e10) <= gamma - 0.5", r, r.certainly_le(gap_needed));
  // sum_{k<=y} Lambda(k)/k <= log y for y >= 1: the remainder bound covers
  // y >= (1.31/gamma)^2, a direct scan the rest.
  const Enclosure y0 = square(L.value("ramare.R.small") / gamma);
  const ScanReport small = lambda_over_k_check(1, 10, Rational(0), opt.scan);
  add("lambda_over_k.plain", "sum Lambda(k)/k <= log y on [1, 10], remainder bound from y >= (1.31/gamma)^2", y0,
      small.passed() && y0.hi <= 10);

  // sum mu^2(n)/n <= (6/pi^2) log(7X)
  const Enclosure seven = exp(L.value("mu2_over_n.upper") / six_over_pi2());
  add("mu2_over_n.seven", "exp(1.166 pi^2 / 6) < 7", seven, seven.certainly_less(Enclosure::integer(7)));

  // (1/sqrt x) sum_{k<=x/y} mu^2(k)/sqrt(k) <= 12/(pi^2 sqrt y) + 0.17 log(x/y)/sqrt(x), x/y >= 1e4
  const Enclosure qs = L.value("Q.sharp"), qc = L.value("Q.crude");
  const Enclosure R = (qc - qs) / 2 * log(Enclosure::integer(1664));
  add("mu2_sqrt.remainder", "0.5 (0.5 - 0.1333) log 1664 <= 1.36", R, R.certainly_le(dec("1.36")));
  const Enclosure coef = qs / 2 + (qs + R - six_over_pi2()) / log(dec("1e4"));
  add("mu2_sqrt.coefficient", "0.1333/2 + (0.1333 + R - 6/pi^2)/log 1e4 <= " + opt.mu2_sqrt_coefficient.str(), coef,
      coef.certainly_le(E(opt.mu2_sqrt_coefficient)));

  // Gap constant 0.227: f(x) sqrt(x) log x = 0.571 alpha + log x/sqrt x + 5/sqrt x, decreasing, at 1.3e9.
  const Enclosure head_weight = weighted_sum(Kind::absM_log_weight, 33, opt.scan);
  add("gap.head_weight", "sum_{n<33} |M(n)| log(1 + 1/n) <= 5", head_weight,
      head_weight.certainly_le(Enclosure::integer(5)));
  const Enclosure x13 = dec("1.3e9");
  const Enclosure f13 = cM * alpha_constant() + log(x13) / sqrt(x13) + 5 / sqrt(x13);
  add("gap.constant", "0.571 alpha + log x/sqrt x + 5/sqrt x <= " + opt.gap_constant.str() + " at x = 1.3e9", f13,
      f13.certainly_le(E(opt.gap_constant)));
  const Enclosure T = model_threshold(L, opt.reciprocal);
  const Enclosure K = integral_head_constant(L, T);
  add("gap.head_constant", "5 + 2 c (sqrt(T) - sqrt(33)) <= 104586", K, K.certainly_le(Enclosure::integer(104586)));
  const Enclosure K_plain = 5 + 2 * cM * sqrt(T);
  add("gap.head_constant_plain", "5 + 2 c sqrt(T) <= 104586", K_plain,
      K_plain.certainly_le(Enclosure::integer(104586)), false);
  const Enclosure beta = beta_constant();
  add("beta.rounded", "beta <= " + opt.beta_rounded.str(), beta, beta.certainly_le(E(opt.beta_rounded)));
  const TermBound g = n_to_m_gap(L, 2e16, Enclosure::ratio(1, opt.reciprocal), T, opt);
  add("gap.at_2e16", "N to M gap at x >= 2e16 <= 1.33e-8", g.value, g.value.certainly_le(dec("1.33e-8")));
  return out;
}

// ---------------------------------------------------------------- assembly

bool ThresholdAssembly::passed() const {
  if (!first_range.passed() || !dyadic.passed() || !large_x.passed() || !cover_ok) return false;
  for (const DerivedCheck& d : derived)
    if (d.derivable && !d.passed) return false;
  return true;
}

ThresholdAssembly threshold_assembly(const HypothesisLedger& L, const PipelineOptions& opt) {
  ThresholdAssembly out;
  const Enclosure limit = Enclosure::ratio(1, opt.reciprocal);
  out.first_range = first_range_pipeline(L, opt);
  out.dyadic = dyadic_pipeline(L, opt, limit);
  out.large_x = large_x_iteration(L, opt);
  out.derived = derived_constant_checks(L, opt);
  out.T = model_threshold(L, opt.reciprocal);

  // [threshold, 1e16]: |M(x)|/x <= c/sqrt(x), decreasing: x = threshold.
  const double thr = static_cast<double>(opt.threshold);
  L.require_range("model.M", thr, 1e16);
  const TermBound root = TermList("root model")
                             .add("c_over_sqrt_x", L.value("model.M") / sqrt(Enclosure::integer(opt.threshold)),
                                  {"model.M"})
                             .done();
  out.root_extension = make_certificate("M on [threshold, 1e16]", Quantity::M, thr, 1e16, {&root}, L);

  out.certificates.push_back(out.root_extension);
  out.certificates.push_back(out.first_range.bounds.M);
  for (const StepResult& s : out.dyadic.steps) out.certificates.push_back(s.M);
  if (!out.large_x.steps.empty()) out.certificates.push_back(out.large_x.steps.back().M);
  std::sort(out.certificates.begin(), out.certificates.end(),
            [](const BoundCertificate& a, const BoundCertificate& b) { return a.x_lo < b.x_lo; });

  // Interval cover of [threshold, inf) with every bound <= 1/R.
  double covered = thr;
  out.cover_ok = true;
  for (const BoundCertificate& c : out.certificates) {
    if (c.x_lo > covered) {
      out.cover_ok = false;
      out.cover_message = "gap before " + c.name;
      break;
    }
    if (!c.bound.certainly_le(limit)) {
      out.cover_ok = false;
      out.cover_message = c.name + " exceeds 1/" + std::to_string(opt.reciprocal);
      break;
    }
    covered = std::max(covered, c.x_hi);
  }
  if (out.cover_ok && !std::isinf(covered)) {
    out.cover_ok = false;
    out.cover_message = "cover ends at " + decimal17(covered);
  }
  if (out.cover_ok) out.cover_message = "certificates cover [" + decimal17(thr) + ", inf)";

  std::int64_t worst = std::numeric_limits<std::int64_t>::max();
  for (const BoundCertificate& c : out.certificates) worst = std::min(worst, reciprocal_floor(c.bound.hi));
  out.reciprocal = worst;
  if (!out.large_x.steps.empty()) out.large_reciprocal = reciprocal_floor(out.large_x.steps.back().M.bound.hi);

  auto& rep = out.reproductions;
  Reproduction t;
  t.label = "T = (0.571 x 160383)^2 ~ 8.3867e9";
  t.printed = "8.3867e9";
  t.computed = out.T;
  t.computed_text = out.T.str(12);
  t.passed = matches_rounded(out.T, "8.3867e9");
  rep.push_back(t);
  Reproduction th;
  th.label = "T <= threshold 8.4e9";
  th.printed = "8.4e9";
  th.computed = out.T;
  th.computed_text = out.T.str(12);
  th.passed = out.T.certainly_le(Enclosure::integer(opt.threshold));
  rep.push_back(th);
  Reproduction c;
  c.label = "160383 = floor(1/6.235045e-6)";
  c.printed = "160383";
  c.computed = dec("6.235045e-6");
  const std::int64_t fl = reciprocal_floor(dec("6.235045e-6").hi);
  c.computed_text = std::to_string(fl);
  c.passed = fl == 160383 && out.reciprocal >= 160383;
  rep.push_back(c);
  Reproduction big;
  big.label = "x >= 1e19 constant";
  big.printed = "1/180194";
  big.computed = out.large_x.steps.empty() ? Enclosure() : out.large_x.steps.back().M.bound;
  big.computed_text = "1/" + std::to_string(out.large_reciprocal);
  big.passed = out.large_reciprocal == 180194;
  rep.push_back(big);
  return out;
}

Enclosure ramare_crossover(std::int64_t R) {
  // c u - d u^2 = 1/R with u = 1/log x; the small root, free of cancellation:
  // u = 2 (1/R) / (c + sqrt(c^2 - 4 d / R)).
  const Enclosure c = dec("0.130"), d = dec("0.118");
  const Enclosure inv = Enclosure::ratio(1, R);
  const Enclosure u = 2 * inv / (c + sqrt(square(c) - 4 * d * inv));
  return 1 / (u * log(Enclosure::integer(10)));
}

}  // namespace mertens
