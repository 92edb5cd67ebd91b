#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mertens/certify.hpp"
#include "mertens/checkpoint.hpp"
#include "mertens/error.hpp"

namespace mertens {

namespace {

constexpr const char* kStandardLedger = R"(# key              lo          hi          range_lo  range_hi  weaken  provenance
model.M            0.571       0.571       33        1e16      up      Hurst 2018, computation of M(n): |M(X)| <= c sqrt(X)
model.psi          0.94        0.94        11        1e19      up      Buthe 2018: |psi(X) - X| <= c sqrt(X)
model.m1           0.129       0.129       5e6       1e16      up      m1 conversion preprint 2020: |m1(X)| <= c / sqrt(X)
m1.tail            0.129       0.129       2.18e12   inf       up      m1 conversion preprint 2020, tail form: |m1(X)| <= c / sqrt(A), A = range_lo
cdm                4345        4345        2160535   inf       down    Cohen, Dress, El Marraki 2007: |M(x)| <= x / c
faber_kadiri       8.6386e-8   8.6386e-8   exp(40)   inf       up      Faber, Kadiri 2015 with 2018 corrigendum: |psi(X) - X| <= c X
Q.sharp            0.1333      0.1333      1664      inf       up      squarefree count: Q(x) <= (6/pi^2) x + c sqrt(x)
Q.crude            0.5         0.5         1         inf       up      squarefree count: Q(x) <= (6/pi^2) x + c sqrt(x)
ramare.R.small     1.31        1.31        1         1e10      up      Ramare 2013: |sum_{k<=y} Lambda(k)/k - log y + gamma| <= c / sqrt(y)
ramare.R.large     0.0067      0.0067      1e10      inf       up      Ramare 2013 with corrigendum: |sum_{k<=y} Lambda(k)/k - log y + gamma| <= c / log y
mu2_over_n.upper   1.166       1.166       1         inf       up      Ramare 2016: sum_{n<=X} mu^2(n)/n - (6/pi^2) log X <= c
mu2_over_n.lower   0.578       0.578       1         inf       down    Ramare 2016: sum_{n<=X} mu^2(n)/n - (6/pi^2) log X >= c
mu2_window.sqrt    1.31        1.31        1         inf       up      Ramare 2013, squarefree window with f = sqrt: coefficient of sqrt(Y)
mu2_window.log     0.35        0.35        1         inf       up      Ramare 2013, squarefree window with f = sqrt: coefficient of sqrt(x) log(Y/y)
)";

double parse_range(const std::string& t) {
  if (t == "inf") return kInfinity;
  if (t.rfind("exp(", 0) == 0 && t.back() == ')') {
    Enclosure e = exp(Enclosure::decimal(t.substr(4, t.size() - 5)));
    return e.lo;  // a range start rounded down only widens the claim checked against it
  }
  return Enclosure::decimal(t).lo;
}

std::string range_text(double v) {
  if (std::isinf(v)) return "inf";
  return decimal17(v);
}

}  // namespace

Enclosure LedgerEntry::lo() const { return Enclosure::decimal(lo_text); }
Enclosure LedgerEntry::hi() const { return Enclosure::decimal(hi_text); }
Enclosure LedgerEntry::worst() const { return weaken == Weaken::up ? hi() : lo(); }

HypothesisLedger HypothesisLedger::standard() { return parse(kStandardLedger); }

HypothesisLedger HypothesisLedger::parse(std::string_view text) {
  HypothesisLedger L;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    LedgerEntry e;
    std::string rlo, rhi, weaken;
    if (!(ls >> e.key)) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("ledger line " + std::to_string(lineno) + ": " + why);
    };
    if (!(ls >> e.lo_text >> e.hi_text >> rlo >> rhi >> weaken)) fail("expected 7 fields");
    std::getline(ls >> std::ws, e.provenance);
    if (e.provenance.empty()) fail("missing provenance for " + e.key);
    try {
      if (e.hi().certainly_less(e.lo())) fail("lo > hi for " + e.key);
      e.range_lo = parse_range(rlo);
      e.range_hi = parse_range(rhi);
      e.range_lo_text = rlo;
      e.range_hi_text = rhi;
    } catch (const std::invalid_argument& ex) {
      fail(ex.what());
    }
    if (!(e.range_lo <= e.range_hi)) fail("empty range for " + e.key);
    if (weaken == "up")
      e.weaken = Weaken::up;
    else if (weaken == "down")
      e.weaken = Weaken::down;
    else
      fail("weaken must be up or down");
    if (L.has(e.key)) fail("duplicate key " + e.key);
    L.entries_.push_back(std::move(e));
  }
  return L;
}

HypothesisLedger HypothesisLedger::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read ledger " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string HypothesisLedger::serialize() const {
  std::string out;
  for (const LedgerEntry& e : entries_) {
    out += e.key + ' ' + e.lo_text + ' ' + e.hi_text + ' ' + e.range_lo_text + ' ' + e.range_hi_text +
           ' ' + (e.weaken == Weaken::up ? "up" : "down") + ' ' + e.provenance + '\n';
  }
  return out;
}

std::uint64_t HypothesisLedger::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HypothesisLedger::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

bool HypothesisLedger::has(std::string_view key) const {
  for (const LedgerEntry& e : entries_)
    if (e.key == key) return true;
  return false;
}

const LedgerEntry& HypothesisLedger::entry(std::string_view key) const {
  for (const LedgerEntry& e : entries_)
    if (e.key == key) return e;
  throw hypothesis_error("ledger has no entry " + std::string(key));
}

void HypothesisLedger::require_range(std::string_view key, double lo, double hi) const {
  const LedgerEntry& e = entry(key);
  if (!(e.range_lo <= lo && hi <= e.range_hi))
    throw hypothesis_error("hypothesis " + e.key + " used on [" + range_text(lo) + ", " + range_text(hi) +
                           "] outside its range [" + range_text(e.range_lo) + ", " + range_text(e.range_hi) + "]");
}

HypothesisLedger HypothesisLedger::scaled(std::string_view key, const Rational& factor) const {
  HypothesisLedger out = *this;
  for (LedgerEntry& e : out.entries_) {
    if (e.key != key) continue;
    const Rational lo = Rational::parse(e.lo_text) * factor;
    const Rational hi = Rational::parse(e.hi_text) * factor;
    e.lo_text = lo.str();
    e.hi_text = hi.str();
    return out;
  }
  throw hypothesis_error("ledger has no entry " + std::string(key));
}

RootModel HypothesisLedger::root_model(ModelTarget target) const {
  RootModel base = target == ModelTarget::M ? RootModel::mertens()
                   : target == ModelTarget::psi_minus_x ? RootModel::psi()
                                                        : RootModel::m1();
  const char* key = target == ModelTarget::M ? "model.M" : target == ModelTarget::psi_minus_x ? "model.psi" : "model.m1";
  const LedgerEntry& e = entry(key);
  RootModel m = base.with_coefficient(Rational::parse(e.hi_text)).with_range(e.range_lo, e.range_hi);
  m.provenance = "ledger " + e.key + ": " + e.provenance;
  return m;
}

}  // namespace mertens
