#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "mertens/certify.hpp"
#include "mertens/checkpoint.hpp"

namespace mertens {

using nlohmann::json;

std::string_view quantity_name(Quantity q) { return q == Quantity::N ? "N/(x log x)" : "M/x"; }

std::vector<std::string> BoundCertificate::hypotheses() const {
  std::vector<std::string> out;
  for (const TraceTerm& t : trace) out.insert(out.end(), t.hypotheses.begin(), t.hypotheses.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Enclosure replay_trace(const std::vector<TraceTerm>& trace) {
  double lo = 0.0;
  double hi = 0.0;
  for (const TraceTerm& t : trace) {
    lo = rounding::add_down(lo, t.value.lo);
    hi = rounding::add_up(hi, t.value.hi);
  }
  return Enclosure(lo, hi);
}

bool replay_matches(const BoundCertificate& cert) {
  const Enclosure r = replay_trace(cert.trace);
  return std::bit_cast<std::uint64_t>(r.lo) == std::bit_cast<std::uint64_t>(cert.bound.lo) &&
         std::bit_cast<std::uint64_t>(r.hi) == std::bit_cast<std::uint64_t>(cert.bound.hi);
}

namespace {

json range_json(double v) { return std::isinf(v) ? json("inf") : json(hexfloat(v)); }
double range_from(const json& j) {
  const std::string s = j.get<std::string>();
  return s == "inf" ? kInfinity : parse_hexfloat(s);
}

json enclosure_json(const Enclosure& e) {
  return {{"lo", hexfloat(e.lo)}, {"hi", hexfloat(e.hi)}, {"decimal", e.str(10)}};
}
Enclosure enclosure_from(const json& j) {
  return Enclosure(parse_hexfloat(j.at("lo").get<std::string>()), parse_hexfloat(j.at("hi").get<std::string>()));
}

}  // namespace

std::string certificate_json(const BoundCertificate& cert, int indent) {
  json trace = json::array();
  for (const TraceTerm& t : cert.trace)
    trace.push_back({{"lemma", t.lemma}, {"term", t.term}, {"value", enclosure_json(t.value)}, {"hypotheses", t.hypotheses}});
  json doc = {
      {"format", "mertens-certificate"},
      {"version", 1},
      {"name", cert.name},
      {"quantity", cert.quantity == Quantity::N ? "N" : "M"},
      {"x_lo", range_json(cert.x_lo)},
      {"x_hi", range_json(cert.x_hi)},
      {"x_range_decimal", (std::isinf(cert.x_lo) ? std::string("inf") : decimal17(cert.x_lo)) + " .. " +
                              (std::isinf(cert.x_hi) ? std::string("inf") : decimal17(cert.x_hi))},
      {"bound", enclosure_json(cert.bound)},
      {"ledger_hash", cert.ledger_hash},
      {"hypotheses", cert.hypotheses()},
      {"conditions", cert.conditions},
      {"trace", trace},
  };
  return doc.dump(indent);
}

BoundCertificate certificate_from_json(std::string_view text) {
  const json doc = json::parse(text);
  if (doc.at("format") != "mertens-certificate") throw std::invalid_argument("not a mertens certificate");
  if (doc.at("version") != 1) throw std::invalid_argument("unsupported certificate version");
  BoundCertificate c;
  c.name = doc.at("name").get<std::string>();
  c.quantity = doc.at("quantity") == "N" ? Quantity::N : Quantity::M;
  c.x_lo = range_from(doc.at("x_lo"));
  c.x_hi = range_from(doc.at("x_hi"));
  c.bound = enclosure_from(doc.at("bound"));
  c.ledger_hash = doc.at("ledger_hash").get<std::string>();
  c.conditions = doc.value("conditions", std::vector<std::string>{});
  for (const json& t : doc.at("trace")) {
    c.trace.push_back({t.at("lemma").get<std::string>(), t.at("term").get<std::string>(), enclosure_from(t.at("value")),
                       t.at("hypotheses").get<std::vector<std::string>>()});
  }
  return c;
}

Reproduction reproduce_upper(std::string label, std::string_view printed, const Enclosure& computed) {
  const DecimalLiteral d = parse_decimal_literal(printed);
  const Enclosure limit = Enclosure::decimal(int128_to_string(d.mantissa + 1) + "e" + std::to_string(d.exponent));
  Reproduction r;
  r.label = std::move(label);
  r.printed = std::string(printed);
  r.computed = computed;
  r.computed_text = computed.str(8);
  r.passed = computed.hi <= limit.lo;
  return r;
}

Reproduction reproduce_reciprocal(std::string label, std::int64_t L, const Enclosure& computed) {
  Reproduction r;
  r.label = std::move(label);
  r.printed = "1/" + std::to_string(L);
  r.computed = computed;
  const std::int64_t got = reciprocal_floor(computed.hi);
  r.computed_text = "1/" + std::to_string(got);
  r.passed = got == L;
  return r;
}

}  // namespace mertens
