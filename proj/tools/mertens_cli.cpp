#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mertens/certify.hpp"
#include "mertens/checkpoint.hpp"
#include "mertens/error.hpp"
#include "mertens/identity.hpp"
#include "mertens/summatory.hpp"

using namespace mertens;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

enum class Format { table, json, csv };

// One line of output. `pass` is empty for plain values.
struct Row {
  std::string label;
  std::string x;
  Enclosure value;
  std::optional<bool> pass;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<Row> rows;
  std::vector<std::string> notes;  // table output only
  json extra = json::object();     // json output only
  bool passed() const {
    for (const Row& r : rows)
      if (r.pass && !*r.pass) return false;
    return true;
  }
};

struct Globals {
  Format format = Format::table;
  std::string ledger_path;
  int workers = 1;
  std::string mode = "rigorous";
  std::int64_t segment_width = kDefaultSegmentWidth;
};

// Scientific notation accepted; the value must be an exact integer.
std::int64_t parse_integer(const std::string& text, const std::string& what) {
  try {
    return mertens::parse_integer(text);
  } catch (const std::exception& e) {
    throw CLI::ValidationError(what, e.what());
  }
}

Rational parse_rational(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "not a rational number: " + text);
  }
}

std::string pass_text(const std::optional<bool>& p) { return p ? (*p ? "1" : "0") : "-"; }

void emit(const Report& rep, const Globals& g, const HypothesisLedger& L) {
  const std::string hash = L.hash_hex();
  if (g.format == Format::json) {
    json rows = json::array();
    for (const Row& r : rep.rows) {
      json j = {{"label", r.label}, {"x", r.x}, {"lo", decimal17(r.value.lo)}, {"hi", decimal17(r.value.hi)},
                {"lo_hex", hexfloat(r.value.lo)}, {"hi_hex", hexfloat(r.value.hi)}};
      if (r.pass) j["pass"] = *r.pass;
      if (!r.detail.empty()) j["detail"] = r.detail;
      rows.push_back(std::move(j));
    }
    json doc = {{"format", "mertens-cli"}, {"version", kFormatVersion}, {"ledger_hash", hash},
                {"command", rep.command},   {"passed", rep.passed()},      {"rows", rows}};
    for (auto it = rep.extra.begin(); it != rep.extra.end(); ++it) doc[it.key()] = it.value();
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::cout << "# mertens-cli v" << kFormatVersion << " ledger " << hash << " command " << rep.command << '\n';
  if (g.format == Format::csv) {
    std::cout << "x,lo,hi,pass\n";
    for (const Row& r : rep.rows)
      std::cout << r.x << ',' << decimal17(r.value.lo) << ',' << decimal17(r.value.hi) << ',' << pass_text(r.pass)
                << '\n';
    return;
  }
  std::size_t wl = 5, wx = 1;
  for (const Row& r : rep.rows) {
    wl = std::max(wl, r.label.size());
    wx = std::max(wx, r.x.size());
  }
  for (const Row& r : rep.rows) {
    std::string status = r.pass ? (*r.pass ? "pass" : "FAIL") : "";
    std::printf("%-*s  %*s  %-44s %-4s %s\n", static_cast<int>(wl), r.label.c_str(), static_cast<int>(wx),
                r.x.c_str(), r.value.str(12).c_str(), status.c_str(), r.detail.c_str());
  }
  for (const std::string& n : rep.notes) std::cout << n << '\n';
  std::cout << (rep.passed() ? "result: pass" : "result: FAIL") << '\n';
}

ScanConfig scan_config(const Globals& g, bool force_rigorous = false) {
  ScanConfig c;
  c.workers = g.workers;
  c.segment_width = g.segment_width;
  c.mode = force_rigorous ? Mode::rigorous : parse_mode(g.mode);
  return c;
}

std::string first_few(const std::vector<std::int64_t>& xs) {
  std::string s;
  for (std::int64_t x : xs) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

Row scan_row(const std::string& label, const ScanReport& r) {
  std::string d = "limit " + r.limit.str(8) + ", checked " + std::to_string(r.checked);
  if (r.violation_count) d += ", violations " + std::to_string(r.violation_count) + " first at " + first_few(r.violations);
  if (r.inconclusive_count)
    d += ", inconclusive " + std::to_string(r.inconclusive_count) + " first at " + first_few(r.inconclusive);
  return {label, std::to_string(r.argmax_x), r.max_statistic, r.passed(), d};
}

json scan_json(const ScanReport& r) {
  return {{"claim", r.claim},
          {"X_lo", r.X_lo},
          {"X_hi", r.X_hi},
          {"argmax_x", r.argmax_x},
          {"checked", r.checked},
          {"violation_count", r.violation_count},
          {"violations", r.violations},
          {"inconclusive_count", r.inconclusive_count},
          {"inconclusive", r.inconclusive}};
}

void add_reproductions(Report& rep, const std::vector<Reproduction>& rs) {
  json arr = rep.extra.value("reproductions", json::array());
  for (const Reproduction& r : rs) {
    rep.rows.push_back({r.label, "", r.computed, r.passed, "printed " + r.printed + ", computed " + r.computed_text});
    arr.push_back({{"label", r.label}, {"printed", r.printed}, {"computed", r.computed_text}, {"passed", r.passed}});
  }
  rep.extra["reproductions"] = arr;
}

void add_certificates(Report& rep, const std::vector<const BoundCertificate*>& certs, const std::string& out_path) {
  json arr = json::array();
  for (const BoundCertificate* c : certs) arr.push_back(json::parse(certificate_json(*c)));
  rep.extra["certificates"] = arr;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << arr.dump(2) << '\n';
  }
}

std::string range_text(double v) { return std::isinf(v) ? "inf" : decimal17(v); }

Row cert_row(const BoundCertificate& c, std::optional<bool> pass = std::nullopt, std::string detail = "") {
  return {c.name, range_text(c.x_lo), c.bound, pass, std::move(detail)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mertens function: summatory scans, identity checks and bound certificates"};
  app.fallthrough();  // global options may follow the subcommand
  app.require_subcommand(1);
  Globals g;
  std::string format = "table";
  app.add_option("--format", format, "table, json or csv (csv columns: x,lo,hi,pass)")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--ledger", g.ledger_path, "hypothesis ledger file (default: built-in)");
  app.add_option("--workers", g.workers, "scan worker threads")->check(CLI::PositiveNumber);
  app.add_option("--mode", g.mode, "fast or rigorous (certify always runs rigorous)")
      ->check(CLI::IsMember({"fast", "rigorous"}));
  app.add_option("--segment-width", g.segment_width, "sieve segment width")->check(CLI::PositiveNumber);

  // compute
  auto* compute = app.add_subcommand("compute", "running values of a summatory function");
  std::string c_kind, c_X, c_stride, c_checkpoint;
  compute->add_option("function", c_kind, "M psi N m m1 Q lambda_over_k lambda_over_sqrt_k mu2_over_sqrt mu2_over_n")
      ->required();
  compute->add_option("X", c_X, "upper end")->required();
  compute->add_option("--stride", c_stride, "checkpoint spacing (default: X)");
  compute->add_option("--checkpoint", c_checkpoint, "checkpoint log; resumed when compatible");

  // verify
  auto* verify = app.add_subcommand("verify", "exact identities and exhaustive model checks");
  verify->require_subcommand(1);
  auto* v_identity = verify->add_subcommand("identity", "hyperbola and Schoenfeld identities at one (x, y)");
  std::string vi_x, vi_y;
  v_identity->add_option("--x", vi_x)->required();
  v_identity->add_option("--y", vi_y, "rational, 1 <= y <= x")->required();

  auto* v_model = verify->add_subcommand("model", "square-root model at every x of a range");
  std::string vm_target, vm_from, vm_to;
  v_model->add_option("target", vm_target, "M, psi or m1")->required()->check(CLI::IsMember({"M", "psi", "m1"}));
  v_model->add_option("--from", vm_from, "default: start of the model range");
  v_model->add_option("--to", vm_to)->required();

  auto* v_env = verify->add_subcommand("envelope", "sum Lambda(k)/sqrt(k) - 2 sqrt(X) envelope at every X");
  std::string ve_from = "11", ve_to, ve_coef = "0.47";
  v_env->add_option("--from", ve_from);
  v_env->add_option("--to", ve_to)->required();
  v_env->add_option("--log-coefficient", ve_coef);

  auto* v_lk = verify->add_subcommand("lambda-over-k", "sum Lambda(k)/k <= log y - offset at every y");
  std::string vl_from = "300", vl_to, vl_offset = "1/2";
  v_lk->add_option("--from", vl_from);
  v_lk->add_option("--to", vl_to)->required();
  v_lk->add_option("--offset", vl_offset);

  auto* v_gap = verify->add_subcommand("gap", "|N/(x log x) - M/x| against its bound at sampled x");
  std::string vg_from, vg_to, vg_stride = "1e4", vg_form = "constant";
  bool vg_abel = false;
  v_gap->add_option("--from", vg_from)->required();
  v_gap->add_option("--to", vg_to)->required();
  v_gap->add_option("--stride", vg_stride);
  v_gap->add_option("--form", vg_form, "constant: 0.227/(sqrt x log x); derived: the explicit f(x)")
      ->check(CLI::IsMember({"constant", "derived"}));
  v_gap->add_flag("--abel", vg_abel, "cross-check N against its Abel summation form");

  auto* v_floor = verify->add_subcommand("floor-identity", "sum_{n<=u} mu(n) floor(u/(kn)) = [u >= k]");
  std::string vf_u, vf_k;
  v_floor->add_option("--u", vf_u)->required();
  v_floor->add_option("--k", vf_k)->required();

  auto* v_mellin = verify->add_subcommand("mellin", "Mellin transform of |1 - A(t)| against its closed form");
  std::string vme_s = "2", vme_T = "3000";
  v_mellin->add_option("--s", vme_s, "rational, s >= 1.05");
  v_mellin->add_option("--T", vme_T, "quadrature cutoff");

  // certify
  auto* certify = app.add_subcommand("certify", "bound certificates with published-value comparisons");
  std::string cf_pipeline, cf_out;
  bool cf_conservative = false;
  certify->add_option("pipeline", cf_pipeline, "first-range, dyadic, large-x or threshold")
      ->required()
      ->check(CLI::IsMember({"first-range", "dyadic", "large-x", "threshold"}));
  certify->add_option("--out", cf_out, "write the certificate documents here");
  certify->add_flag("--conservative", cf_conservative, "envelope log coefficient 0.47 instead of 0.14");

  // scan-threshold
  auto* threshold = app.add_subcommand("scan-threshold", "largest x <= X_hi with |M(x)| > x / reciprocal");
  std::string st_rec, st_X, st_stride = "1e6", st_checkpoint;
  threshold->add_option("reciprocal", st_rec, "R in the claim |M(x)| <= x / R")->required();
  threshold->add_option("X_hi", st_X, "upper end of the scan")->required();
  threshold->add_option("--stride", st_stride, "checkpoint spacing");
  threshold->add_option("--checkpoint", st_checkpoint, "checkpoint log; resumed when compatible");

  auto* consts = app.add_subcommand("constants", "alpha, beta, zeta(1/2), gamma and L* enclosures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  g.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::table;

  try {
    const HypothesisLedger L = g.ledger_path.empty() ? HypothesisLedger::standard() : HypothesisLedger::load(g.ledger_path);
    Report rep;

    if (*compute) {
      const Kind kind = parse_kind(c_kind);
      const std::int64_t X = parse_integer(c_X, "X");
      const std::int64_t stride = c_stride.empty() ? X : parse_integer(c_stride, "--stride");
      const ScanConfig cfg = scan_config(g);
      rep.command = "compute " + std::string(kind_name(kind));
      const SummatorySeries s = scan(kind, X, stride, cfg, c_checkpoint);
      for (const Checkpoint& cp : s.checkpoints)
        rep.rows.push_back({std::string(kind_name(kind)), std::to_string(cp.x), cp.value, std::nullopt,
                            kind_is_integer(kind) ? std::to_string(cp.exact) : ""});
      rep.extra["mode"] = std::string(mode_name(s.mode));
      rep.extra["stride"] = s.stride;
    } else if (*v_identity) {
      const std::int64_t x = parse_integer(vi_x, "--x");
      const Rational y = parse_rational(vi_y, "--y");
      const ScanConfig cfg = scan_config(g, true);
      rep.command = "verify identity";
      const std::pair<const char*, IdentityResidual> checks[] = {
          {"hyperbola residual", hyperbola_residual(x, y, cfg)}, {"schoenfeld residual", schoenfeld_residual(x, y, cfg)}};
      for (const auto& [label, r] : checks) {
        std::string d = "y = " + y.str() + ", lhs " + r.lhs.str(12);
        rep.rows.push_back({label, std::to_string(x), r.residual, r.passed(), d});
      }
    } else if (*v_model) {
      const ModelTarget t = vm_target == "M" ? ModelTarget::M : vm_target == "psi" ? ModelTarget::psi_minus_x : ModelTarget::m1;
      RootModel m = L.root_model(t);
      const std::int64_t from = vm_from.empty() ? static_cast<std::int64_t>(std::ceil(m.range_lo)) : parse_integer(vm_from, "--from");
      const std::int64_t to = parse_integer(vm_to, "--to");
      // The claim is tested as stated on the requested range, even outside
      // the range where the ledger asserts it.
      std::string note;
      if (from < m.range_lo || to > m.range_hi) {
        note = "range extends beyond the ledger range [" + range_text(m.range_lo) + ", " + range_text(m.range_hi) + "]";
        m = m.with_range(std::min<double>(from, m.range_lo), std::max<double>(to, m.range_hi));
      }
      const ScanReport r = verify_root_model(m, from, to, scan_config(g, true));
      rep.command = "verify model " + vm_target;
      rep.rows.push_back(scan_row(r.claim, r));
      rep.extra["scan"] = scan_json(r);
      if (!note.empty()) rep.notes.push_back("note: " + note);
    } else if (*v_env) {
      EnvelopeConstants c;
      c.log_coefficient = parse_rational(ve_coef, "--log-coefficient");
      const ScanReport r = lambda_sqrt_envelope_check(parse_integer(ve_from, "--from"), parse_integer(ve_to, "--to"),
                                                      scan_config(g, true), c);
      rep.command = "verify envelope";
      rep.rows.push_back(scan_row(r.claim, r));
      rep.extra["scan"] = scan_json(r);
    } else if (*v_lk) {
      const ScanReport r = lambda_over_k_check(parse_integer(vl_from, "--from"), parse_integer(vl_to, "--to"),
                                               parse_rational(vl_offset, "--offset"), scan_config(g, true));
      rep.command = "verify lambda-over-k";
      rep.rows.push_back(scan_row(r.claim, r));
      rep.extra["scan"] = scan_json(r);
    } else if (*v_gap) {
      GapBound b;
      b.form = vg_form == "derived" ? GapBound::Form::derived : GapBound::Form::constant;
      const GapReport r = mn_gap_scan(parse_integer(vg_from, "--from"), parse_integer(vg_to, "--to"),
                                      parse_integer(vg_stride, "--stride"), b, vg_abel, scan_config(g, true));
      rep.command = "verify gap";
      rep.rows.push_back(scan_row(r.report.claim, r.report));
      if (vg_abel)
        rep.rows.push_back({"Abel summation agrees with the direct sum", std::to_string(r.abel_checked),
                            Enclosure::integer(r.abel_disagreements), r.abel_disagreements == 0,
                            std::to_string(r.abel_disagreements) + " disagreements"});
      rep.extra["scan"] = scan_json(r.report);
    } else if (*v_floor) {
      const Rational u = parse_rational(vf_u, "--u");
      const std::int64_t k = parse_integer(vf_k, "--k");
      const std::int64_t s = mobius_floor_sum(u, k, scan_config(g, true));
      rep.command = "verify floor-identity";
      rep.rows.push_back({"sum mu(n) floor(u/(kn))", u.str(), Enclosure::integer(s),
                          mobius_floor_identity_check(u, k, scan_config(g, true)),
                          "k = " + std::to_string(k) + ", expected " + (u >= Rational(k) ? "1" : "0")});
    } else if (*v_mellin) {
      const Rational s = parse_rational(vme_s, "--s");
      const std::int64_t T = parse_integer(vme_T, "--T");
      const Enclosure r = mellin_identity_check(s, T);
      rep.command = "verify mellin";
      rep.rows.push_back({"quadrature minus closed form", s.str(), r, r.contains_zero(), "T = " + std::to_string(T)});
    } else if (*certify) {
      PipelineOptions opt = cf_conservative ? conservative_options() : PipelineOptions{};
      opt.scan = scan_config(g, true);
      rep.command = "certify " + cf_pipeline;
      rep.extra["ledger"] = L.serialize();
      if (cf_pipeline == "first-range") {
        const FirstRangeResult r = first_range_pipeline(L, opt);
        rep.rows.push_back(cert_row(r.bounds.N));
        rep.rows.push_back(cert_row(r.bounds.M));
        add_reproductions(rep, r.reproductions);
        add_certificates(rep, {&r.bounds.N, &r.bounds.M}, cf_out);
      } else if (cf_pipeline == "dyadic") {
        const DyadicResult r = dyadic_pipeline(L, opt, Enclosure::ratio(1, opt.reciprocal));
        std::vector<const BoundCertificate*> certs;
        rep.notes.push_back("     a      N bound      M bound   M <= 1/" + std::to_string(opt.reciprocal));
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
          char line[128];
          std::snprintf(line, sizeof line, "%6s  %.4e  %.4e   %s", r.a_values[i].str().c_str(), r.steps[i].N.bound.hi,
                        r.steps[i].M.bound.hi, r.within_reciprocal[i] ? "oui" : "non");
          rep.notes.push_back(line);
          rep.rows.push_back(cert_row(r.steps[i].M, r.within_reciprocal[i], "a = " + r.a_values[i].str()));
          certs.push_back(&r.steps[i].N);
          certs.push_back(&r.steps[i].M);
        }
        rep.rows.push_back({"dyadic chain", "", Enclosure(), r.chain_ok, r.chain_message});
        add_reproductions(rep, r.reproductions);
        add_certificates(rep, certs, cf_out);
      } else if (cf_pipeline == "large-x") {
        const LargeXResult r = large_x_iteration(L, opt);
        std::vector<const BoundCertificate*> certs;
        rep.notes.push_back("        L    N: 1/floor   M: 1/floor");
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
          const std::string label = r.L_values[i] ? std::to_string(*r.L_values[i]) : "L*";
          char line[128];
          std::snprintf(line, sizeof line, "%9s  %11lld  %11lld", label.c_str(), static_cast<long long>(r.N_floors[i]),
                        static_cast<long long>(r.M_floors[i]));
          rep.notes.push_back(line);
          certs.push_back(&r.steps[i].N);
          certs.push_back(&r.steps[i].M);
        }
        rep.rows.push_back({"L*", "", r.L_star, std::nullopt, "10^4.75 / c"});
        rep.rows.push_back({"iteration reaches L*", "", Enclosure(), r.converged, ""});
        add_reproductions(rep, r.reproductions);
        add_certificates(rep, certs, cf_out);
        rep.extra["N_floors"] = r.N_floors;
        rep.extra["M_floors"] = r.M_floors;
      } else {
        const ThresholdAssembly r = threshold_assembly(L, opt);
        std::vector<const BoundCertificate*> certs;
        for (const BoundCertificate& c : r.certificates) {
          rep.rows.push_back(cert_row(c, c.bound.certainly_le(Enclosure::ratio(1, opt.reciprocal))));
          certs.push_back(&c);
        }
        for (const DerivedCheck& d : r.derived) {
          // Constants the ledger cannot produce are reported, not gated.
          rep.rows.push_back({d.name, "", d.computed, d.derivable ? std::optional<bool>(d.passed) : std::nullopt,
                              d.claim + (d.derivable ? "" : (d.passed ? " [holds]" : " [does not follow from the ledger]"))});
        }
        rep.rows.push_back({"cover", "", Enclosure(), r.cover_ok, r.cover_message});
        add_reproductions(rep, r.first_range.reproductions);
        add_reproductions(rep, r.dyadic.reproductions);
        add_reproductions(rep, r.large_x.reproductions);
        add_reproductions(rep, r.reproductions);
        add_certificates(rep, certs, cf_out);
        rep.extra["threshold"] = opt.threshold;
        rep.extra["T"] = {{"lo", decimal17(r.T.lo)}, {"hi", decimal17(r.T.hi)}};
        rep.extra["reciprocal"] = r.reciprocal;
        rep.extra["large_reciprocal"] = r.large_reciprocal;
        const bool ok = rep.passed() && r.passed();
        rep.notes.push_back("T = " + r.T.str(10) + " <= 8.4e9; |M(x)| <= x/" + std::to_string(opt.reciprocal) +
                            " for x >= 8.4e9" + (ok ? "" : " NOT certified") + "; |M(x)| <= x/" +
                            std::to_string(r.large_reciprocal) + " for x >= 1e19");
        if (!r.passed()) rep.rows.push_back({"assembly", "", Enclosure(), false, "see failing rows"});
      }
    } else if (*threshold) {
      const std::int64_t R = parse_integer(st_rec, "reciprocal");
      const std::int64_t X = parse_integer(st_X, "X_hi");
      const ThresholdResult r = threshold_scan(R, X, std::min(X, parse_integer(st_stride, "--stride")),
                                               scan_config(g), st_checkpoint);
      rep.command = "scan-threshold";
      const std::string last = r.last_crossing ? std::to_string(*r.last_crossing) : "none";
      rep.rows.push_back({"last x with |M(x)| > x/" + std::to_string(R), last,
                          Enclosure::integer(r.last_crossing.value_or(0)), std::nullopt,
                          r.last_crossing ? std::to_string(r.crossings) + " crossings up to " + std::to_string(r.scanned_to)
                                          : "none in range"});
      rep.extra["last_crossing"] = r.last_crossing ? json(*r.last_crossing) : json(nullptr);
      rep.extra["crossings"] = r.crossings;
      rep.extra["scanned_to"] = r.scanned_to;
    } else if (*consts) {
      rep.command = "constants";
      rep.rows.push_back({"alpha", "", alpha_constant(), std::nullopt, "2 - 2 (1 - 2^-1/2 - 3^-1/2 - 5^-1/2 + 30^-1/2) zeta(1/2)"});
      rep.rows.push_back({"beta", "", beta_constant(), std::nullopt, "int_1^inf |1 - A(t)| t^-2 dt"});
      rep.rows.push_back({"zeta(1/2)", "", constants().zeta_half, std::nullopt, ""});
      rep.rows.push_back({"gamma", "", constants().euler_gamma, std::nullopt, ""});
      rep.rows.push_back({"L*", "", L_star(L), std::nullopt, "10^4.75 / c"});
      rep.rows.push_back({"log10 crossover", "", ramare_crossover(), std::nullopt, "1/160383 = 0.130/log x - 0.118/log^2 x"});
    }
    emit(rep, g, L);
    return rep.passed() ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hypothesis_error& e) {
    std::cerr << "hypothesis error: " << e.what() << '\n';
    return 3;
  } catch (const resource_error& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 4;
  } catch (const checkpoint_error& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
