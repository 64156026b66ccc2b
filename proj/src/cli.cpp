#include "artin/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "artin/constants.hpp"
#include "artin/empirics.hpp"
#include "artin/errors.hpp"
#include "artin/exactdensity.hpp"
#include "artin/multstruct.hpp"
#include "artin/oracle.hpp"
#include "artin/recurrences.hpp"

namespace artin::cli {

namespace {

using json = nlohmann::ordered_json;

struct Envelope {
  std::string command;
  json inputs = json::object();
  json result = json::object();
  std::vector<std::string> warnings;
};

// Shortest round-trip representation; independent of the C locale.
std::string double_str(double d) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::string fraction(const mpq_class& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

std::string s_multiple_value(const mpq_class& c, long places) {
  const DecimalValue& s = S_reference();
  return format_fixed(c * s.value(), places);
}

json to_json(const Envelope& e) {
  json j;
  j["command"] = e.command;
  j["inputs"] = e.inputs;
  j["result"] = e.result;
  j["warnings"] = e.warnings;
  return j;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void flatten(const std::string& key, const json& v, std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    for (const auto& [k, sub] : v.items()) flatten(key.empty() ? k : key + "." + k, sub, rows);
    return;
  }
  if (v.is_array()) {
    const bool scalars = std::all_of(v.begin(), v.end(), [](const json& x) { return !x.is_structured(); });
    if (scalars) {
      std::string joined;
      for (const auto& x : v) joined += (joined.empty() ? "" : ", ") + scalar_text(x);
      rows.emplace_back(key, joined.empty() ? "(none)" : joined);
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) flatten(key + "[" + std::to_string(i) + "]", v[i], rows);
    return;
  }
  rows.emplace_back(key, scalar_text(v));
}

void render_text(const Envelope& e, std::ostream& out) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("command", e.command);
  for (const auto& [k, v] : e.inputs.items()) flatten("input." + k, v, rows);
  flatten("", e.result, rows);
  for (const auto& w : e.warnings) rows.emplace_back("warning", w);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

void emit(const Envelope& e, const std::string& format, std::ostream& out) {
  if (format == "json")
    out << to_json(e).dump(2) << '\n';
  else
    render_text(e, out);
}

void emit_error(const std::string& command, const json& inputs, const Error& err, const std::string& format,
                std::ostream& out, std::ostream& errs) {
  if (format == "json") {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["error"] = {{"kind", err.kind()}, {"message", err.what()}};
    j["warnings"] = json::array();
    out << j.dump(2) << '\n';
  } else {
    errs << "error (" << err.kind() << "): " << err.what() << '\n';
  }
}

struct Globals {
  std::string format = "text";
  unsigned jobs = 0;
};

// ---- constant ----

struct ConstantArgs {
  long digits = 50;
  std::string method = "series";
  std::optional<std::uint64_t> prime_bound;
  bool artin = false;
};

void cmd_constant(const ConstantArgs& a, Envelope& e) {
  e.inputs["digits"] = a.digits;
  e.inputs["method"] = a.method;
  if (a.prime_bound) e.inputs["prime_bound"] = *a.prime_bound;
  e.inputs["artin"] = a.artin;
  const std::uint64_t bound = a.prime_bound.value_or(1'000'000);

  DecimalValue v;
  if (a.method == "series") {
    if (a.prime_bound) e.warnings.push_back("--prime-bound is ignored by the series method");
    v = S_series(pow10_neg(a.digits + 10));
  } else {
    v = S_product(bound);
  }
  const long shown = std::min(a.digits, v.scale());
  if (shown < a.digits)
    e.warnings.push_back("only " + std::to_string(shown) + " decimals are computed by the product method");
  const std::string value = v.rounded(shown);
  const long certified = v.certified(shown) ? shown : v.certified_places();
  if (certified < shown)
    e.warnings.push_back("only " + std::to_string(certified) + " decimals are certified (error bound " +
                         v.error_str() + ")");
  e.result["method"] = a.method;
  e.result["S"] = value;
  e.result["S_grouped"] = group_digits(value);
  e.result["error_bound"] = v.error_str();
  e.result["certified_digits"] = certified;
  if (a.method == "product") e.result["prime_bound"] = bound;
  if (a.artin) {
    const DecimalValue A = artin_A(bound);
    e.result["A"] = A.rounded(std::min<long>(A.scale(), a.digits));
    e.result["A_error_bound"] = A.error_str();
    e.result["A_prime_bound"] = bound;
  }
}

// ---- density ----

json pair_summary(const NonzeroRational& a, const NonzeroRational& b, bool require_independent) {
  const auto pc = classify_pair(a, b);
  if (!pc.independent && require_independent)
    throw NotIndependent(a.str() + " and " + b.str() + " are multiplicatively dependent");
  json r;
  r["independent"] = pc.independent;
  r["torsion_order"] = pc.torsion_order ? json(*pc.torsion_order) : json(nullptr);
  r["torsionfree"] = pc.torsionfree;
  r["disc_a"] = discriminant(a).get_str();
  r["disc_b"] = discriminant(b).get_str();
  r["disc_ab"] = discriminant(a * b).get_str();
  if (pc.torsionfree) {
    const mpq_class c = c_torsionfree(a, b);
    r["coefficient"] = fraction(c);
    r["delta"] = s_multiple_value(c, 30);
    r["marker"] = "value";
  } else {
    r["coefficient"] = nullptr;
    r["delta"] = nullptr;
    r["marker"] = "out_of_scope";
  }
  return r;
}

void cmd_density(const std::string& as, const std::string& bs, Envelope& e) {
  e.inputs["a"] = as;
  e.inputs["b"] = bs;
  const auto a = NonzeroRational::parse(as);
  const auto b = NonzeroRational::parse(bs);
  e.inputs["a"] = a.str();
  e.inputs["b"] = b.str();
  e.result = pair_summary(a, b, true);
  if (!e.result["torsionfree"].get<bool>())
    e.warnings.push_back("the closed form covers torsionfree pairs only; torsion order " +
                         std::to_string(e.result["torsion_order"].get<std::uint64_t>()));
}

// ---- count ----

struct CountArgs {
  std::string a, b;
  std::uint64_t lo = 7, hi = 500000;
  std::string dump;
  std::vector<std::uint64_t> per_q;
};

void cmd_count(const CountArgs& c, const Globals& g, Envelope& e) {
  const auto a = NonzeroRational::parse(c.a);
  const auto b = NonzeroRational::parse(c.b);
  e.inputs["a"] = a.str();
  e.inputs["b"] = b.str();
  e.inputs["min"] = c.lo;
  e.inputs["max"] = c.hi;
  if (!c.dump.empty()) e.inputs["dump"] = c.dump;
  if (!c.per_q.empty()) e.inputs["per_q"] = c.per_q;
  if (c.lo > c.hi) throw InvalidInput("--min exceeds --max");

  ScanOptions opts;
  opts.jobs = g.jobs;
  const auto scan = scan_range(a, b, c.lo, c.hi, opts);
  const auto report = summarize(a, b, c.lo, c.hi, scan);
  e.result["report"] = json::parse(count_report_json(report));
  if (!report.skipped_primes.empty()) e.result["skipped_primes"] = report.skipped_primes;
  if (!report.predicted) e.warnings.push_back("no closed-form prediction: pair is not torsionfree independent");
  if (!c.per_q.empty()) {
    json list = json::array();
    for (const auto q : c.per_q) {
      if (!is_prime_u64(q)) throw InvalidInput(std::to_string(q) + " is not prime");
      const auto f = per_q_fraction(scan, q);
      list.push_back({{"q", q},
                      {"favourable", f.favourable},
                      {"considered", f.considered},
                      {"fraction", format_fixed(mpq_class(f.fraction), 6)},
                      {"generic", format_fixed(mpq_class(1) - mpq_class(static_cast<unsigned long>(q)) /
                                                              mpq_class(static_cast<unsigned long>(q * q * q - 1)),
                                               6)}});
    }
    e.result["per_q"] = list;
  }
  if (!c.dump.empty()) {
    std::ofstream f(c.dump, std::ios::binary | std::ios::trunc);
    if (!f) throw SinkFailure("cannot open " + c.dump);
    write_observations(f, scan.observations);
    e.result["dump"] = {{"path", c.dump}, {"rows", scan.observations.size()}};
  }
}

// ---- oracle / smn ----

json oracle_json(const mpq_class& coefficient, const OracleResult& r) {
  const DecimalValue& s = S_reference();
  const mpq_class closed = coefficient * s.value();
  const mpq_class diff = abs(mpq_class(r.value.value() - closed));
  json j;
  j["coefficient"] = fraction(coefficient);
  j["closed_value"] = format_fixed(closed, 20);
  j["truncated_value"] = r.value.rounded(20);
  j["tail_bound"] = double_str(r.tail_bound);
  j["discrepancy"] = double_str(diff.get_d());
  // Allow for the rounding of both sides as well as the tail.
  j["within_bound"] = diff <= r.tail_exact() + r.value.error_bound() + abs(coefficient) * s.error_bound();
  return j;
}

void cmd_oracle(const std::string& as, const std::string& bs, const TruncationWindow& w, const Globals& g,
                Envelope& e) {
  const auto a = NonzeroRational::parse(as);
  const auto b = NonzeroRational::parse(bs);
  e.inputs["a"] = a.str();
  e.inputs["b"] = b.str();
  e.inputs["i_max"] = w.i_max;
  e.inputs["j_max"] = w.j_max;
  const auto r = delta_truncated(a, b, w, g.jobs);
  e.result = oracle_json(c_torsionfree(a, b), r);
}

void cmd_smn(std::uint64_t m, std::uint64_t n, const TruncationWindow& w, const Globals& g, Envelope& e) {
  e.inputs["m"] = m;
  e.inputs["n"] = n;
  e.inputs["i_max"] = w.i_max;
  e.inputs["j_max"] = w.j_max;
  if (m < 1 || n < 1) throw InvalidInput("m and n must be >= 1");
  const auto r = smn_truncated(m, n, w, g.jobs);
  e.result = oracle_json(smn_closed(m, n).coefficient, r);
}

// ---- recur ----

struct RecurArgs {
  std::string r, s, x0, x1;
  std::optional<std::uint64_t> nmax;
  std::uint64_t prime_bound = 10000;
};

void cmd_recur(const RecurArgs& ra, const Globals& g, Envelope& e) {
  const RecurrenceSpec spec{parse_rational(ra.r), parse_rational(ra.s), parse_rational(ra.x0),
                            parse_rational(ra.x1)};
  e.inputs["r"] = spec.r.get_str();
  e.inputs["s"] = spec.s.get_str();
  e.inputs["x0"] = spec.x0.get_str();
  e.inputs["x1"] = spec.x1.get_str();
  if (ra.nmax) {
    e.inputs["nmax"] = *ra.nmax;
    e.inputs["prime_bound"] = ra.prime_bound;
  }
  const auto c = classify(spec);
  json& r = e.result;
  r["kind"] = to_string(c.kind);
  r["roots"] = c.roots ? json::array({c.roots->first.get_str(), c.roots->second.get_str()}) : json(nullptr);
  if (c.reduced) {
    const auto& red = *c.reduced;
    r["a1"] = red.a1.get_str();
    r["a2"] = red.a2.get_str();
    r["b1"] = red.b1.get_str();
    r["b2"] = red.b2.get_str();
    r["pair"] = json::array({red.a.str(), red.b.str()});
  } else {
    r["pair"] = nullptr;
  }
  r["torsion_order"] = c.torsion_order ? json(*c.torsion_order) : json(nullptr);
  r["marker"] = to_string(c.marker);
  if (c.density) {
    r["coefficient"] = fraction(c.density->coefficient);
    r["density"] = s_multiple_value(c.density->coefficient, 30);
  } else if (c.marker == DensityMarker::one) {
    r["coefficient"] = nullptr;
    r["density"] = "1";
  } else {
    r["coefficient"] = nullptr;
    r["density"] = nullptr;
  }
  if (c.swapped_pair && c.swapped_density) {
    r["swapped_pair"] = json::array({c.swapped_pair->first.str(), c.swapped_pair->second.str()});
    r["swapped_coefficient"] = fraction(c.swapped_density->coefficient);
  }
  if (!c.note.empty()) e.warnings.push_back(c.note);
  if (ra.nmax) {
    const auto primes = prime_divisors_of_sequence(spec, *ra.nmax, ra.prime_bound, g.jobs);
    r["prime_divisor_count"] = primes.size();
    r["prime_divisors"] = primes;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-variable Artin densities: constants, exact coefficients, prime counts, oracles", "artin"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--jobs", g.jobs, "Worker threads (0: all cores); never changes output");

  ConstantArgs ca;
  auto* constant = app.add_subcommand("constant", "The constant S = prod_p (1 - p/(p^3 - 1))");
  constant->add_option("--digits", ca.digits, "Decimal places")->check(CLI::Range(1L, 2000L));
  constant->add_option("--method", ca.method, "series or product")->check(CLI::IsMember({"series", "product"}));
  constant->add_option("--prime-bound", ca.prime_bound, "Prime bound for the product method")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000}));
  constant->add_flag("--artin", ca.artin, "Also report Artin's constant A (Euler product)");

  std::string da, db;
  auto* density = app.add_subcommand("density", "Exact c_{a,b} with delta(a,b) = c_{a,b} S");
  density->add_option("a", da, "Rational a")->required();
  density->add_option("b", db, "Rational b")->required();

  CountArgs cc;
  auto* count = app.add_subcommand("count", "Count primes p with b mod p in <a mod p>");
  count->add_option("--a", cc.a)->required();
  count->add_option("--b", cc.b)->required();
  count->add_option("--min", cc.lo, "Lower end of the prime range (inclusive)");
  count->add_option("--max", cc.hi, "Upper end of the prime range (inclusive)");
  count->add_option("--dump", cc.dump, "Write per-prime observations as CSV");
  count->add_option("--per-q", cc.per_q, "Primes q for index valuation statistics")->delimiter(',');

  std::string oa, ob;
  TruncationWindow ow;
  auto* oracle = app.add_subcommand("oracle", "Truncated double sum for delta(a,b) against the closed form");
  oracle->add_option("--a", oa)->required();
  oracle->add_option("--b", ob)->required();
  oracle->add_option("--i-max", ow.i_max)->check(CLI::PositiveNumber);
  oracle->add_option("--j-max", ow.j_max)->check(CLI::PositiveNumber);

  std::uint64_t sm = 1, sn = 1;
  std::vector<std::uint64_t> truncate;
  auto* smn = app.add_subcommand("smn", "S_{m,n} closed form against its truncated double sum");
  smn->add_option("m", sm)->required()->check(CLI::PositiveNumber);
  smn->add_option("n", sn)->required()->check(CLI::PositiveNumber);
  smn->add_option("--truncate", truncate, "Window I J")->expected(2)->check(CLI::PositiveNumber);

  RecurArgs ra;
  auto* recur = app.add_subcommand("recur", "Classify x_{k+2} = r x_{k+1} - s x_k and its prime divisors");
  recur->add_option("--r", ra.r)->required();
  recur->add_option("--s", ra.s)->required();
  recur->add_option("--x0", ra.x0)->required();
  recur->add_option("--x1", ra.x1)->required();
  recur->add_option("--nmax", ra.nmax, "List prime divisors of x_0 .. x_N")->check(CLI::PositiveNumber);
  recur->add_option("--prime-bound", ra.prime_bound, "Largest prime reported")->check(CLI::PositiveNumber);

  for (auto* sub : {constant, density, count, oracle, smn, recur}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  Envelope env;
  env.command = app.get_subcommands().front()->get_name();
  try {
    if (constant->parsed()) cmd_constant(ca, env);
    if (density->parsed()) cmd_density(da, db, env);
    if (count->parsed()) cmd_count(cc, g, env);
    if (oracle->parsed()) cmd_oracle(oa, ob, ow, g, env);
    if (smn->parsed()) {
      TruncationWindow w;
      if (truncate.size() == 2) w = {truncate[0], truncate[1]};
      cmd_smn(sm, sn, w, g, env);
    }
    if (recur->parsed()) cmd_recur(ra, g, env);
  } catch (const Error& e) {
    emit_error(env.command, env.inputs, e, g.format, out, err);
    return kExitError;
  }
  emit(env, g.format, out);
  return 0;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace artin::cli
