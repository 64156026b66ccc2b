#include "artin/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include <json.hpp>

#include "artin/constants.hpp"
#include "artin/parallel.hpp"

namespace artin {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// SPF tables above this size are not built; p - 1 is trial-factored instead.
constexpr u64 kSpfTableCap = 100'000'000;

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<u64> simple_sieve(u64 limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<u64> out;
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

// Primes in [lo, hi] given all primes up to sqrt(hi).
std::vector<u64> sieve_segment(u64 lo, u64 hi, const std::vector<u64>& base) {
  std::vector<u64> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<u64>(lo, 2);
  std::vector<bool> composite(hi - lo + 1, false);
  for (const u64 p : base) {
    if (p * p > hi) break;
    u64 start = std::max(p * p, (lo + p - 1) / p * p);
    for (u64 m = start; m <= hi; m += p) composite[m - lo] = true;
  }
  for (u64 n = lo; n <= hi; ++n)
    if (!composite[n - lo]) out.push_back(n);
  return out;
}

std::vector<u64> distinct_by_trial(u64 n, const std::vector<u64>& base) {
  std::vector<u64> out;
  for (const u64 p : base) {
    if (p * p > n) break;
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 effective_ceiling(const ScanOptions& opts) { return opts.ceiling ? opts.ceiling : configured_ceiling(); }

u64 residue_of(const mpz_class& z, u64 p) { return mpz_fdiv_ui(z.get_mpz_t(), p); }

u64 inverse_mod(u64 x, u64 p) { return powmod_u64(x, p - 2, p); }

struct ReducedPair {
  mpz_class an, ad, bn, bd;
  explicit ReducedPair(const NonzeroRational& a, const NonzeroRational& b)
      : an(a.numerator()), ad(a.denominator()), bn(b.numerator()), bd(b.denominator()) {}
  bool bad(u64 p) const {
    return residue_of(an, p) == 0 || residue_of(ad, p) == 0 || residue_of(bn, p) == 0 || residue_of(bd, p) == 0;
  }
  u64 a_mod(u64 p) const {
    return static_cast<u64>(static_cast<u128>(residue_of(an, p)) * inverse_mod(residue_of(ad, p), p) % p);
  }
  u64 b_mod(u64 p) const {
    return static_cast<u64>(static_cast<u128>(residue_of(bn, p)) * inverse_mod(residue_of(bd, p), p) % p);
  }
};

}  // namespace

std::uint64_t configured_ceiling() {
  if (const char* env = std::getenv(kCeilingEnv)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v >= 2) return v;
  }
  return kDefaultCeiling;
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t lo, std::uint64_t hi, std::uint64_t ceiling) {
  if (hi > ceiling)
    throw CeilingExceeded("upper bound " + std::to_string(hi) + " exceeds ceiling " + std::to_string(ceiling));
  if (lo > hi || hi < 2) return {};
  const auto base = simple_sieve(isqrt(hi));
  std::vector<u64> out;
  constexpr u64 kSegment = 1u << 20;
  for (u64 start = std::max<u64>(lo, 2); start <= hi; start += kSegment) {
    const u64 end = std::min(hi, start + kSegment - 1);
    auto seg = sieve_segment(start, end, base);
    out.insert(out.end(), seg.begin(), seg.end());
    if (end == hi) break;
  }
  return out;
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t lo, std::uint64_t hi) {
  return sieve_primes(lo, hi, configured_ceiling());
}

SpfTable::SpfTable(std::uint64_t limit) : spf_(limit + 1, 0) {
  if (limit > kSpfTableCap) throw CeilingExceeded("SPF table limit exceeds " + std::to_string(kSpfTableCap));
  for (u64 i = 2; i <= limit; ++i) {
    if (spf_[i]) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i * i > limit) continue;
    for (u64 j = i * i; j <= limit; j += i)
      if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
  }
}

std::vector<std::uint64_t> SpfTable::factorize(std::uint64_t n) const {
  if (n == 0 || n > limit()) throw InvalidInput("argument outside SPF table");
  std::vector<u64> out;
  while (n > 1) {
    const u64 p = spf_[n];
    out.push_back(p);
    n /= p;
  }
  return out;
}

std::vector<std::uint64_t> SpfTable::distinct_factors(std::uint64_t n) const {
  auto all = factorize(n);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

std::vector<std::uint64_t> spf_factorize(std::uint64_t n) {
  if (n == 0) throw InvalidInput("cannot factor zero");
  if (n > configured_ceiling()) throw CeilingExceeded("argument exceeds ceiling");
  return SpfTable(n).factorize(n);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  u64 result = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) result = static_cast<u64>(static_cast<u128>(result) * base % mod);
    base = static_cast<u64>(static_cast<u128>(base) * base % mod);
    exp >>= 1;
  }
  return result;
}

std::uint64_t reduce_mod_p(const NonzeroRational& x, std::uint64_t p) {
  const u64 n = residue_of(x.numerator(), p);
  const u64 d = residue_of(x.denominator(), p);
  if (n == 0 || d == 0) throw BadReduction(x.str() + " does not reduce to a unit mod " + std::to_string(p));
  return static_cast<u64>(static_cast<u128>(n) * inverse_mod(d, p) % p);
}

std::uint64_t order_of_residue(std::uint64_t residue, std::uint64_t p,
                               std::span<const std::uint64_t> p_minus_1_primes) {
  u64 order = p - 1;
  for (const u64 q : p_minus_1_primes) {
    while (order % q == 0 && powmod_u64(residue, order / q, p) == 1) order /= q;
  }
  return order;
}

std::uint64_t order_mod_p(const NonzeroRational& x, std::uint64_t p) {
  if (!is_prime_u64(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  const u64 r = reduce_mod_p(x, p);
  std::vector<u64> qs;
  for (const auto& [q, e] : factor_u64(p - 1)) qs.push_back(q);
  return order_of_residue(r, p, qs);
}

bool is_member(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t p) {
  const u64 ord_a = order_mod_p(a, p);
  return powmod_u64(reduce_mod_p(b, p), ord_a, p) == 1;
}

unsigned valuation(std::uint64_t n, std::uint64_t q) {
  if (n == 0 || q < 2) throw InvalidInput("valuation needs n > 0 and q >= 2");
  unsigned v = 0;
  while (n % q == 0) {
    n /= q;
    ++v;
  }
  return v;
}

ScanResult scan_range(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo, std::uint64_t hi,
                      const ScanOptions& opts) {
  const u64 ceiling = effective_ceiling(opts);
  if (hi > ceiling)
    throw CeilingExceeded("upper bound " + std::to_string(hi) + " exceeds ceiling " + std::to_string(ceiling));
  ScanResult result;
  lo = std::max<u64>(lo, 2);
  if (lo > hi) return result;

  const auto base = simple_sieve(isqrt(hi));
  std::optional<SpfTable> spf;
  if (hi <= kSpfTableCap) spf.emplace(hi);
  const ReducedPair pair(a, b);
  const u64 chunk = std::max<u64>(opts.chunk, 1);
  const std::size_t chunks = static_cast<std::size_t>((hi - lo) / chunk + 1);

  std::vector<ScanResult> parts(chunks);
  parallel_for(chunks, opts.jobs, [&](std::size_t c) {
    const u64 start = lo + c * chunk;
    const u64 end = std::min(hi, start + chunk - 1);
    ScanResult& part = parts[c];
    for (const u64 p : sieve_segment(start, end, base)) {
      if (pair.bad(p)) {
        part.skipped_primes.push_back(p);
        continue;
      }
      const auto qs = spf ? spf->distinct_factors(p - 1) : distinct_by_trial(p - 1, base);
      PrimeObservation obs;
      obs.p = p;
      obs.ord_a = order_of_residue(pair.a_mod(p), p, qs);
      obs.ord_b = order_of_residue(pair.b_mod(p), p, qs);
      obs.index_a = (p - 1) / obs.ord_a;
      obs.index_b = (p - 1) / obs.ord_b;
      obs.member = obs.ord_a % obs.ord_b == 0;
      part.observations.push_back(obs);
    }
  });
  for (auto& part : parts) {
    result.observations.insert(result.observations.end(), part.observations.begin(), part.observations.end());
    result.skipped_primes.insert(result.skipped_primes.end(), part.skipped_primes.begin(), part.skipped_primes.end());
  }
  return result;
}

CountReport summarize(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo, std::uint64_t hi,
                      const ScanResult& scan) {
  CountReport r;
  r.a = a;
  r.b = b;
  r.lo = lo;
  r.hi = hi;
  r.primes_considered = scan.observations.size();
  r.members = static_cast<u64>(std::count_if(scan.observations.begin(), scan.observations.end(),
                                             [](const PrimeObservation& o) { return o.member; }));
  r.skipped = scan.skipped_primes.size();
  r.skipped_primes = scan.skipped_primes;
  r.observed_ratio = r.primes_considered ? mpq_class(mpz_class(static_cast<unsigned long>(r.members)),
                                                     mpz_class(static_cast<unsigned long>(r.primes_considered)))
                                         : mpq_class(0);
  r.observed_ratio.canonicalize();

  const DecimalValue& s = S_reference();
  // The S interval is far narrower than the 25 places printed; its width
  // is propagated through the quotient bound below.
  const mpq_class ratio = r.observed_ratio / s.value();
  const mpq_class ratio_err = r.observed_ratio * s.error_bound() / (s.lower() * s.value());
  r.ratio_over_s = DecimalValue::from_rational(ratio, ratio_err, 25);

  const auto classification = classify_pair(a, b);
  if (classification.torsionfree) {
    const SMultiple predicted = delta_exact(a, b);
    r.predicted = predicted;
    const mpq_class& c = predicted.coefficient;
    r.predicted_value = DecimalValue::from_rational(c * s.value(), abs(c) * s.error_bound(), 25);
  }
  return r;
}

CountReport count_range(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo, std::uint64_t hi,
                        const ScanOptions& opts) {
  return summarize(a, b, lo, hi, scan_range(a, b, lo, hi, opts));
}

std::string count_report_json(const CountReport& r) {
  nlohmann::ordered_json j;
  j["a"] = r.a.fraction_str();
  j["b"] = r.b.fraction_str();
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  j["primes_considered"] = r.primes_considered;
  j["members"] = r.members;
  j["skipped"] = r.skipped;
  j["observed_ratio"] = format_fixed(r.observed_ratio, 20);
  if (r.predicted) {
    mpq_class c = r.predicted->coefficient;
    j["predicted_coefficient"] = c.get_num().get_str() + "/" + c.get_den().get_str();
    j["predicted_value"] = r.predicted_value->rounded(20);
  } else {
    j["predicted_coefficient"] = nullptr;
    j["predicted_value"] = nullptr;
  }
  j["ratio_over_S"] = r.ratio_over_s.rounded(20);
  return j.dump();
}

PerQFraction per_q_fraction(const ScanResult& scan, std::uint64_t q) {
  if (q < 2) throw InvalidInput("q must be prime");
  PerQFraction out;
  out.q = q;
  out.considered = scan.observations.size();
  for (const auto& o : scan.observations)
    if (valuation(o.index_a, q) <= valuation(o.index_b, q)) ++out.favourable;
  out.fraction = out.considered ? static_cast<double>(out.favourable) / static_cast<double>(out.considered) : 1.0;
  const double qd = static_cast<double>(q);
  out.generic = 1.0 - qd / (qd * qd * qd - 1.0);
  return out;
}

PerQFraction per_q_fraction(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t q,
                            std::uint64_t lo, std::uint64_t hi, const ScanOptions& opts) {
  if (!is_prime_u64(q)) throw InvalidInput(std::to_string(q) + " is not prime");
  return per_q_fraction(scan_range(a, b, lo, hi, opts), q);
}

void write_observations(std::ostream& sink, std::span<const PrimeObservation> rows) {
  sink << kObservationHeader << '\n';
  for (const auto& o : rows)
    sink << o.p << ',' << o.ord_a << ',' << o.ord_b << ',' << o.index_a << ',' << o.index_b << ','
         << (o.member ? 1 : 0) << '\n';
  sink.flush();
  if (!sink) throw SinkFailure("failed writing observations");
}

std::uint64_t dump_observations(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo,
                                std::uint64_t hi, std::ostream& sink, const ScanOptions& opts) {
  const auto scan = scan_range(a, b, lo, hi, opts);
  write_observations(sink, scan.observations);
  return scan.observations.size();
}

}  // namespace artin
