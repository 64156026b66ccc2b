#pragma once

// Empirical side: prime sieving, multiplicative orders mod p, and range
// scans of the membership predicate b mod p in <a mod p>.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "artin/decimal.hpp"
#include "artin/exactdensity.hpp"
#include "artin/multstruct.hpp"

namespace artin {

inline constexpr std::uint64_t kDefaultCeiling = 100'000'000;
inline constexpr const char* kCeilingEnv = "ARTIN_SPF_CEILING";

// Configured ceiling: ARTIN_SPF_CEILING if set and valid, else 10^8.
std::uint64_t configured_ceiling();

// Primes in [lo, hi], ascending (segmented sieve). CeilingExceeded above ceiling.
std::vector<std::uint64_t> sieve_primes(std::uint64_t lo, std::uint64_t hi);
std::vector<std::uint64_t> sieve_primes(std::uint64_t lo, std::uint64_t hi, std::uint64_t ceiling);

// Smallest-prime-factor table on [0, limit].
class SpfTable {
 public:
  explicit SpfTable(std::uint64_t limit);
  std::uint64_t limit() const { return spf_.empty() ? 0 : spf_.size() - 1; }
  // Prime factors with multiplicity, ascending.
  std::vector<std::uint64_t> factorize(std::uint64_t n) const;
  // Distinct prime factors, ascending.
  std::vector<std::uint64_t> distinct_factors(std::uint64_t n) const;

 private:
  std::vector<std::uint32_t> spf_;
};

std::vector<std::uint64_t> spf_factorize(std::uint64_t n);

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// x mod p with the denominator inverted. BadReduction if p divides either part.
std::uint64_t reduce_mod_p(const NonzeroRational& x, std::uint64_t p);

// Order of `residue` in F_p^*, given the distinct primes dividing p - 1.
std::uint64_t order_of_residue(std::uint64_t residue, std::uint64_t p,
                               std::span<const std::uint64_t> p_minus_1_primes);
std::uint64_t order_mod_p(const NonzeroRational& x, std::uint64_t p);

bool is_member(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t p);

struct PrimeObservation {
  std::uint64_t p = 0;
  std::uint64_t ord_a = 0;
  std::uint64_t ord_b = 0;
  std::uint64_t index_a = 0;
  std::uint64_t index_b = 0;
  bool member = false;
};

struct ScanOptions {
  unsigned jobs = 0;  // 0: hardware concurrency
  std::uint64_t ceiling = 0;  // 0: configured_ceiling()
  std::uint64_t chunk = 1u << 16;  // numbers per work unit
};

struct CountReport {
  NonzeroRational a{1}, b{1};
  std::uint64_t lo = 0, hi = 0;
  std::uint64_t primes_considered = 0;
  std::uint64_t members = 0;
  std::uint64_t skipped = 0;
  mpq_class observed_ratio;  // members / primes_considered (0 if none)
  std::optional<SMultiple> predicted;  // torsionfree independent pairs only
  std::optional<DecimalValue> predicted_value;
  DecimalValue ratio_over_s;
  std::vector<std::uint64_t> skipped_primes;
};

// Observations for every prime in [lo, hi] not dividing a numerator or
// denominator of a or b, ascending in p. Deterministic for any job count.
struct ScanResult {
  std::vector<PrimeObservation> observations;
  std::vector<std::uint64_t> skipped_primes;
};
ScanResult scan_range(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo, std::uint64_t hi,
                      const ScanOptions& opts = {});

CountReport count_range(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo, std::uint64_t hi,
                        const ScanOptions& opts = {});
CountReport summarize(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo, std::uint64_t hi,
                      const ScanResult& scan);

std::string count_report_json(const CountReport& report);

// p-adic valuation of n (n > 0).
unsigned valuation(std::uint64_t n, std::uint64_t q);

struct PerQFraction {
  std::uint64_t q = 0;
  std::uint64_t favourable = 0;
  std::uint64_t considered = 0;
  double fraction = 0;
  double generic = 0;  // 1 - q/(q^3 - 1)
};
PerQFraction per_q_fraction(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t q,
                            std::uint64_t lo, std::uint64_t hi, const ScanOptions& opts = {});
PerQFraction per_q_fraction(const ScanResult& scan, std::uint64_t q);

inline constexpr const char* kObservationHeader = "p,ord_a,ord_b,index_a,index_b,member";

void write_observations(std::ostream& sink, std::span<const PrimeObservation> rows);
// Returns rows written. SinkFailure if the stream fails.
std::uint64_t dump_observations(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t lo,
                                std::uint64_t hi, std::ostream& sink, const ScanOptions& opts = {});

}  // namespace artin
