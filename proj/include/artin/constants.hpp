#pragma once

// The universal constant S = prod_p (1 - p/(p^3 - 1)) to high precision,
// via a rapidly converging series in log zeta(d), and partial Euler
// products for S and Artin's constant as independent checks.

#include <gmpxx.h>

#include <cstdint>
#include <optional>

#include "artin/decimal.hpp"

namespace artin {

// a_1 = 0, a_2 = 2, a_3 = 3, a_{k+3} = a_{k+1} + a_k (Perrin).
mpz_class ak(long k);

// zeta(d) for integer d >= 2 with error_bound <= target_error.
DecimalValue zeta(long d, const mpq_class& target_error);

// Smallest cutoff D whose series tail bound is below target_error / 4.
long series_cutoff(const mpq_class& target_error);
// Rigorous bound on the omitted terms d > D of the -log S series.
mpq_class series_tail_bound(long cutoff);

// -log S. With an explicit cutoff the corresponding tail bound is charged to
// the error instead of being driven below target_error.
DecimalValue log_S(const mpq_class& target_error, std::optional<long> cutoff = std::nullopt);
DecimalValue S_series(const mpq_class& target_error);

// Partial Euler products over primes <= prime_bound, with tail error.
DecimalValue S_product(std::uint64_t prime_bound);
DecimalValue artin_A(std::uint64_t prime_bound);

// S to roughly 40 digits, computed once per process.
const DecimalValue& S_reference();

}  // namespace artin
