#pragma once

// Truncated evaluation of the defining double sums over (i, j), used as
// numerical oracles for the closed forms in exactdensity.

#include <cstdint>
#include <string>

#include "artin/decimal.hpp"
#include "artin/multstruct.hpp"

namespace artin {

struct TruncationWindow {
  std::uint64_t i_max = 300;
  std::uint64_t j_max = 3000;
};

struct OracleResult {
  DecimalValue value;  // partial sum; error_bound covers rounding only
  double tail_bound = 0;  // bound on the omitted terms, rounded up
  mpq_class tail_exact() const { return mpq_class(tail_bound); }
};

// sum over i <= I with m | i, j <= J with mn | ij of mu(j) / (i^2 j phi(ij)).
OracleResult smn_truncated(std::uint64_t m, std::uint64_t n, const TruncationWindow& window = {},
                           unsigned jobs = 0);

// sum over i <= I, j <= J of mu(j) / [F_{i,j} : Q]. Torsionfree independent pairs.
OracleResult delta_truncated(const NonzeroRational& a, const NonzeroRational& b,
                             const TruncationWindow& window = {}, unsigned jobs = 0);

// The i-th strip sum_{j <= J} mu(j) / [F_{i,j} : Q].
OracleResult delta_i_truncated(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t i,
                               std::uint64_t j_max);

// sum_{j <= J} mu(j) / [Q(zeta_j, a^{1/j}) : Q].
OracleResult artin_truncated(const NonzeroRational& a, std::uint64_t j_max);

// Rigorous upper bound on the sum over squarefree j > J of 1/(j phi(j)).
double j_tail(std::uint64_t j_max);

}  // namespace artin
