#pragma once

// Multiplicative structure of nonzero rationals: factorization, squarefree
// kernels, quadratic discriminants, and the torsion of Q*/<-1, a, b>.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artin/errors.hpp"

namespace artin {

using PrimeExponents = std::map<std::uint64_t, long>;

// Accepts "n", "-n", "n/d", "-n/d"; zero allowed. InvalidInput otherwise.
mpq_class parse_rational(std::string_view text);

class NonzeroRational {
 public:
  NonzeroRational(long numerator, long denominator = 1);
  explicit NonzeroRational(mpq_class value);

  // Accepts "n", "-n", "n/d", "-n/d".
  static NonzeroRational parse(std::string_view text);

  const mpq_class& value() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  std::string str() const { return value_.get_str(); }
  // Always "num/den", also for integers.
  std::string fraction_str() const;

  NonzeroRational operator*(const NonzeroRational& o) const {
    return NonzeroRational(mpq_class(value_ * o.value_));
  }
  NonzeroRational inverse() const { return NonzeroRational(mpq_class(1 / value_)); }
  bool operator==(const NonzeroRational& o) const { return value_ == o.value_; }
  bool operator<(const NonzeroRational& o) const { return value_ < o.value_; }

 private:
  mpq_class value_;
};

struct FactoredRational {
  int sign = 1;
  PrimeExponents exponents;  // no zero entries

  mpq_class reconstruct() const;
  FactoredRational operator*(const FactoredRational& o) const;
  bool is_square() const;  // sign positive and all exponents even
};

struct PairClassification {
  bool independent = false;
  std::optional<std::uint64_t> torsion_order;  // set iff independent
  bool torsionfree = false;
  mpz_class radical_support;
};

// Factors an unsigned 64-bit integer (n >= 1) into primes, ascending.
// Trial division below 2^16, then Miller-Rabin and Pollard-Brent splitting.
PrimeExponents factor_u64(std::uint64_t n);
bool is_prime_u64(std::uint64_t n);

// Numerator and denominator must fit in 64 bits; otherwise
// FactorizationFailure.
FactoredRational factor_rational(const NonzeroRational& q);

// sign * product of the primes with odd exponent.
mpz_class squarefree_kernel(const FactoredRational& x);

// Discriminant of Q(sqrt x); 1 when x is a rational square.
mpz_class discriminant(const NonzeroRational& x);
mpz_class discriminant(const FactoredRational& x);
// Same value, returned as |disc| in factored form (for r(n) evaluation).
PrimeExponents discriminant_factors(const FactoredRational& x);

bool multiplicatively_independent(const NonzeroRational& a, const NonzeroRational& b);
bool multiplicatively_independent(const FactoredRational& a, const FactoredRational& b);

// Elementary divisors (nonzero diagonal of the Smith normal form).
std::vector<mpz_class> elementary_divisors(std::vector<std::vector<mpz_class>> matrix);

// Order of the torsion subgroup of Q*/<-1, a, b>. Throws DependentPair.
std::uint64_t torsion_order(const NonzeroRational& a, const NonzeroRational& b);
std::uint64_t torsion_order(const FactoredRational& a, const FactoredRational& b);

// Torsion of Q*/<-1, a> (gcd of the exponents; 0 for a = +-1).
std::uint64_t torsion_order_single(const FactoredRational& a);

mpz_class radical_support(const NonzeroRational& a, const NonzeroRational& b);

PairClassification classify_pair(const NonzeroRational& a, const NonzeroRational& b);

}  // namespace artin
