#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "artin/real.hpp"

namespace artin {

// 10^-n as an exact rational.
mpq_class pow10_neg(long n);

// Decimal number with a guaranteed absolute error bound: the true value lies
// in [value - error, value + error]. Both are integers scaled by 10^-scale.
class DecimalValue {
 public:
  DecimalValue() = default;
  DecimalValue(mpz_class mantissa, long scale, mpz_class error_ulps);

  // Rounds x to `scale` places; `error` bounds |x - true| and the rounding
  // step is added on top.
  static DecimalValue from_real(const Real& x, const mpq_class& error, long scale);
  static DecimalValue from_rational(const mpq_class& x, const mpq_class& error, long scale);

  const mpz_class& mantissa() const { return mantissa_; }
  long scale() const { return scale_; }
  mpq_class value() const;
  mpq_class error_bound() const;
  mpq_class lower() const { return value() - error_bound(); }
  mpq_class upper() const { return value() + error_bound(); }
  bool contains(const mpq_class& x) const { return lower() <= x && x <= upper(); }
  // Intervals overlap.
  bool consistent_with(const DecimalValue& o) const { return lower() <= o.upper() && o.lower() <= upper(); }
  double to_double() const { return value().get_d(); }

  // All stored digits.
  std::string str() const;
  // Value rounded half away from zero to `places` decimals.
  std::string rounded(long places) const;
  // Rounded string if every point of the interval rounds identically.
  std::optional<std::string> certified(long places) const;
  // Largest number of places (<= scale) that is certified.
  long certified_places() const;
  // Error bound in scientific notation, rounded up, e.g. "3.1e-52".
  std::string error_str() const;

 private:
  mpz_class mantissa_ = 0;
  long scale_ = 0;
  mpz_class error_ulps_ = 0;
};

// Formats x / 10^places with rounding half away from zero.
std::string format_fixed(const mpq_class& x, long places);
// Groups fractional digits in blocks of five separated by spaces.
std::string group_digits(const std::string& fixed);

}  // namespace artin
