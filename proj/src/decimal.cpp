#include "artin/decimal.hpp"

#include <cmath>
#include <cstdio>

namespace artin {

namespace {

mpz_class pow10(long n) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(n));
  return p;
}

// Nearest integer, ties away from zero.
mpz_class round_nearest(const mpq_class& x) {
  const mpz_class twice = 2 * x.get_num();
  mpz_class q;
  const mpz_class den2 = 2 * x.get_den();
  if (x >= 0) {
    mpz_fdiv_q(q.get_mpz_t(), mpz_class(twice + x.get_den()).get_mpz_t(), den2.get_mpz_t());
  } else {
    mpz_cdiv_q(q.get_mpz_t(), mpz_class(twice - x.get_den()).get_mpz_t(), den2.get_mpz_t());
  }
  return q;
}

mpz_class ceil_nonneg(const mpq_class& x) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

std::string fixed_from_mantissa(const mpz_class& m, long places) {
  std::string digits = mpz_class(abs(m)).get_str();
  if (places <= 0) return (m < 0 ? "-" : "") + digits;
  if (static_cast<long>(digits.size()) <= places)
    digits.insert(0, static_cast<std::size_t>(places) - digits.size() + 1, '0');
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return (m < 0 ? "-" : "") + digits;
}

}  // namespace

mpq_class pow10_neg(long n) {
  if (n >= 0) return mpq_class(mpz_class(1), pow10(n));
  return mpq_class(pow10(-n));
}

DecimalValue::DecimalValue(mpz_class mantissa, long scale, mpz_class error_ulps)
    : mantissa_(std::move(mantissa)), scale_(scale), error_ulps_(std::move(error_ulps)) {}

DecimalValue DecimalValue::from_rational(const mpq_class& x, const mpq_class& error, long scale) {
  const mpq_class scaled = x / pow10_neg(scale);
  const mpz_class m = round_nearest(scaled);
  // Rounding contributes at most half an ulp; one full ulp is charged.
  const mpz_class e = ceil_nonneg(mpq_class(error / pow10_neg(scale))) + 1;
  return DecimalValue(m, scale, e);
}

DecimalValue DecimalValue::from_real(const Real& x, const mpq_class& error, long scale) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return from_rational(q, error, scale);
}

mpq_class DecimalValue::value() const {
  mpq_class q = mpq_class(mantissa_) * pow10_neg(scale_);
  q.canonicalize();
  return q;
}

mpq_class DecimalValue::error_bound() const {
  mpq_class q = mpq_class(error_ulps_) * pow10_neg(scale_);
  q.canonicalize();
  return q;
}

std::string DecimalValue::str() const { return fixed_from_mantissa(mantissa_, scale_); }

std::string DecimalValue::rounded(long places) const { return format_fixed(value(), places); }

std::optional<std::string> DecimalValue::certified(long places) const {
  const std::string lo = format_fixed(lower(), places);
  const std::string hi = format_fixed(upper(), places);
  if (lo != hi) return std::nullopt;
  return lo;
}

long DecimalValue::certified_places() const {
  long best = -1;
  for (long k = 0; k <= scale_; ++k) {
    if (certified(k)) best = k;
  }
  return best;
}

std::string DecimalValue::error_str() const {
  const mpq_class e = error_bound();
  if (e == 0) return "0";
  // Two significant digits, rounded up.
  int exp10 = static_cast<int>(std::floor(std::log10(e.get_d())));
  while (e >= pow10_neg(-(exp10 + 1))) ++exp10;
  while (e < pow10_neg(-exp10)) --exp10;
  mpz_class digits = ceil_nonneg(mpq_class(e / pow10_neg(1 - exp10)));
  if (digits >= 100) {
    ++exp10;
    digits = ceil_nonneg(mpq_class(e / pow10_neg(1 - exp10)));
  }
  const std::string d = digits.get_str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%c.%se%d", d[0], d.substr(1).c_str(), exp10);
  return buf;
}

std::string format_fixed(const mpq_class& x, long places) {
  return fixed_from_mantissa(round_nearest(x / pow10_neg(places)), places);
}

std::string group_digits(const std::string& fixed) {
  const auto dot = fixed.find('.');
  if (dot == std::string::npos) return fixed;
  std::string out = fixed.substr(0, dot + 1);
  const std::string frac = fixed.substr(dot + 1);
  for (std::size_t i = 0; i < frac.size(); ++i) {
    if (i > 0 && i % 5 == 0) out += ' ';
    out += frac[i];
  }
  return out;
}

}  // namespace artin
