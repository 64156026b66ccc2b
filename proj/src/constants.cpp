#include "artin/constants.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "artin/empirics.hpp"
#include "artin/errors.hpp"
#include "artin/exactdensity.hpp"
#include "artin/real.hpp"

namespace artin {

namespace {

// Upper bound for the real root of x^3 = x + 1 (1.32471795...).
const mpq_class kRhoUpper(331, 250);
// Lower bound for 3 + sqrt 8 (5.82842712...).
const mpq_class kBorweinBase(1457, 250);

struct Approx {
  Real value;
  mpq_class error;
};

mpq_class pow_q(const mpq_class& base, unsigned long e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

// Approximate log2 of a positive rational.
double log2_q(const mpq_class& x) {
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, x.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
  return std::log2(mn / md) + static_cast<double>(en - ed);
}

// Smallest k with 10^-k <= x.
long places_for(const mpq_class& x) {
  long k = static_cast<long>(std::ceil(-log2_q(x) / std::log2(10.0))) - 1;
  k = std::max(k, 0L);
  while (pow10_neg(k) > x) ++k;
  return k;
}

// 2^-e as a rational.
mpq_class pow2_neg(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return mpq_class(mpz_class(1), p);
}

// Borwein's alternating-series evaluation of zeta on real s >= 2 with a
// fixed number of terms n and working precision prec.
class ZetaEngine {
 public:
  ZetaEngine(long n, mpfr_prec_t prec) : n_(n), prec_(prec), dn_(prec) {
    // u_i = n (n+i-1)! 4^i / ((n-i)! (2i)!), d_k = sum_{i<=k} u_i.
    std::vector<mpz_class> d(static_cast<std::size_t>(n) + 1);
    mpz_class u = 1, acc = 1;
    d[0] = acc;
    for (long i = 1; i <= n; ++i) {
      u *= 4 * (n + i - 1) * (n - i + 1);
      mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(2 * i * (2 * i - 1)));
      acc += u;
      d[static_cast<std::size_t>(i)] = acc;
    }
    dn_ = Real(prec, d.back());
    gaps_.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) gaps_.emplace_back(prec, mpz_class(d.back() - d[static_cast<std::size_t>(k)]));
    // Truncation: 3 / ((3+sqrt 8)^n (1 - 2^{1-s})) <= 6 / (3+sqrt 8)^n for s >= 2.
    // Rounding: each of the n terms and partial sums is bounded by d_n.
    error_ = 6 / pow_q(kBorweinBase, static_cast<unsigned long>(n)) +
             mpq_class(8 * (n + 4) * (n + 4)) * pow2_neg(prec);
  }

  static long terms_for(const mpq_class& error) {
    // 6 * base^-n <= error
    const double need = (std::log2(6.0) - log2_q(error)) / std::log2(5.8284);
    long n = std::max(1L, static_cast<long>(std::ceil(need)));
    while (6 / pow_q(kBorweinBase, static_cast<unsigned long>(n)) > error) ++n;
    return n;
  }

  static mpfr_prec_t precision_for(const mpq_class& error, long n) {
    const double bits = -log2_q(error) + 2 * std::log2(static_cast<double>(n + 4)) + 8;
    return static_cast<mpfr_prec_t>(std::ceil(bits)) + 32;
  }

  Approx eval(long s) const {
    Real sum(prec_), term(prec_), power(prec_);
    for (long k = 0; k < n_; ++k) {
      mpfr_ui_pow_ui(power.get(), static_cast<unsigned long>(k + 1), static_cast<unsigned long>(s), MPFR_RNDN);
      mpfr_div(term.get(), gaps_[static_cast<std::size_t>(k)].get(), power.get(), MPFR_RNDN);
      if (k % 2 == 0)
        sum += term;
      else
        sum -= term;
    }
    // Divide by d_n (1 - 2^{1-s}).
    Real scale = Real(prec_, 1) - Real::pow2(prec_, 1 - s);
    scale *= dn_;
    sum /= scale;
    return {sum, error_};
  }

  const mpq_class& error() const { return error_; }

 private:
  long n_;
  mpfr_prec_t prec_;
  Real dn_;
  std::vector<Real> gaps_;
  mpq_class error_;
};

// Coefficient of log zeta(d) in -log S: (1/d) sum_{k|d} a_k mu(d/k),
// minus 1 for d = 3.
std::vector<mpq_class> series_coefficients(long cutoff) {
  std::vector<mpz_class> a(static_cast<std::size_t>(cutoff) + 1);
  for (long k = 1; k <= cutoff; ++k) a[static_cast<std::size_t>(k)] = ak(k);
  std::vector<mpq_class> c(static_cast<std::size_t>(cutoff) + 1);
  for (long d = 2; d <= cutoff; ++d) {
    mpz_class b = 0;
    for (long k = 1; k <= d; ++k) {
      if (d % k) continue;
      const int mu = moebius(static_cast<std::uint64_t>(d / k));
      if (mu) b += mu * a[static_cast<std::size_t>(k)];
    }
    mpq_class coeff(b, d);
    coeff.canonicalize();
    if (d == 3) coeff -= 1;
    c[static_cast<std::size_t>(d)] = coeff;
  }
  return c;
}

Approx log_S_approx(const mpq_class& target_error, std::optional<long> cutoff_override) {
  if (target_error <= 0) throw InvalidInput("target error must be positive");
  const long cutoff = cutoff_override ? *cutoff_override : series_cutoff(target_error);
  if (cutoff < 2) throw InvalidInput("series cutoff must be at least 2");
  const mpq_class tail = series_tail_bound(cutoff);
  const auto coeff = series_coefficients(cutoff);

  mpq_class amplification = 1;
  for (long d = 2; d <= cutoff; ++d) amplification = std::max(amplification, mpq_class(abs(coeff[static_cast<std::size_t>(d)])));
  // Zeta errors are allotted target/8 in total.
  const mpq_class zeta_budget = target_error / (16 * cutoff * amplification);
  const long n = ZetaEngine::terms_for(zeta_budget / 2);
  mpfr_prec_t prec = ZetaEngine::precision_for(zeta_budget / 2, n);
  prec = std::max<mpfr_prec_t>(prec, static_cast<mpfr_prec_t>(std::ceil(-log2_q(target_error))) + 64);
  const ZetaEngine engine(n, prec);

  Real sum(prec);
  mpq_class error = tail;
  for (long d = 2; d <= cutoff; ++d) {
    const mpq_class& c = coeff[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    const Approx z = engine.eval(d);
    Real term = z.value.log();
    term *= Real(prec, c);
    sum += term;
    // |log(z + e) - log z| <= 2e for z >= 1 and e small.
    error += abs(c) * 2 * z.error;
  }
  // Products, logs and additions: each term is below 2 in magnitude.
  error += mpq_class(64 * (cutoff + 1)) * pow2_neg(prec);
  return {sum, error};
}

}  // namespace

mpz_class ak(long k) {
  if (k < 1) throw InvalidInput("a_k is defined for k >= 1");
  mpz_class x = 0, y = 2, z = 3;  // a_k, a_{k+1}, a_{k+2}
  for (long i = 1; i < k; ++i) {
    mpz_class next = y + x;
    x = std::move(y);
    y = std::move(z);
    z = std::move(next);
  }
  return x;
}

DecimalValue zeta(long d, const mpq_class& target_error) {
  if (d < 2) throw InvalidInput("zeta(d) requires d >= 2");
  if (target_error <= 0) throw InvalidInput("target error must be positive");
  const long places = places_for(target_error / 10);
  const mpq_class budget = target_error / 2;
  const long n = ZetaEngine::terms_for(budget / 2);
  const ZetaEngine engine(n, ZetaEngine::precision_for(budget / 2, n));
  const Approx z = engine.eval(d);
  return DecimalValue::from_real(z.value, z.error, places);
}

mpq_class series_tail_bound(long cutoff) {
  // sum_{d>D} (sum_{k<=d} a_k) * 2 * 2^-d with a_k <= rho^k + 2:
  //   2 rho/(rho-1) * (rho/2)^{D+1} / (1 - rho/2) + 4 * 2^-D.
  const mpq_class half_rho = kRhoUpper / 2;
  mpq_class bound = 2 * kRhoUpper / (kRhoUpper - 1) * pow_q(half_rho, static_cast<unsigned long>(cutoff + 1)) /
                    (1 - half_rho);
  bound += 4 * pow2_neg(cutoff);
  return bound;
}

long series_cutoff(const mpq_class& target_error) {
  if (target_error <= 0) throw InvalidInput("target error must be positive");
  // Start near the solution: (rho/2)^D ~ target.
  long d = std::max(3L, static_cast<long>(std::floor(log2_q(target_error) / std::log2(1.3248 / 2))) - 4);
  while (d > 3 && series_tail_bound(d - 1) < target_error / 4) --d;
  while (series_tail_bound(d) >= target_error / 4) ++d;
  return d;
}

DecimalValue log_S(const mpq_class& target_error, std::optional<long> cutoff) {
  const Approx l = log_S_approx(target_error / 2, cutoff);
  return DecimalValue::from_real(l.value, l.error, places_for(target_error / 10));
}

DecimalValue S_series(const mpq_class& target_error) {
  if (target_error <= 0) throw InvalidInput("target error must be positive");
  const Approx l = log_S_approx(target_error / 4, std::nullopt);
  const Real s = (-l.value).exp();
  // S < 1, so |exp(-L-e) - exp(-L)| <= 2e; exp is correctly rounded.
  const mpq_class error = 2 * l.error + pow2_neg(s.prec() - 1);
  return DecimalValue::from_real(s, error, places_for(target_error / 10));
}

namespace {

template <class Factor>
DecimalValue euler_product(std::uint64_t prime_bound, const mpq_class& tail, Factor factor) {
  if (prime_bound < 2) throw InvalidInput("prime bound must be at least 2");
  const auto primes = sieve_primes(2, prime_bound);
  const mpfr_prec_t prec = 128 + 2 * static_cast<mpfr_prec_t>(std::log2(static_cast<double>(primes.size()) + 2));
  Real product(prec, 1);
  for (const auto p : primes) product *= Real(prec, factor(mpz_class(static_cast<unsigned long>(p))));
  // Two roundings per factor, relative.
  const mpq_class rounding = mpq_class(4 * static_cast<long>(primes.size()) + 4) * pow2_neg(prec);
  return DecimalValue::from_real(product, tail + rounding, places_for(tail / 100) + 2);
}

}  // namespace

DecimalValue S_product(std::uint64_t prime_bound) {
  // sum_{n > B} n / (n^3 - 1) <= 2 / B.
  const mpq_class tail(mpz_class(2), mpz_class(static_cast<unsigned long>(prime_bound)));
  return euler_product(prime_bound, tail, [](const mpz_class& p) {
    const mpz_class p3 = p * p * p;
    return mpq_class(p3 - p - 1, p3 - 1);
  });
}

DecimalValue artin_A(std::uint64_t prime_bound) {
  // sum_{n > B} 1 / (n (n - 1)) = 1 / B.
  const mpq_class tail(mpz_class(1), mpz_class(static_cast<unsigned long>(prime_bound)));
  return euler_product(prime_bound, tail, [](const mpz_class& p) {
    const mpz_class pp = p * (p - 1);
    return mpq_class(pp - 1, pp);
  });
}

const DecimalValue& S_reference() {
  static const DecimalValue s = S_series(pow10_neg(42));
  return s;
}

}  // namespace artin
