#include "artin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "artin/constants.hpp"
#include "artin/errors.hpp"
#include "artin/exactdensity.hpp"
#include "artin/parallel.hpp"
#include "artin/real.hpp"

namespace artin {

namespace {

constexpr mpfr_prec_t kPrec = 128;
constexpr long kScale = 30;

using u64 = std::uint64_t;

double round_up(const mpq_class& x) {
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDU);
  const double d = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(t);
  return d;
}

mpq_class pow2_neg(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return mpq_class(mpz_class(1), p);
}

// Upper bound for sum over squarefree j of 1/(j phi(j)) = zeta(2) zeta(3) / zeta(6).
const mpq_class& k_upper() {
  static const mpq_class k = [] {
    const mpq_class tol = pow10_neg(30);
    const auto z2 = zeta(2, tol), z3 = zeta(3, tol), z6 = zeta(6, tol);
    mpq_class v = z2.upper() * z3.upper() / z6.lower();
    v.canonicalize();
    return v;
  }();
  return k;
}

void check_window(const TruncationWindow& w) {
  if (w.i_max < 1 || w.j_max < 1) throw InvalidInput("truncation bounds must be >= 1");
  if (std::max(w.i_max, w.j_max) > 0xFFFFFFF0ULL) throw InvalidInput("truncation bound too large");
}

// phi(ij) from sieved values: phi(i) phi(j) g / phi(g) with g = gcd(i, j).
u64 phi_product(const ArithmeticTable& t, u64 i, u64 j) {
  const u64 g = std::gcd(i, j);
  return static_cast<u64>(t.phi(static_cast<std::uint32_t>(i))) * t.phi(static_cast<std::uint32_t>(j)) / t.phi(
             static_cast<std::uint32_t>(g)) * g;
}

// Adds num / (i^2 j phi(ij)) to acc.
void add_term(Real& acc, long num, u64 i, u64 j, u64 phi_ij) {
  Real term(kPrec, num);
  const unsigned __int128 d = static_cast<unsigned __int128>(i) * i * j * phi_ij;
  if (d >> 64) {
    mpz_class z(static_cast<unsigned long>(i));
    z *= static_cast<unsigned long>(i);
    z *= static_cast<unsigned long>(j);
    z *= static_cast<unsigned long>(phi_ij);
    mpfr_div_z(term.get(), term.get(), z.get_mpz_t(), MPFR_RNDN);
  } else {
    mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(d), MPFR_RNDN);
  }
  acc += term;
}

struct Strip {
  Real sum{kPrec};
  u64 terms = 0;
};

// Sums strips i = 1..I in parallel and combines them in ascending i.
// weight(i, j) returns the numerator of the (i, j) term; it is only called
// for squarefree j.
OracleResult sum_window(const TruncationWindow& w, unsigned jobs, const std::function<bool(u64)>& keep_i,
                        const std::function<long(u64, u64)>& weight, double tail) {
  check_window(w);
  const ArithmeticTable table(static_cast<std::uint32_t>(std::max(w.i_max, w.j_max)));
  std::vector<u64> squarefree;
  for (u64 j = 1; j <= w.j_max; ++j)
    if (table.mu(static_cast<std::uint32_t>(j)) != 0) squarefree.push_back(j);

  std::vector<Strip> strips(w.i_max);
  parallel_for(w.i_max, jobs, [&](std::size_t idx) {
    const u64 i = idx + 1;
    if (!keep_i(i)) return;
    Strip& s = strips[idx];
    for (const u64 j : squarefree) {
      const long num = weight(i, j);
      if (num == 0) continue;
      add_term(s.sum, num, i, j, phi_product(table, i, j));
      ++s.terms;
    }
  });
  Real total(kPrec);
  u64 terms = 0;
  for (const auto& s : strips) {
    total += s.sum;
    terms += s.terms;
  }
  // Each term costs two roundings of relative size 2^-prec on quantities
  // below 8 in absolute value.
  const mpq_class rounding = mpq_class(static_cast<unsigned long>(64 * (terms + w.i_max + 1))) * pow2_neg(kPrec);
  return OracleResult{DecimalValue::from_real(total, rounding, kScale), tail};
}

// sum_{i <= I, keep(i)} 1/(i^2 phi(i)), rounded up.
mpq_class strip_weight(u64 i_max, const std::function<bool(u64)>& keep) {
  const ArithmeticTable table(static_cast<std::uint32_t>(i_max));
  Real s(kPrec);
  for (u64 i = 1; i <= i_max; ++i) {
    if (!keep(i)) continue;
    Real t(kPrec, 1L);
    mpfr_div_ui(t.get(), t.get(), static_cast<unsigned long>(i * i), MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), table.phi(static_cast<std::uint32_t>(i)), MPFR_RNDN);
    s += t;
  }
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), s.get());
  return q + mpq_class(static_cast<unsigned long>(8 * (i_max + 1))) * pow2_neg(kPrec);
}

// Bound on sum over i > I of 1/(i^2 phi(i)) times sum over j of 1/(j phi(j)),
// using phi(i) >= sqrt(i) for i > 6.
mpq_class i_tail(u64 i_max) {
  static const unsigned long kSmallPhi[] = {1, 1, 2, 2, 4, 2};
  mpq_class head = 0;
  for (u64 i = i_max + 1; i <= 6; ++i) head += mpq_class(1, static_cast<unsigned long>(i * i) * kSmallPhi[i - 1]);
  const u64 from = std::max<u64>(i_max, 6);
  // (2/3) I^{-3/2} <= (2/3) / floor(0.999999 sqrt(I^3)).
  const double c = std::floor(std::sqrt(static_cast<double>(from) * from * from) * 0.999999);
  return k_upper() * (head + mpq_class(2, 3) / mpq_class(c));
}

double window_tail(u64 i_max, u64 j_max, const std::function<bool(u64)>& keep_i, long max_weight) {
  const mpq_class t = mpq_class(j_tail(j_max)) * strip_weight(i_max, keep_i) + i_tail(i_max);
  return round_up(t * max_weight);
}

}  // namespace

double j_tail(std::uint64_t j_max) {
  if (j_max < 1) throw InvalidInput("j_max must be >= 1");
  const ArithmeticTable table(static_cast<std::uint32_t>(j_max));
  Real s(kPrec);
  for (u64 j = 1; j <= j_max; ++j) {
    if (table.mu(static_cast<std::uint32_t>(j)) == 0) continue;
    Real t(kPrec, 1L);
    mpfr_div_ui(t.get(), t.get(), static_cast<unsigned long>(j), MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), table.phi(static_cast<std::uint32_t>(j)), MPFR_RNDN);
    s += t;
  }
  mpq_class partial;
  mpfr_get_q(partial.get_mpq_t(), s.get());
  partial -= mpq_class(static_cast<unsigned long>(8 * (j_max + 1))) * pow2_neg(kPrec);
  return round_up(k_upper() - partial);
}

OracleResult smn_truncated(std::uint64_t m, std::uint64_t n, const TruncationWindow& window, unsigned jobs) {
  if (m < 1 || n < 1) throw InvalidInput("m and n must be >= 1");
  check_window(window);
  const ArithmeticTable mu(static_cast<std::uint32_t>(window.j_max));
  const u64 mn = m * n;
  auto keep = [m](u64 i) { return i % m == 0; };
  auto weight = [&](u64 i, u64 j) -> long {
    if ((static_cast<unsigned __int128>(i) * j) % mn != 0) return 0;
    return mu.mu(static_cast<std::uint32_t>(j));
  };
  return sum_window(window, jobs, keep, weight, window_tail(window.i_max, window.j_max, keep, 1));
}

OracleResult delta_truncated(const NonzeroRational& a, const NonzeroRational& b, const TruncationWindow& window,
                             unsigned jobs) {
  const TorsionfreePair pair(a, b);
  check_window(window);
  const ArithmeticTable mu(static_cast<std::uint32_t>(window.j_max));
  auto keep = [](u64) { return true; };
  auto weight = [&](u64 i, u64 j) -> long {
    return pair.degree_loss(i, j) * mu.mu(static_cast<std::uint32_t>(j));
  };
  return sum_window(window, jobs, keep, weight, window_tail(window.i_max, window.j_max, keep, 4));
}

OracleResult delta_i_truncated(const NonzeroRational& a, const NonzeroRational& b, std::uint64_t i,
                               std::uint64_t j_max) {
  if (i < 1) throw InvalidInput("i must be >= 1");
  const TorsionfreePair pair(a, b);
  const TruncationWindow window{i, j_max};
  check_window(window);
  const ArithmeticTable mu(static_cast<std::uint32_t>(j_max));
  auto keep = [i](u64 k) { return k == i; };
  auto weight = [&](u64 ii, u64 j) -> long {
    return pair.degree_loss(ii, j) * mu.mu(static_cast<std::uint32_t>(j));
  };
  const ArithmeticTable phi(static_cast<std::uint32_t>(i));
  const mpq_class strip = mpq_class(1, static_cast<unsigned long>(i * i)) /
                          mpq_class(static_cast<unsigned long>(phi.phi(static_cast<std::uint32_t>(i))));
  return sum_window(window, 1, keep, weight, round_up(4 * strip * mpq_class(j_tail(j_max))));
}

OracleResult artin_truncated(const NonzeroRational& a, std::uint64_t j_max) {
  const TorsionfreeSingle single(a);
  if (j_max < 1) throw InvalidInput("j_max must be >= 1");
  const ArithmeticTable table(static_cast<std::uint32_t>(j_max));
  Real sum(kPrec);
  u64 terms = 0;
  for (u64 j = 1; j <= j_max; ++j) {
    const int m = table.mu(static_cast<std::uint32_t>(j));
    if (m == 0) continue;
    Real t(kPrec, static_cast<long>(m));
    const mpz_class d = single.degree(j, j);
    mpfr_div_z(t.get(), t.get(), d.get_mpz_t(), MPFR_RNDN);
    sum += t;
    ++terms;
  }
  const mpq_class rounding = mpq_class(static_cast<unsigned long>(16 * (terms + 1))) * pow2_neg(kPrec);
  // The degree is at least j phi(j) / 2.
  return OracleResult{DecimalValue::from_real(sum, rounding, kScale), round_up(2 * mpq_class(j_tail(j_max)))};
}

}  // namespace artin
