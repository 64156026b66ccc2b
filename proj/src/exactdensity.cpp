#include "artin/exactdensity.hpp"

#include <cstdlib>
#include <numeric>

namespace artin {

namespace {

mpz_class from_u64(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

std::uint64_t to_u64_or_zero(const mpz_class& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) return 0;
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

mpz_class product(const PrimeExponents& f) {
  mpz_class out = 1;
  for (const auto& [p, e] : f) {
    mpz_class pp;
    mpz_pow_ui(pp.get_mpz_t(), from_u64(p).get_mpz_t(), static_cast<unsigned long>(e));
    out *= pp;
  }
  return out;
}

// p^e for possibly negative e, as an exact rational.
mpq_class rational_power(std::uint64_t p, long e) {
  mpz_class pp;
  mpz_pow_ui(pp.get_mpz_t(), from_u64(p).get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
  return e >= 0 ? mpq_class(pp) : mpq_class(mpz_class(1), pp);
}

PrimeExponents merge(PrimeExponents a, const PrimeExponents& b) {
  for (const auto& [p, e] : b) a[p] += e;
  return a;
}

// |n| divides k, with k > 0. Entries of 0 in the u64 cache mean |n| > 2^64.
bool divides_u64(std::uint64_t abs_n, std::uint64_t k) { return abs_n != 0 && k % abs_n == 0; }

std::uint64_t checked_product(std::uint64_t i, std::uint64_t j) {
  std::uint64_t k;
  if (__builtin_mul_overflow(i, j, &k)) throw InvalidInput("i*j exceeds 64 bits");
  return k;
}

}  // namespace

int moebius(std::uint64_t n) {
  if (n == 0) throw InvalidInput("moebius of 0");
  int mu = 1;
  for (const auto& [p, e] : factor_u64(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw InvalidInput("phi of 0");
  std::uint64_t phi = n;
  for (const auto& [p, e] : factor_u64(n)) phi = phi / p * (p - 1);
  return phi;
}

mpz_class euler_phi(const PrimeExponents& n) {
  mpz_class phi = 1;
  for (const auto& [p, e] : n) {
    if (e <= 0) continue;
    mpz_class pp;
    mpz_pow_ui(pp.get_mpz_t(), from_u64(p).get_mpz_t(), static_cast<unsigned long>(e - 1));
    phi *= pp * (from_u64(p) - 1);
  }
  return phi;
}

ArithmeticTable::ArithmeticTable(std::uint32_t limit)
    : limit_(limit), mu_(limit + 1, 1), phi_(limit + 1) {
  // Linear sieve.
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(limit + 1, false);
  if (limit >= 1) phi_[1] = 1;
  mu_[0] = 0;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu_[i] = -1;
      phi_[i] = i - 1;
    }
    for (const std::uint32_t p : primes) {
      const std::uint64_t ip = std::uint64_t{i} * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu_[ip] = 0;
        phi_[ip] = phi_[i] * p;
        break;
      }
      mu_[ip] = static_cast<signed char>(-mu_[i]);
      phi_[ip] = phi_[i] * (p - 1);
    }
  }
}

ExactRational r_factor(const PrimeExponents& n) {
  ExactRational r = 1;
  for (const auto& [p, e] : n) {
    if (e <= 0) continue;
    const mpz_class pz = from_u64(p);
    const mpz_class denom = pz * pz * pz - pz - 1;
    r *= -rational_power(p, 4 - 3 * e) / denom;
  }
  r.canonicalize();
  return r;
}

ExactRational r_factor(const mpz_class& n) {
  if (n == 0) throw InvalidInput("r(0) is undefined");
  const mpz_class m = abs(n);
  const std::uint64_t v = to_u64_or_zero(m);
  if (v == 0) throw FactorizationFailure("r(n) argument exceeds 64 bits");
  return r_factor(factor_u64(v));
}

ExactRational e_factor(const NonzeroRational& x) {
  const mpz_class d = discriminant(x);
  if (d == 1) throw SquareInput(x.str() + " is a rational square");
  return mpz_odd_p(d.get_mpz_t()) ? ExactRational(3, 10) : ExactRational(1);
}

TorsionfreePair::TorsionfreePair(const NonzeroRational& a, const NonzeroRational& b) {
  init(factor_rational(a), factor_rational(b));
}

TorsionfreePair::TorsionfreePair(const FactoredRational& a, const FactoredRational& b) { init(a, b); }

void TorsionfreePair::init(const FactoredRational& a, const FactoredRational& b) {
  if (!multiplicatively_independent(a, b)) throw NotIndependent("pair is multiplicatively dependent");
  if (torsion_order(a, b) != 1) throw NotTorsionfree("Q*/<-1,a,b> has torsion");
  fa_ = a;
  fb_ = b;
  const FactoredRational ab = a * b;
  disc_a_ = discriminant(a);
  disc_b_ = discriminant(b);
  disc_ab_ = discriminant(ab);

  lcm2_a_factors_ = discriminant_factors(a);
  if (lcm2_a_factors_[2] == 0) lcm2_a_factors_[2] = 1;
  disc_b_factors_ = discriminant_factors(b);
  disc_ab_factors_ = discriminant_factors(ab);
  lcm2_a_ = product(lcm2_a_factors_);

  support_ = 1;
  for (const auto& [p, e] : merge(a.exponents, b.exponents)) support_ *= from_u64(p);

  abs_disc_[0] = abs(disc_a_);
  abs_disc_[1] = abs(disc_b_);
  abs_disc_[2] = abs(disc_ab_);
  abs_disc_[3] = lcm2_a_;
  for (int w = 0; w < 4; ++w) abs_disc_u64_[w] = to_u64_or_zero(abs_disc_[w]);
}

ExactRational TorsionfreePair::correction() const {
  auto e = [](const mpz_class& d) { return mpz_odd_p(d.get_mpz_t()) ? ExactRational(3, 10) : ExactRational(1); };
  ExactRational c = 1 + r_factor(lcm2_a_factors_) + e(disc_b_) * r_factor(disc_b_factors_) +
                    e(disc_ab_) * r_factor(disc_ab_factors_);
  c.canonicalize();
  return c;
}

bool TorsionfreePair::divides(int which, std::uint64_t k) const {
  return divides_u64(abs_disc_u64_[which], k);
}

int TorsionfreePair::degree_loss(std::uint64_t i, std::uint64_t j) const {
  if (i == 0 || j == 0) throw InvalidInput("i and j must be positive");
  const std::uint64_t k = checked_product(i, j);
  if (i % 2 == 0) return 1 + divides(0, k) + divides(1, k) + divides(2, k);
  return 1 + divides(3, k);
}

ExactRational c_torsionfree(const NonzeroRational& a, const NonzeroRational& b) {
  return TorsionfreePair(a, b).correction();
}

SMultiple delta_exact(const NonzeroRational& a, const NonzeroRational& b) { return {c_torsionfree(a, b)}; }

SMultiple smn_closed(std::uint64_t m, std::uint64_t n) {
  if (m == 0 || n == 0) throw InvalidInput("m and n must be positive");
  const mpz_class mz = from_u64(m), nz = from_u64(n);
  ExactRational c(mpz_class(1), mz * mz * mz * nz * nz * nz);
  const auto nf = factor_u64(n);
  for (const auto& [p, e] : nf) {
    const mpz_class pz = from_u64(p);
    c *= ExactRational(-(pz * pz * pz * pz), pz * pz * pz - pz - 1);
  }
  for (const auto& [p, e] : factor_u64(m)) {
    if (nf.count(p)) continue;
    const mpz_class pz = from_u64(p);
    c *= ExactRational(pz * pz * pz + pz * pz, pz * pz * pz - pz - 1);
  }
  c.canonicalize();
  return {c};
}

SMultiple s2n_prime(std::uint64_t n) {
  if (n == 0) throw InvalidInput("n must be positive");
  if (n % 4 == 2) throw UnsupportedResidue("S'_{2,n} is not defined for n = 2 mod 4");
  const ExactRational r = r_factor(factor_u64(n));
  if (n % 2 == 1) return {ExactRational(ExactRational(3, 10) * r)};
  return {r};
}

int f_degree_loss(std::uint64_t i, std::uint64_t j, const NonzeroRational& a, const NonzeroRational& b) {
  return TorsionfreePair(a, b).degree_loss(i, j);
}

mpz_class field_degree(std::uint64_t i, std::uint64_t j, const TorsionfreePair& pair) {
  const int f = pair.degree_loss(i, j);
  const mpz_class iz = from_u64(i), jz = from_u64(j);
  const mpz_class phi = euler_phi(merge(factor_u64(i), factor_u64(j)));
  return iz * iz * jz * phi / f;
}

mpz_class field_degree(std::uint64_t i, std::uint64_t j, const NonzeroRational& a, const NonzeroRational& b) {
  return field_degree(i, j, TorsionfreePair(a, b));
}

TorsionfreeSingle::TorsionfreeSingle(const NonzeroRational& a) {
  const auto fa = factor_rational(a);
  if (torsion_order_single(fa) != 1) throw NotTorsionfree("Q*/<-1,a> has torsion (or a = +-1)");
  disc_ = discriminant(fa);
  abs_disc_u64_ = to_u64_or_zero(abs(disc_));
}

bool TorsionfreeSingle::halves(std::uint64_t j, std::uint64_t j1) const {
  return j1 % 2 == 0 && divides_u64(abs_disc_u64_, j);
}

mpz_class TorsionfreeSingle::degree(std::uint64_t j, std::uint64_t j1) const {
  if (j == 0 || j1 == 0) throw InvalidInput("j and j1 must be positive");
  if (j % j1 != 0) throw NotDivisor("j1 must divide j");
  mpz_class d = from_u64(j1) * from_u64(euler_phi(j));
  if (halves(j, j1)) d /= 2;
  return d;
}

mpz_class degree_single(std::uint64_t j, std::uint64_t j1, const NonzeroRational& a) {
  return TorsionfreeSingle(a).degree(j, j1);
}

}  // namespace artin
