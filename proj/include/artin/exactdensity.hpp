#pragma once

// Exact rational side of the two-variable density: r(n), e(x), the
// correction factor c_{a,b}, closed forms for the basic double sums and the
// field degrees [F_{i,j} : Q].

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "artin/multstruct.hpp"

namespace artin {

using ExactRational = mpq_class;

// coefficient * S, kept symbolic.
struct SMultiple {
  ExactRational coefficient;

  bool operator==(const SMultiple& o) const { return coefficient == o.coefficient; }
  SMultiple operator+(const SMultiple& o) const { return {ExactRational(coefficient + o.coefficient)}; }
  std::string str() const { return coefficient.get_str() + "*S"; }
};

int moebius(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
mpz_class euler_phi(const PrimeExponents& n);

// Sieved mu and phi for 1..limit.
class ArithmeticTable {
 public:
  explicit ArithmeticTable(std::uint32_t limit);
  std::uint32_t limit() const { return limit_; }
  int mu(std::uint32_t n) const { return mu_[n]; }
  std::uint32_t phi(std::uint32_t n) const { return phi_[n]; }

 private:
  std::uint32_t limit_;
  std::vector<signed char> mu_;
  std::vector<std::uint32_t> phi_;
};

ExactRational r_factor(const mpz_class& n);
ExactRational r_factor(const PrimeExponents& n);

// 3/10 if disc(x) is odd, 1 if even. SquareInput for squares.
ExactRational e_factor(const NonzeroRational& x);

// Discriminant data of a torsionfree independent pair, validated once.
class TorsionfreePair {
 public:
  // Throws NotIndependent or NotTorsionfree.
  TorsionfreePair(const NonzeroRational& a, const NonzeroRational& b);
  TorsionfreePair(const FactoredRational& a, const FactoredRational& b);

  const mpz_class& disc_a() const { return disc_a_; }
  const mpz_class& disc_b() const { return disc_b_; }
  const mpz_class& disc_ab() const { return disc_ab_; }
  const mpz_class& lcm2_disc_a() const { return lcm2_a_; }
  const mpz_class& support() const { return support_; }

  ExactRational correction() const;

  // Degree loss i^2 j phi(ij) / [F_{i,j} : Q], in {1, 2, 4}.
  int degree_loss(std::uint64_t i, std::uint64_t j) const;

 private:
  void init(const FactoredRational& a, const FactoredRational& b);
  bool divides(int which, std::uint64_t k) const;

  FactoredRational fa_, fb_;
  mpz_class disc_a_, disc_b_, disc_ab_, lcm2_a_, support_;
  PrimeExponents lcm2_a_factors_, disc_b_factors_, disc_ab_factors_;
  mpz_class abs_disc_[4];  // |Δ(a)|, |Δ(b)|, |Δ(ab)|, lcm(2, |Δ(a)|)
  std::uint64_t abs_disc_u64_[4] = {0, 0, 0, 0};  // 0 when above 64 bits
};

ExactRational c_torsionfree(const NonzeroRational& a, const NonzeroRational& b);
SMultiple delta_exact(const NonzeroRational& a, const NonzeroRational& b);

SMultiple smn_closed(std::uint64_t m, std::uint64_t n);
// UnsupportedResidue when n = 2 mod 4.
SMultiple s2n_prime(std::uint64_t n);

int f_degree_loss(std::uint64_t i, std::uint64_t j, const NonzeroRational& a, const NonzeroRational& b);
mpz_class field_degree(std::uint64_t i, std::uint64_t j, const NonzeroRational& a, const NonzeroRational& b);
mpz_class field_degree(std::uint64_t i, std::uint64_t j, const TorsionfreePair& pair);

// One-variable radical data for a with Q*/<-1, a> torsionfree.
class TorsionfreeSingle {
 public:
  explicit TorsionfreeSingle(const NonzeroRational& a);  // throws NotTorsionfree

  const mpz_class& disc() const { return disc_; }
  // True when the degree of Q(zeta_j, a^{1/j1}) halves.
  bool halves(std::uint64_t j, std::uint64_t j1) const;
  mpz_class degree(std::uint64_t j, std::uint64_t j1) const;  // throws NotDivisor

 private:
  mpz_class disc_;
  std::uint64_t abs_disc_u64_ = 0;  // 0 when above 64 bits
};

// [Q(zeta_j, a^{1/j1}) : Q] for a with Q*/<-1, a> torsionfree.
mpz_class degree_single(std::uint64_t j, std::uint64_t j1, const NonzeroRational& a);

}  // namespace artin
