#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "artin/errors.hpp"
#include "artin/multstruct.hpp"

namespace artin {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 1u << 16;
constexpr int kRhoAttempts = 24;
constexpr u64 kRhoIterations = u64{1} << 22;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit, false);
    std::vector<std::uint32_t> out;
    for (u64 i = 2; i < kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(static_cast<std::uint32_t>(i));
      for (u64 j = i * i; j < kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Brent's variant of Pollard rho. Returns a nontrivial divisor or 0.
u64 rho_split(u64 n, u64 c) {
  auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
  u64 y = 2, x = 2, q = 1, g = 1, ys = 2;
  const u64 m = 128;
  u64 r = 1, iterations = 0;
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      const u64 lim = std::min(m, r - k);
      for (u64 i = 0; i < lim; ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += m;
      iterations += lim;
    }
    r <<= 1;
    if (iterations > kRhoIterations) return 0;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? 0 : g;
}

void split_into(u64 n, PrimeExponents& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    ++out[n];
    return;
  }
  for (int attempt = 0; attempt < kRhoAttempts; ++attempt) {
    const u64 d = rho_split(n, static_cast<u64>(attempt) * 2 + 1);
    if (d != 0) {
      split_into(d, out);
      split_into(n / d, out);
      return;
    }
  }
  throw FactorizationFailure("could not split cofactor " + std::to_string(n));
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic base set for all 64-bit n.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    const u64 base = a % n;
    if (base == 0) continue;
    u64 x = powmod(base, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeExponents factor_u64(u64 n) {
  if (n == 0) throw InvalidInput("cannot factor zero");
  PrimeExponents out;
  for (const std::uint32_t p : small_primes()) {
    if (u64{p} * p > n) break;
    if (n % p) continue;
    long e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out[p] = e;
  }
  if (n == 1) return out;
  // Every prime factor of the cofactor is at least 2^16.
  if (n < kTrialLimit * kTrialLimit) {
    ++out[n];
    return out;
  }
  split_into(n, out);
  return out;
}

}  // namespace artin
