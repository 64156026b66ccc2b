#include "artin/multstruct.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <set>
#include <utility>

namespace artin {

namespace {

struct Overflow {};

// Integer policy for the Smith normal form kernel: exact int64 with
// overflow detection, or unbounded mpz.
struct Int64Ops {
  using T = long long;
  static bool is_zero(T v) { return v == 0; }
  static T abs(T v) { return v < 0 ? -v : v; }
  static bool less(T a, T b) { return a < b; }
  static T quotient(T a, T b) { return a / b; }  // truncating
  static T rem(T a, T b) { return a % b; }
  static T sub_mul(T a, T q, T b) {
    T prod, out;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Overflow{};
    return out;
  }
  static T add(T a, T b) {
    T out;
    if (__builtin_add_overflow(a, b, &out)) throw Overflow{};
    return out;
  }
};

struct MpzOps {
  using T = mpz_class;
  static bool is_zero(const T& v) { return v == 0; }
  static T abs(const T& v) { return ::abs(v); }
  static bool less(const T& a, const T& b) { return a < b; }
  static T quotient(const T& a, const T& b) {
    T q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static T rem(const T& a, const T& b) {
    T r;
    mpz_tdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
  }
  static T sub_mul(const T& a, const T& q, const T& b) { return a - q * b; }
  static T add(const T& a, const T& b) { return a + b; }
};

template <class Ops>
std::vector<typename Ops::T> smith_diagonal(std::vector<std::vector<typename Ops::T>> m) {
  using T = typename Ops::T;
  std::vector<T> diag;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Pivot: smallest nonzero magnitude in the trailing block.
      std::size_t pr = rows, pc = cols;
      for (std::size_t r = t; r < rows; ++r)
        for (std::size_t c = t; c < cols; ++c)
          if (!Ops::is_zero(m[r][c]) &&
              (pr == rows || Ops::less(Ops::abs(m[r][c]), Ops::abs(m[pr][pc])))) {
            pr = r;
            pc = c;
          }
      if (pr == rows) return diag;
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);

      bool clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (Ops::is_zero(m[r][t])) continue;
        const T q = Ops::quotient(m[r][t], m[t][t]);
        for (std::size_t c = t; c < cols; ++c) m[r][c] = Ops::sub_mul(m[r][c], q, m[t][c]);
        if (!Ops::is_zero(m[r][t])) clean = false;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (Ops::is_zero(m[t][c])) continue;
        const T q = Ops::quotient(m[t][c], m[t][t]);
        for (std::size_t r = t; r < rows; ++r) m[r][c] = Ops::sub_mul(m[r][c], q, m[r][t]);
        if (!Ops::is_zero(m[t][c])) clean = false;
      }
      if (!clean) continue;

      // Pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t r = t + 1; r < rows && divides; ++r)
        for (std::size_t c = t + 1; c < cols; ++c)
          if (!Ops::is_zero(Ops::rem(m[r][c], m[t][t]))) {
            for (std::size_t k = t; k < cols; ++k) m[t][k] = Ops::add(m[t][k], m[r][k]);
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(Ops::abs(m[t][t]));
  }
  return diag;
}

std::vector<std::vector<long>> exponent_rows(const FactoredRational& a, const FactoredRational& b) {
  std::set<std::uint64_t> primes;
  for (const auto& [p, e] : a.exponents) primes.insert(p);
  for (const auto& [p, e] : b.exponents) primes.insert(p);
  std::vector<std::vector<long>> rows(2);
  for (const auto p : primes) {
    auto ea = a.exponents.find(p);
    auto eb = b.exponents.find(p);
    rows[0].push_back(ea == a.exponents.end() ? 0 : ea->second);
    rows[1].push_back(eb == b.exponents.end() ? 0 : eb->second);
  }
  return rows;
}

mpz_class from_u64(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

bool fits_u64(const mpz_class& z) { return z >= 0 && mpz_sizeinbase(z.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const mpz_class& z) {
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

}  // namespace

NonzeroRational::NonzeroRational(long numerator, long denominator)
    : NonzeroRational(mpq_class(mpz_class(numerator), mpz_class(denominator == 0 ? 1 : denominator))) {
  if (denominator == 0) throw InvalidInput("zero denominator");
}

NonzeroRational::NonzeroRational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
  if (value_ == 0) throw InvalidInput("rational must be nonzero");
}

mpq_class parse_rational(std::string_view text) {
  const std::string s(text);
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto valid = [](const std::string& part, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i >= part.size()) return false;
    return std::all_of(part.begin() + static_cast<long>(i), part.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!valid(num, true) || !valid(den, false)) throw InvalidInput("not a rational: '" + s + "'");
  mpz_class n(num[0] == '+' ? num.substr(1) : num), d(den);
  if (d == 0) throw InvalidInput("zero denominator in '" + s + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

NonzeroRational NonzeroRational::parse(std::string_view text) { return NonzeroRational(parse_rational(text)); }

std::string NonzeroRational::fraction_str() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

mpq_class FactoredRational::reconstruct() const {
  mpz_class num = 1, den = 1;
  for (const auto& [p, e] : exponents) {
    mpz_class pp;
    mpz_pow_ui(pp.get_mpz_t(), from_u64(p).get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
    (e > 0 ? num : den) *= pp;
  }
  mpq_class q(sign * num, den);
  q.canonicalize();
  return q;
}

FactoredRational FactoredRational::operator*(const FactoredRational& o) const {
  FactoredRational out{sign * o.sign, exponents};
  for (const auto& [p, e] : o.exponents) {
    const long sum = (out.exponents[p] += e);
    if (sum == 0) out.exponents.erase(p);
  }
  return out;
}

bool FactoredRational::is_square() const {
  return sign > 0 && std::all_of(exponents.begin(), exponents.end(),
                                 [](const auto& kv) { return kv.second % 2 == 0; });
}

FactoredRational factor_rational(const NonzeroRational& q) {
  const mpz_class num = abs(q.numerator());
  const mpz_class den = q.denominator();
  if (!fits_u64(num) || !fits_u64(den))
    throw FactorizationFailure("operand exceeds 64-bit magnitude: " + q.str());
  FactoredRational out;
  out.sign = sgn(q.value()) < 0 ? -1 : 1;
  for (const auto& [p, e] : factor_u64(to_u64(num))) out.exponents[p] += e;
  for (const auto& [p, e] : factor_u64(to_u64(den))) out.exponents[p] -= e;
  return out;
}

mpz_class squarefree_kernel(const FactoredRational& x) {
  mpz_class d = x.sign;
  for (const auto& [p, e] : x.exponents)
    if (e % 2 != 0) d *= from_u64(p);
  return d;
}

mpz_class discriminant(const FactoredRational& x) {
  const mpz_class d = squarefree_kernel(x);
  if (d == 1) return 1;
  if (mpz_fdiv_ui(d.get_mpz_t(), 4) == 1) return d;
  return 4 * d;
}

mpz_class discriminant(const NonzeroRational& x) { return discriminant(factor_rational(x)); }

PrimeExponents discriminant_factors(const FactoredRational& x) {
  PrimeExponents out;
  for (const auto& [p, e] : x.exponents)
    if (e % 2 != 0) out[p] = 1;
  const mpz_class d = squarefree_kernel(x);
  if (d != 1 && mpz_fdiv_ui(d.get_mpz_t(), 4) != 1) out[2] += 2;
  return out;
}

bool multiplicatively_independent(const FactoredRational& a, const FactoredRational& b) {
  const auto rows = exponent_rows(a, b);
  const std::size_t n = rows[0].size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rows[0][i] * rows[1][j] != rows[0][j] * rows[1][i]) return true;
  return false;
}

bool multiplicatively_independent(const NonzeroRational& a, const NonzeroRational& b) {
  return multiplicatively_independent(factor_rational(a), factor_rational(b));
}

std::vector<mpz_class> elementary_divisors(std::vector<std::vector<mpz_class>> matrix) {
  return smith_diagonal<MpzOps>(std::move(matrix));
}

std::uint64_t torsion_order(const FactoredRational& a, const FactoredRational& b) {
  const auto rows = exponent_rows(a, b);
  std::vector<mpz_class> diag;
  try {
    std::vector<std::vector<long long>> m(2);
    for (int r = 0; r < 2; ++r) m[r].assign(rows[r].begin(), rows[r].end());
    for (const auto v : smith_diagonal<Int64Ops>(std::move(m))) diag.emplace_back(static_cast<long>(v));
  } catch (const Overflow&) {
    std::vector<std::vector<mpz_class>> m(2);
    for (int r = 0; r < 2; ++r)
      for (const long e : rows[r]) m[r].emplace_back(e);
    diag = smith_diagonal<MpzOps>(std::move(m));
  }
  if (diag.size() < 2) throw DependentPair("pair is multiplicatively dependent");
  const mpz_class t = diag[0] * diag[1];
  if (!fits_u64(t)) throw InvalidInput("torsion order exceeds 64 bits");
  return to_u64(t);
}

std::uint64_t torsion_order(const NonzeroRational& a, const NonzeroRational& b) {
  return torsion_order(factor_rational(a), factor_rational(b));
}

std::uint64_t torsion_order_single(const FactoredRational& a) {
  std::uint64_t g = 0;
  for (const auto& [p, e] : a.exponents) g = std::gcd(g, static_cast<std::uint64_t>(std::labs(e)));
  return g;
}

mpz_class radical_support(const NonzeroRational& a, const NonzeroRational& b) {
  const auto fa = factor_rational(a);
  const auto fb = factor_rational(b);
  std::set<std::uint64_t> primes;
  for (const auto& [p, e] : fa.exponents) primes.insert(p);
  for (const auto& [p, e] : fb.exponents) primes.insert(p);
  mpz_class s = 1;
  for (const auto p : primes) s *= from_u64(p);
  return s;
}

PairClassification classify_pair(const NonzeroRational& a, const NonzeroRational& b) {
  const auto fa = factor_rational(a);
  const auto fb = factor_rational(b);
  PairClassification out;
  out.independent = multiplicatively_independent(fa, fb);
  if (out.independent) {
    out.torsion_order = torsion_order(fa, fb);
    out.torsionfree = *out.torsion_order == 1;
  }
  out.radical_support = radical_support(a, b);
  return out;
}

}  // namespace artin
