#include "artin/recurrences.hpp"

#include <algorithm>

#include "artin/empirics.hpp"
#include "artin/errors.hpp"
#include "artin/parallel.hpp"

namespace artin {

namespace {

std::optional<mpq_class> rational_sqrt(const mpq_class& x) {
  if (x < 0) return std::nullopt;
  const mpz_class& n = x.get_num();
  const mpz_class& d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return mpq_class(rn, rd);
}

void require_nonzero_start(const RecurrenceSpec& spec) {
  if (spec.x0 == 0 && spec.x1 == 0) throw InvalidInput("initial values must not both be zero");
}

struct Split {
  mpq_class root1, root2;
};

// Roots with |root1| >= |root2|, ties broken by root1 > 0.
std::optional<Split> split_roots(const RecurrenceSpec& spec) {
  const mpq_class disc = spec.r * spec.r - 4 * spec.s;
  const auto sq = rational_sqrt(disc);
  if (!sq) return std::nullopt;
  mpq_class u = (spec.r + *sq) / 2, v = (spec.r - *sq) / 2;
  const mpq_class au = abs(u), av = abs(v);
  if (au < av || (au == av && u < v)) std::swap(u, v);
  return Split{u, v};
}

// Reduced fraction x = num/den split into coprime integers, den > 0.
std::pair<mpz_class, mpz_class> coprime_parts(const mpq_class& x) { return {x.get_num(), x.get_den()}; }

}  // namespace

std::string to_string(RecurrenceKind kind) {
  switch (kind) {
    case RecurrenceKind::no_rational_roots: return "no_rational_roots";
    case RecurrenceKind::inseparable: return "inseparable";
    case RecurrenceKind::first_order: return "first_order";
    case RecurrenceKind::dependent_pair: return "dependent_pair";
    case RecurrenceKind::independent_torsion: return "independent_torsion";
    case RecurrenceKind::independent_torsionfree: return "independent_torsionfree";
  }
  return "unknown";
}

std::string to_string(DensityMarker marker) {
  switch (marker) {
    case DensityMarker::value: return "value";
    case DensityMarker::one: return "one";
    case DensityMarker::unconditional_positive_unknown_value: return "unconditional_positive_unknown_value";
    case DensityMarker::out_of_scope: return "out_of_scope";
  }
  return "unknown";
}

ReducedRecurrence reduce_to_pair(const RecurrenceSpec& spec) {
  require_nonzero_start(spec);
  const auto split = split_roots(spec);
  if (!split) throw DegenerateSystem("characteristic polynomial has no rational roots");
  if (split->root1 == split->root2) throw DegenerateSystem("double root: the linear system is singular");

  ReducedRecurrence out;
  out.root1 = split->root1;
  out.root2 = split->root2;
  const mpq_class diff = out.root1 - out.root2;
  // x0 = c2 - c1, x1 = c2 root1 - c1 root2.
  out.c2 = (spec.x1 - out.root2 * spec.x0) / diff;
  out.c1 = (spec.x1 - out.root1 * spec.x0) / diff;
  if (out.c1 == 0 || out.c2 == 0 || out.root1 == 0 || out.root2 == 0)
    throw DegenerateSystem("sequence satisfies a first order recursion");

  const mpq_class a = out.root1 / out.root2;
  const mpq_class b = out.c1 / out.c2;
  std::tie(out.a1, out.a2) = coprime_parts(a);
  std::tie(out.b1, out.b2) = coprime_parts(b);
  out.a = NonzeroRational(a);
  out.b = NonzeroRational(b);
  return out;
}

RecurrenceClassification classify(const RecurrenceSpec& spec) {
  require_nonzero_start(spec);
  RecurrenceClassification out;
  const auto split = split_roots(spec);
  if (!split) {
    out.kind = RecurrenceKind::no_rational_roots;
    out.marker = DensityMarker::out_of_scope;
    out.note = "X^2 - rX + s is irreducible over Q; the quadratic field case is not handled";
    return out;
  }
  out.roots = std::make_pair(split->root1, split->root2);
  if (split->root1 == split->root2) {
    out.kind = RecurrenceKind::inseparable;
    out.marker = DensityMarker::one;
    out.note = "double root: the prime divisors have density 1";
    return out;
  }
  ReducedRecurrence red;
  try {
    red = reduce_to_pair(spec);
  } catch (const DegenerateSystem&) {
    out.kind = RecurrenceKind::first_order;
    out.marker = DensityMarker::out_of_scope;
    out.note = "the sequence satisfies a first order recursion";
    return out;
  }
  out.reduced = red;
  const auto pc = classify_pair(red.a, red.b);
  out.swapped_pair = std::make_pair(red.a.inverse(), red.b.inverse());
  if (!pc.independent) {
    out.kind = RecurrenceKind::dependent_pair;
    out.marker = DensityMarker::out_of_scope;
    out.note = "a and b are multiplicatively dependent; see the torsion sequence literature";
    return out;
  }
  out.torsion_order = pc.torsion_order;
  if (!pc.torsionfree) {
    out.kind = RecurrenceKind::independent_torsion;
    out.marker = DensityMarker::unconditional_positive_unknown_value;
    out.note = "torsion order " + std::to_string(*pc.torsion_order) + ": positive density, value not evaluated";
    return out;
  }
  out.kind = RecurrenceKind::independent_torsionfree;
  out.marker = DensityMarker::value;
  out.density = delta_exact(red.a, red.b);
  out.swapped_density = delta_exact(out.swapped_pair->first, out.swapped_pair->second);
  return out;
}

std::vector<mpq_class> sequence_terms(const RecurrenceSpec& spec, std::uint64_t n_max) {
  if (n_max < 1) throw InvalidInput("N must be >= 1");
  std::vector<mpq_class> x;
  x.reserve(n_max + 1);
  x.push_back(spec.x0);
  x.push_back(spec.x1);
  for (std::uint64_t k = 2; k <= n_max; ++k) x.push_back(mpq_class(spec.r * x[k - 1] - spec.s * x[k - 2]));
  return x;
}

std::vector<std::uint64_t> prime_divisors_of_sequence(const RecurrenceSpec& spec, std::uint64_t n_max,
                                                      std::uint64_t prime_bound, unsigned jobs) {
  require_nonzero_start(spec);
  const auto terms = sequence_terms(spec, n_max);
  const auto primes = sieve_primes(2, prime_bound);
  std::vector<std::vector<char>> hit(terms.size());
  parallel_for(terms.size(), jobs, [&](std::size_t n) {
    auto& h = hit[n];
    h.assign(primes.size(), 0);
    const mpz_class& num = terms[n].get_num();
    for (std::size_t k = 0; k < primes.size(); ++k)
      h[k] = mpz_divisible_ui_p(num.get_mpz_t(), primes[k]) != 0;
  });
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    for (const auto& h : hit)
      if (h[k]) {
        out.push_back(primes[k]);
        break;
      }
  }
  return out;
}

}  // namespace artin
