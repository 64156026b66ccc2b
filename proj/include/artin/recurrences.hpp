#pragma once

// Second order recurrences x_{k+2} = r x_{k+1} - s x_k: classification by
// the roots of X^2 - rX + s, reduction to a pair (a, b) and prime divisors
// of the terms.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "artin/exactdensity.hpp"
#include "artin/multstruct.hpp"

namespace artin {

struct RecurrenceSpec {
  mpq_class r, s, x0, x1;
};

enum class RecurrenceKind {
  no_rational_roots,
  inseparable,
  first_order,
  dependent_pair,
  independent_torsion,
  independent_torsionfree,
};

enum class DensityMarker { value, one, unconditional_positive_unknown_value, out_of_scope };

std::string to_string(RecurrenceKind kind);
std::string to_string(DensityMarker marker);

// x_n = b2 a1^n - b1 a2^n with a1, a2 coprime integers and b1, b2 coprime
// integers (after the scalings x_n -> lambda x_n, a_i -> mu a_i).
struct ReducedRecurrence {
  mpz_class a1, a2, b1, b2;
  NonzeroRational a{1}, b{1};  // a1/a2, b1/b2
  mpq_class root1, root2;  // unscaled roots, |root1| >= |root2|
  mpq_class c1, c2;  // unscaled x_n = c2 root1^n - c1 root2^n
};

struct RecurrenceClassification {
  RecurrenceKind kind = RecurrenceKind::no_rational_roots;
  std::optional<std::pair<mpq_class, mpq_class>> roots;
  std::optional<ReducedRecurrence> reduced;
  std::optional<std::uint64_t> torsion_order;
  DensityMarker marker = DensityMarker::out_of_scope;
  std::optional<SMultiple> density;  // set iff marker == value
  // The pair for the opposite root ordering, (a2/a1, b2/b1), and its density.
  std::optional<std::pair<NonzeroRational, NonzeroRational>> swapped_pair;
  std::optional<SMultiple> swapped_density;
  std::string note;
};

RecurrenceClassification classify(const RecurrenceSpec& spec);

// DegenerateSystem unless the roots are rational, distinct and the
// sequence does not satisfy a first order recursion.
ReducedRecurrence reduce_to_pair(const RecurrenceSpec& spec);

// x_0 .. x_N.
std::vector<mpq_class> sequence_terms(const RecurrenceSpec& spec, std::uint64_t n_max);

// Primes <= prime_bound dividing the numerator of some x_n, 0 <= n <= N.
// A zero term is divisible by every prime.
std::vector<std::uint64_t> prime_divisors_of_sequence(const RecurrenceSpec& spec, std::uint64_t n_max,
                                                      std::uint64_t prime_bound, unsigned jobs = 0);

}  // namespace artin
