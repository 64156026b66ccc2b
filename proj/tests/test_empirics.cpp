#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "artin/empirics.hpp"
#include "artin/errors.hpp"
#include "oracles.hpp"

using namespace artin;

namespace {

NonzeroRational q(long n, long d = 1) { return NonzeroRational(n, d); }

}  // namespace

TEST_CASE("prime sieve") {
  CHECK(sieve_primes(7, 30) == std::vector<std::uint64_t>{7, 11, 13, 17, 19, 23, 29});
  CHECK(sieve_primes(7, 500000).size() == 41535);
  CHECK(sieve_primes(2, 2) == std::vector<std::uint64_t>{2});
  CHECK(sieve_primes(24, 28).empty());
  const auto seg = sieve_primes(999'000, 1'001'000);
  for (const auto p : seg) CHECK(oracle::is_prime_naive(p));
  std::size_t naive = 0;
  for (std::uint64_t n = 999'000; n <= 1'001'000; ++n) naive += oracle::is_prime_naive(n);
  CHECK(seg.size() == naive);
  CHECK_THROWS_AS(sieve_primes(2, 1000, 999), CeilingExceeded);
}

TEST_CASE("ceiling from the environment") {
  CHECK(configured_ceiling() == kDefaultCeiling);
  setenv(kCeilingEnv, "5000", 1);
  CHECK(configured_ceiling() == 5000);
  CHECK_THROWS_AS(sieve_primes(2, 6000), CeilingExceeded);
  CHECK_THROWS_AS(count_range(q(2), q(5), 7, 6000), CeilingExceeded);
  setenv(kCeilingEnv, "not a number", 1);
  CHECK(configured_ceiling() == kDefaultCeiling);
  unsetenv(kCeilingEnv);
}

TEST_CASE("smallest prime factor table") {
  CHECK(spf_factorize(96) == std::vector<std::uint64_t>{2, 2, 2, 2, 2, 3});
  CHECK(spf_factorize(1).empty());
  const SpfTable t(10000);
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    std::uint64_t prod = 1;
    for (const auto p : t.factorize(n)) {
      CHECK(oracle::is_prime_naive(p));
      prod *= p;
    }
    CHECK(prod == n);
  }
  CHECK(t.distinct_factors(360) == std::vector<std::uint64_t>{2, 3, 5});
}

TEST_CASE("orders modulo p") {
  CHECK(order_mod_p(q(2), 7) == 3);
  CHECK(order_mod_p(q(1), 11) == 1);
  CHECK(order_mod_p(q(1, 2), 7) == 3);
  CHECK_THROWS_AS(order_mod_p(q(14), 7), BadReduction);
  CHECK_THROWS_AS(order_mod_p(q(3, 7), 7), BadReduction);
  CHECK_THROWS_AS(order_mod_p(q(3), 8), InvalidInput);
  CHECK(reduce_mod_p(q(-1), 13) == 12);
  CHECK(reduce_mod_p(q(1, 2), 7) == 4);
}

TEST_CASE("order agrees with naive iteration for p <= 2000") {
  const NonzeroRational xs[] = {q(2), q(3), q(5), q(-1), q(-3), q(2, 3), q(7, 10), q(12)};
  for (const auto p : sieve_primes(2, 2000))
    for (const auto& x : xs) {
      if (mpz_divisible_ui_p(x.numerator().get_mpz_t(), p) || mpz_divisible_ui_p(x.denominator().get_mpz_t(), p))
        continue;
      CHECK(order_mod_p(x, p) == oracle::naive_order(oracle::residue(x.value(), p), p));
    }
}

TEST_CASE("membership examples") {
  CHECK(is_member(q(2), q(4), 7));
  CHECK_FALSE(is_member(q(2), q(5), 7));
  for (long b = 1; b <= 20; ++b)
    if (b % 3) CHECK(is_member(q(2), q(b), 3));
}

TEST_CASE("three membership predicates agree on primes up to 10^4") {
  const std::pair<NonzeroRational, NonzeroRational> pairs[] = {{q(2), q(5)}, {q(5), q(3)}, {q(-3), q(7, 2)}};
  for (const auto& [a, b] : pairs) {
    const auto scan = scan_range(a, b, 2, 10000, {1, 0, 1000});
    for (const auto& o : scan.observations) {
      const std::uint64_t p = o.p;
      CHECK((p - 1) % o.ord_a == 0);
      CHECK((p - 1) % o.ord_b == 0);
      CHECK(o.index_a * o.ord_a == p - 1);
      bool by_valuation = true;
      for (const auto& [ell, e] : factor_u64(p - 1))
        if (valuation(o.index_a, ell) > valuation(o.index_b, ell)) by_valuation = false;
      const std::uint64_t ra = oracle::residue(a.value(), p), rb = oracle::residue(b.value(), p);
      const bool by_power = powmod_u64(rb, oracle::naive_order(ra, p), p) == 1;
      CHECK(o.member == by_valuation);
      CHECK(o.member == by_power);
      CHECK(o.member == is_member(a, b, p));
    }
  }
}

TEST_CASE("range counts") {
  const auto r = count_range(q(2), q(5), 7, 500000);
  CHECK(r.primes_considered == 41535);
  CHECK(r.members == 23498);
  CHECK(r.skipped == 0);
  CHECK(r.ratio_over_s.rounded(4) == "0.9823");
  CHECK(r.predicted->coefficient == mpq_class(9343, 9520));
  CHECK(r.observed_ratio == mpq_class(23498, 41535));

  const auto s = count_range(q(5), q(3), 7, 500000);
  CHECK(s.members == 24429);
  CHECK(s.ratio_over_s.rounded(4) == "1.0212");

  const auto t = count_range(q(2), q(4), 7, 10000);
  CHECK(t.members == t.primes_considered);
  CHECK_FALSE(t.predicted.has_value());

  const auto u = count_range(q(10), q(3), 2, 1000);
  CHECK(u.skipped == 3);
  CHECK(u.skipped_primes == std::vector<std::uint64_t>{2, 3, 5});
}

TEST_CASE("members and non-members partition the considered primes") {
  const auto scan = scan_range(q(3), q(7), 2, 20000);
  std::uint64_t in = 0, out = 0;
  for (const auto& o : scan.observations) (o.member ? in : out)++;
  const auto r = summarize(q(3), q(7), 2, 20000, scan);
  CHECK(r.members == in);
  CHECK(r.primes_considered - r.members == out);
}

TEST_CASE("chunk independence and determinism across workers") {
  const auto whole = count_range(q(2), q(5), 7, 60000, {1, 0, 1 << 16});
  std::uint64_t members = 0, considered = 0;
  for (const auto& [lo, hi] : {std::pair<std::uint64_t, std::uint64_t>{7, 9999}, {10000, 33333}, {33334, 60000}}) {
    const auto part = count_range(q(2), q(5), lo, hi);
    members += part.members;
    considered += part.primes_considered;
  }
  CHECK(members == whole.members);
  CHECK(considered == whole.primes_considered);

  std::ostringstream a, b;
  dump_observations(q(2), q(5), 7, 60000, a, {1, 0, 777});
  dump_observations(q(2), q(5), 7, 60000, b, {8, 0, 4096});
  CHECK(a.str() == b.str());
  CHECK(count_report_json(count_range(q(5), q(3), 7, 60000, {1, 0, 999})) ==
        count_report_json(count_range(q(5), q(3), 7, 60000, {6, 0, 5000})));
}

TEST_CASE("per-q index statistics") {
  const auto scan = scan_range(q(2), q(5), 7, 500000);
  const auto big = per_q_fraction(scan, 1000003);
  CHECK(big.fraction == 1.0);
  const auto three = per_q_fraction(scan, 3);
  CHECK(std::abs(three.fraction - (1.0 - 3.0 / 26.0)) < 0.01);
  CHECK(three.generic == doctest::Approx(1.0 - 3.0 / 26.0));
  // c_{2,5} < 1 and the deficit sits at q = 2.
  const auto two = per_q_fraction(scan, 2);
  CHECK(two.fraction < 1.0 - 2.0 / 7.0);
  CHECK_THROWS_AS(per_q_fraction(q(2), q(5), 4, 7, 100), InvalidInput);
}

TEST_CASE("observation CSV") {
  std::ostringstream out;
  CHECK(dump_observations(q(2), q(5), 7, 100, out) == 22);
  const std::string csv = out.str();
  CHECK(csv.rfind("p,ord_a,ord_b,index_a,index_b,member\n7,3,6,2,1,0\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 23);

  std::ostringstream empty;
  CHECK(dump_observations(q(2), q(5), 24, 28, empty) == 0);
  CHECK(empty.str() == "p,ord_a,ord_b,index_a,index_b,member\n");

  std::ostringstream again;
  dump_observations(q(2), q(5), 7, 100, again);
  CHECK(again.str() == csv);

  std::ostringstream broken;
  broken.setstate(std::ios::badbit);
  CHECK_THROWS_AS(dump_observations(q(2), q(5), 7, 100, broken), SinkFailure);
}

TEST_CASE("report JSON layout") {
  const auto json = count_report_json(count_range(q(2), q(5), 7, 100));
  CHECK(json.rfind("{\"a\":\"2/1\",\"b\":\"5/1\",\"lo\":7,\"hi\":100,\"primes_considered\":22,\"members\":13,"
                   "\"skipped\":0,\"observed_ratio\":",
                   0) == 0);
  const auto dep = count_report_json(count_range(q(2), q(4), 7, 100));
  CHECK(dep.find("\"predicted_coefficient\":null,\"predicted_value\":null") != std::string::npos);
}
