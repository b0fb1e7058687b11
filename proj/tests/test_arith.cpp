#include <doctest.h>

#include <cmath>
#include <numeric>

#include "charsieve/arith.hpp"
#include "charsieve/rng.hpp"

using namespace charsieve;

namespace {

// brute-force oracles, independent of the sieve implementation
i64 phi_brute(i64 n) {
  i64 c = 0;
  for (i64 k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++c;
  return c;
}

i64 mobius_brute(i64 n) {
  i64 m = 1;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      m = -m;
    }
  }
  if (n > 1) m = -m;
  return m;
}

i64 tau_g_brute(i64 n, int g) {
  if (g == 1) return 1;
  i64 c = 0;
  for (i64 d = 1; d <= n; ++d)
    if (n % d == 0) c += tau_g_brute(n / d, g - 1);
  return c;
}

}  // namespace

TEST_CASE("euler phi basics and brute force") {
  const Sieve& s = default_sieve();
  CHECK(s.euler_phi(1) == 1);
  CHECK(s.euler_phi(12) == phi_brute(12));
  CHECK(s.euler_phi(12) == 4);
  for (i64 p : {2, 3, 5, 97, 997}) CHECK(s.euler_phi(p) == p - 1);
  for (i64 n = 1; n <= 300; ++n) CHECK(s.euler_phi(n) == phi_brute(n));
}

TEST_CASE("mobius basics") {
  const Sieve& s = default_sieve();
  CHECK(s.mobius(1) == 1);
  CHECK(s.mobius(4) == 0);
  CHECK(s.mobius(30) == -1);
  for (i64 n = 1; n <= 500; ++n) CHECK(s.mobius(n) == mobius_brute(n));
}

TEST_CASE("phi_star examples and Mobius-transform identity") {
  const Sieve& s = default_sieve();
  CHECK(s.phi_star(1) == 1);
  CHECK(s.phi_star(2) == 0);
  // oracle: mu * phi as a divisor sum
  auto phi_star_brute = [&](i64 q) {
    i64 v = 0;
    for (i64 d : s.divisors(q)) v += s.mobius(q / d) * s.euler_phi(d);
    return v;
  };
  CHECK(s.phi_star(8) == phi_star_brute(8));
  CHECK(s.phi_star(8) == 2);
  for (i64 q = 1; q <= 400; ++q) CHECK(s.phi_star(q) == phi_star_brute(q));
}

TEST_CASE("phi_star vanishes exactly at 2 mod 4 above 2, and partitions phi") {
  const Sieve& s = default_sieve();
  for (i64 q = 1; q <= 1000; ++q) {
    bool zero = s.phi_star(q) == 0;
    bool expected = q % 4 == 2;  // includes q = 2: its only character is induced mod 1
    CHECK(zero == expected);
  }
  for (i64 q = 1; q <= 1000; ++q) {
    i64 total = 0;
    for (i64 d : s.divisors(q)) total += s.phi_star(d);
    CHECK(total == s.euler_phi(q));
  }
}

TEST_CASE("divisor_power examples and brute force") {
  const Sieve& s = default_sieve();
  CHECK(s.divisor_power(17, 1) == 1);
  CHECK(s.divisor_power(6, 2) == 4);
  CHECK(s.divisor_power(4, 3) == tau_g_brute(4, 3));
  CHECK(s.divisor_power(4, 3) == 6);
  for (i64 n = 1; n <= 60; ++n)
    for (int g = 1; g <= 4; ++g) CHECK(s.divisor_power(n, g) == tau_g_brute(n, g));
}

TEST_CASE("multiplicativity on random coprime pairs") {
  const Sieve& s = default_sieve();
  Rng rng(42);
  int done = 0;
  while (done < 200) {
    i64 m = rng.one_to(1000000);
    i64 n = rng.one_to(std::max<i64>(1, 1000000 / std::max<i64>(1, m)));
    if (n < 1 || std::gcd(m, n) != 1) continue;
    ++done;
    CHECK(s.euler_phi(m * n) == s.euler_phi(m) * s.euler_phi(n));
    CHECK(s.mobius(m * n) == s.mobius(m) * s.mobius(n));
    CHECK(s.phi_star(m * n) == s.phi_star(m) * s.phi_star(n));
    CHECK(s.divisor_power(m * n, 3) == s.divisor_power(m, 3) * s.divisor_power(n, 3));
  }
}

TEST_CASE("delta_factor values and radical invariance") {
  const Sieve& s = default_sieve();
  CHECK(s.delta_factor(1) == doctest::Approx(1.0));
  CHECK(s.delta_factor(2) == doctest::Approx(0.8));
  // direct evaluation at m = 6
  double p2 = (1 - 0.5) / (1 - 0.25 - 0.125);
  double p3 = (1 - 1.0 / 3) / (1 - 1.0 / 9 - 1.0 / 27);
  CHECK(s.delta_factor(6) == doctest::Approx(p2 * p3).epsilon(1e-14));
  for (i64 m : {4, 8, 9, 12, 360, 1024}) {
    CHECK(s.delta_factor(m) == doctest::Approx(s.delta_factor(s.radical(m))).epsilon(1e-15));
  }
}

TEST_CASE("singular series values, monotonicity and tail bound") {
  CHECK(singular_series(2).value == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(singular_series(3).value ==
        doctest::Approx(0.625 * (1 - 1.0 / 9 - 1.0 / 27)).epsilon(1e-15));
  auto a = singular_series(1000);
  auto b = singular_series(100000);
  CHECK(b.value < a.value);
  CHECK(std::abs(a.value - b.value) <= a.tail_bound);
  CHECK_THROWS_AS(singular_series(1), std::invalid_argument);
}

TEST_CASE("factorization rejects out-of-range input") {
  Sieve small(1000);
  CHECK_THROWS_AS(small.factor(1000001LL * 1000003LL), std::domain_error);
  CHECK(small.factor(999983LL).factors.size() == 1);  // prime below bound^2
  auto f = small.factor(360);
  CHECK(f.value == 360);
  i64 v = 1;
  for (size_t i = 0; i < f.factors.size(); ++i) {
    if (i) CHECK(f.factors[i].p > f.factors[i - 1].p);
    for (int e = 0; e < f.factors[i].e; ++e) v *= f.factors[i].p;
  }
  CHECK(v == 360);
}
