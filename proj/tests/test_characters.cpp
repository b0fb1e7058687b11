#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "charsieve/characters.hpp"
#include "charsieve/rng.hpp"

using namespace charsieve;

namespace {

// definition-style conductor oracle: smallest f | q such that chi takes equal
// values on units congruent mod f
i64 conductor_brute(const DirichletCharacter& chi) {
  i64 q = chi.modulus();
  const Sieve& s = default_sieve();
  for (i64 f : s.divisors(q)) {
    bool ok = true;
    for (i64 m = 1; m < q + f && ok; ++m) {
      if (std::gcd(m, q) != 1) continue;
      for (i64 n = m + f; n < q + q && ok; n += f) {
        if (std::gcd(n, q) != 1) continue;
        if (std::abs(chi(m) - chi(n)) > 1e-9) ok = false;
      }
    }
    if (ok) return f;
  }
  return q;
}

}  // namespace

TEST_CASE("group construction examples") {
  auto g1 = CharacterGroup::build(1);
  CHECK(g1->phi() == 1);
  CHECK(g1->all_characters().size() == 1);

  auto g8 = CharacterGroup::build(8);
  CHECK(g8->num_factors() == 2);
  CHECK(g8->factor_order(0) == 2);
  CHECK(g8->factor_order(1) == 2);

  auto g7 = CharacterGroup::build(7);
  CHECK(g7->num_factors() == 1);
  CHECK(g7->factor_order(0) == 6);
  CHECK(g7->factor_generator(0) == 3);  // 3 generates the units mod 7
}

TEST_CASE("group order equals phi and generators are units") {
  const Sieve& s = default_sieve();
  for (i64 q : {1, 2, 3, 4, 8, 12, 16, 24, 45, 72, 100, 243, 256}) {
    auto G = CharacterGroup::build(q);
    i64 order = 1;
    for (int j = 0; j < G->num_factors(); ++j) {
      order *= G->factor_order(j);
      CHECK(std::gcd(G->factor_generator(j), q) == 1);
    }
    CHECK(order == s.euler_phi(q));
    CHECK(static_cast<i64>(G->all_characters().size()) == s.euler_phi(q));
  }
}

TEST_CASE("evaluation examples") {
  auto g5 = CharacterGroup::build(5);
  auto principal = g5->principal();
  for (i64 n : {1, 2, 3, 4, 6}) {
    if (std::gcd(n, 5LL) == 1) CHECK(std::abs(principal(n) - cdouble{1, 0}) < 1e-15);
  }
  CHECK(principal(10) == cdouble{0, 0});

  // the nontrivial character mod 4 takes -1 at 3
  auto prims4 = CharacterGroup::build(4)->primitive_characters();
  REQUIRE(prims4.size() == 1);
  CHECK(std::abs(prims4[0](3) - cdouble{-1, 0}) < 1e-15);
  CHECK(prims4[0](2) == cdouble{0, 0});
}

TEST_CASE("multiplicativity on random units") {
  Rng rng(7);
  for (i64 q = 2; q <= 200; q += 7) {
    auto G = CharacterGroup::build(q);
    auto chars = G->all_characters();
    const auto& chi = chars[static_cast<size_t>(rng.one_to(static_cast<i64>(chars.size())) - 1)];
    for (int t = 0; t < 10; ++t) {
      i64 m = rng.one_to(q * 2), n = rng.one_to(q * 2);
      if (std::gcd(m, q) != 1 || std::gcd(n, q) != 1) continue;
      CHECK(std::abs(chi(m * n) - chi(m) * chi(n)) < 1e-12);
    }
  }
}

TEST_CASE("conjugate pairing") {
  for (i64 q : {5, 8, 12, 21, 36}) {
    auto G = CharacterGroup::build(q);
    for (const auto& chi : G->all_characters()) {
      auto bar = chi.conjugate();
      for (i64 n = 1; n <= q; ++n)
        CHECK(std::abs(bar(n) - std::conj(chi(n))) < 1e-13);
    }
  }
}

TEST_CASE("exact angles back the complex values") {
  auto G = CharacterGroup::build(35);
  for (const auto& chi : G->primitive_characters()) {
    for (i64 n = 1; n <= 35; ++n) {
      auto a = chi.angle(n);
      if (!a) {
        CHECK(chi(n) == cdouble{0, 0});
        continue;
      }
      double t = kTwoPi * static_cast<double>(a->num) / static_cast<double>(a->den);
      CHECK(std::abs(chi(n) - cdouble{std::cos(t), std::sin(t)}) < 1e-12);
    }
  }
}

TEST_CASE("conductor examples") {
  // principal mod 12 has conductor 1
  CHECK(CharacterGroup::build(12)->principal().conductor() == 1);
  // the character mod 6 induced by the quadratic character mod 3
  auto chars6 = CharacterGroup::build(6)->all_characters();
  bool found3 = false;
  for (const auto& chi : chars6)
    if (chi.conductor() == 3) found3 = true;
  CHECK(found3);
  // nontrivial character mod 4 is primitive
  auto prims4 = CharacterGroup::build(4)->primitive_characters();
  REQUIRE(prims4.size() == 1);
  CHECK(prims4[0].conductor() == 4);
}

TEST_CASE("conductor matches the definition-style oracle") {
  for (i64 q = 1; q <= 60; ++q) {
    for (const auto& chi : CharacterGroup::build(q)->all_characters())
      CHECK(chi.conductor() == conductor_brute(chi));
  }
}

TEST_CASE("structural primitivity matches conductor at every q <= 200") {
  for (i64 q = 1; q <= 200; ++q) {
    auto G = CharacterGroup::build(q);
    for (const auto& chi : G->all_characters()) {
      bool structural = G->admits_primitive() && G->primitive_exponents(chi.exponents());
      CHECK(structural == (chi.conductor() == q));
    }
  }
}

TEST_CASE("primitive character counts") {
  const Sieve& s = default_sieve();
  CHECK(primitive_characters(2).empty());
  CHECK(primitive_characters(3).size() == 1);
  CHECK(primitive_characters(5).size() == 3);
  for (i64 q = 1; q <= 120; ++q)
    CHECK(static_cast<i64>(primitive_characters(q).size()) == s.phi_star(q));
}

TEST_CASE("partition by conductor: lifted primitive characters fill the group") {
  const Sieve& s = default_sieve();
  for (i64 q : {12, 40, 45, 96, 210}) {
    i64 total = 0;
    for (i64 f : s.divisors(q)) total += static_cast<i64>(primitive_characters(f).size());
    CHECK(total == s.euler_phi(q));
  }
}

TEST_CASE("orthogonality sum") {
  CHECK(std::abs(orthogonality_sum(5, 7, 2) - cdouble{1, 0}) < 1e-14);
  CHECK(std::abs(orthogonality_sum(5, 2, 3)) < 1e-14);
  CHECK(std::abs(orthogonality_sum(12, 5, 5) - cdouble{1, 0}) < 1e-14);
  CHECK_THROWS_AS(orthogonality_sum(6, 2, 5), std::domain_error);
  Rng rng(11);
  for (i64 q = 1; q <= 60; ++q) {
    for (int t = 0; t < 5; ++t) {
      i64 m = rng.one_to(300), n = rng.one_to(300);
      if (std::gcd(m, q) != 1 || std::gcd(n, q) != 1) continue;
      double expected = (m % q) == (n % q) ? 1.0 : 0.0;
      CHECK(std::abs(orthogonality_sum(q, m, n) - expected) < 1e-12);
    }
  }
}

TEST_CASE("deterministic lexicographic ordering") {
  auto a = CharacterGroup::build(36)->all_characters();
  auto b = CharacterGroup::build(36)->all_characters();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].exponents() == b[i].exponents());
  // principal first
  for (i64 x : a[0].exponents()) CHECK(x == 0);
}

TEST_CASE("modulus beyond the sieve bound is rejected") {
  Sieve small(100);
  CHECK_THROWS_AS(CharacterGroup::build(101, small), std::domain_error);
}
