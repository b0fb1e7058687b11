#pragma once

#include <vector>

#include "charsieve/common.hpp"

namespace charsieve {

struct PrimePower {
  i64 p;
  int e;
};

// value = prod p^e, primes strictly increasing, exponents >= 1.
struct FactoredInteger {
  i64 value = 1;
  std::vector<PrimePower> factors;
};

// Smallest-prime-factor sieve.  Factors any n <= bound^2 by trial division
// over the cached primes; larger inputs are rejected.
class Sieve {
 public:
  explicit Sieve(i64 bound = 1000000);

  i64 bound() const { return bound_; }
  const std::vector<i64>& primes() const { return primes_; }

  FactoredInteger factor(i64 n) const;
  bool is_squarefree(i64 n) const;
  i64 mobius(i64 n) const;
  i64 euler_phi(i64 n) const;
  // number of primitive characters mod n (the Mobius transform of phi)
  i64 phi_star(i64 n) const;
  // number of ordered g-tuples of positive integers with product n, 1 <= g <= 4
  i64 divisor_power(i64 n, int g) const;
  i64 radical(i64 n) const;
  // prod over p | m of (1 - 1/p)(1 - 1/p^2 - 1/p^3)^{-1}
  double delta_factor(i64 m) const;
  std::vector<i64> divisors(i64 n) const;  // ascending

 private:
  i64 bound_;
  std::vector<int32_t> spf_;
  std::vector<i64> primes_;
};

const Sieve& default_sieve();

struct SingularSeries {
  double value;
  double tail_bound;  // the truncated product differs from the limit by less than this
  i64 prime_cutoff;
};

// prod over p <= cutoff of (1 - 1/p^2 - 1/p^3)
SingularSeries singular_series(i64 prime_cutoff, const Sieve& sieve = default_sieve());

}  // namespace charsieve
