#include "charsieve/arith.hpp"

#include <algorithm>

namespace charsieve {

Sieve::Sieve(i64 bound) : bound_(bound) {
  if (bound < 2) throw std::invalid_argument("sieve bound must be >= 2");
  if (bound > INT32_MAX) throw std::invalid_argument("sieve bound too large");
  spf_.assign(static_cast<size_t>(bound + 1), 0);
  for (i64 i = 2; i <= bound; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<int32_t>(i);
      primes_.push_back(i);
    }
    for (i64 p : primes_) {
      if (p > spf_[i] || i * p > bound) break;
      spf_[i * p] = static_cast<int32_t>(p);
    }
  }
}

FactoredInteger Sieve::factor(i64 n) const {
  if (n < 1) throw std::domain_error("factor: input must be positive");
  FactoredInteger out;
  out.value = n;
  if (n <= bound_) {
    while (n > 1) {
      i64 p = spf_[n];
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.factors.push_back({p, e});
    }
    return out;
  }
  if (n > bound_ * bound_)
    throw std::domain_error("factor: input exceeds sieve capability (bound^2)");
  for (i64 p : primes_) {
    if (p * p > n) break;
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.factors.push_back({p, e});
    }
  }
  if (n > 1) out.factors.push_back({n, 1});  // leftover is prime
  std::sort(out.factors.begin(), out.factors.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
  return out;
}

bool Sieve::is_squarefree(i64 n) const {
  for (const auto& pe : factor(n).factors)
    if (pe.e > 1) return false;
  return true;
}

i64 Sieve::mobius(i64 n) const {
  auto f = factor(n);
  i64 m = 1;
  for (const auto& pe : f.factors) {
    if (pe.e > 1) return 0;
    m = -m;
  }
  return m;
}

i64 Sieve::euler_phi(i64 n) const {
  i64 phi = 1;
  for (const auto& pe : factor(n).factors) {
    i64 pk = 1;
    for (int i = 1; i < pe.e; ++i) pk *= pe.p;
    phi *= pk * (pe.p - 1);
  }
  return phi;
}

i64 Sieve::phi_star(i64 n) const {
  // multiplicative: p-2 at p, p^{e-2}(p-1)^2 at p^e for e >= 2
  i64 v = 1;
  for (const auto& pe : factor(n).factors) {
    if (pe.e == 1) {
      v *= pe.p - 2;
    } else {
      i64 pk = 1;
      for (int i = 2; i < pe.e; ++i) pk *= pe.p;
      v *= pk * (pe.p - 1) * (pe.p - 1);
    }
  }
  return v;
}

i64 Sieve::divisor_power(i64 n, int g) const {
  if (g < 1 || g > 4) throw std::invalid_argument("divisor_power: g must be in [1,4]");
  i64 v = 1;
  for (const auto& pe : factor(n).factors) {
    // binomial(e + g - 1, g - 1)
    i64 b = 1;
    for (int i = 1; i <= g - 1; ++i) b = b * (pe.e + i) / i;
    v *= b;
  }
  return v;
}

i64 Sieve::radical(i64 n) const {
  i64 r = 1;
  for (const auto& pe : factor(n).factors) r *= pe.p;
  return r;
}

double Sieve::delta_factor(i64 m) const {
  double v = 1.0;
  for (const auto& pe : factor(m).factors) {
    double p = static_cast<double>(pe.p);
    v *= (1.0 - 1.0 / p) / (1.0 - 1.0 / (p * p) - 1.0 / (p * p * p));
  }
  return v;
}

std::vector<i64> Sieve::divisors(i64 n) const {
  std::vector<i64> ds{1};
  for (const auto& pe : factor(n).factors) {
    size_t count = ds.size();
    i64 pk = 1;
    for (int e = 1; e <= pe.e; ++e) {
      pk *= pe.p;
      for (size_t i = 0; i < count; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

const Sieve& default_sieve() {
  static const Sieve sieve(1000000);
  return sieve;
}

SingularSeries singular_series(i64 prime_cutoff, const Sieve& sieve) {
  if (prime_cutoff < 2) throw std::invalid_argument("singular_series: cutoff must be >= 2");
  if (prime_cutoff > sieve.bound())
    throw std::domain_error("singular_series: cutoff exceeds sieve bound");
  double v = 1.0;
  for (i64 p : sieve.primes()) {
    if (p > prime_cutoff) break;
    double pd = static_cast<double>(p);
    v *= 1.0 - 1.0 / (pd * pd) - 1.0 / (pd * pd * pd);
  }
  // |log tail| <= sum_{p > cutoff} 2/p^2 < 2/cutoff
  return {v, 2.0 / static_cast<double>(prime_cutoff), prime_cutoff};
}

}  // namespace charsieve
