#pragma once

#include <cmath>
#include <random>

#include "charsieve/common.hpp"

namespace charsieve {

// Seeded generator.  Gaussian sampling is hand-rolled Box-Muller so the
// stream does not depend on library distribution internals.
class Rng {
 public:
  explicit Rng(u64 seed) : gen_(seed) {}

  u64 next_u64() { return gen_(); }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform integer in [1, n]
  i64 one_to(i64 n) { return static_cast<i64>(next_u64() % static_cast<u64>(n)) + 1; }

  double gaussian() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(kTwoPi * v);
  }

  cdouble cgaussian() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    double v = uniform();
    double r = std::sqrt(-std::log(u));
    return {r * std::cos(kTwoPi * v), r * std::sin(kTwoPi * v)};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace charsieve
