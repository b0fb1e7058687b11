#pragma once

#include <cmath>

#include "charsieve/common.hpp"

namespace charsieve {

// Neumaier-compensated accumulator.  Deterministic for a fixed order of adds.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanCSum {
 public:
  void add(cdouble z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  KahanCSum& operator+=(cdouble z) {
    add(z);
    return *this;
  }
  cdouble value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

}  // namespace charsieve
