#pragma once

#include <functional>
#include <string>
#include <vector>

#include "charsieve/arith.hpp"
#include "charsieve/characters.hpp"
#include "charsieve/common.hpp"

namespace charsieve {

// Coefficients of a degree-g Euler product; built-ins are the g-fold divisor
// functions (the coefficients of zeta^g), for which the trivial character is
// the only singular one.
struct LCoefficients {
  int g = 1;
  bool singular_trivial = true;
  const Sieve* sieve = &default_sieve();

  i64 lambda(i64 l) const { return sieve->divisor_power(l, g); }
};

LCoefficients zeta_power(int g, const Sieve& sieve = default_sieve());

// Mollifier factor sequence rho(r) on [r_lo, r_hi]; |rho(r)| <= tau(r)^A.
struct MollifierCoefficients {
  std::vector<double> rho;  // indexed by r, size r_hi + 1
  i64 r_lo = 1, r_hi = 1;
  double bound_exponent = 0.0;
  std::string kind;

  double at(i64 r) const {
    return (r >= r_lo && r <= r_hi) ? rho[static_cast<size_t>(r)] : 0.0;
  }
};

// rho(r) = mu(r) w(r) with the log-taper w(r) = log(X/r)/log X on [1, X]
MollifierCoefficients mollifier_mu_w(i64 X, const Sieve& sieve = default_sieve());
MollifierCoefficients mollifier_mu_w(i64 X, const std::function<double(double)>& w,
                                     const Sieve& sieve = default_sieve());
// dyadic variant: mu(r) times a smooth bump supported on [XA, 2XA]
MollifierCoefficients mollifier_mu_w_dyadic(i64 XA, const Sieve& sieve = default_sieve());
MollifierCoefficients mollifier_delta_at_one();
// adversarial: rho = 1 on [1, X] (violates the partial-sum cancellation)
MollifierCoefficients mollifier_all_ones(i64 X);

// a_m = m^{-1/2} sum_{l r = m} lambda(l) rho(r), m <= N
struct CoefficientSequence {
  std::vector<double> a;  // a[0] unused
  i64 N = 0;
  std::string provenance;

  double at(i64 m) const { return (m >= 1 && m <= N) ? a[static_cast<size_t>(m)] : 0.0; }
};

CoefficientSequence build_sequence(const LCoefficients& L, const MollifierCoefficients& rho,
                                   i64 N);
// general real-valued factor functions (used by the shifted-build identity)
CoefficientSequence build_sequence_general(const std::function<double(i64)>& lambda,
                                           const MollifierCoefficients& rho, i64 N);
CoefficientSequence free_sequence(std::vector<double> values);

struct CancellationReport {
  double max_ratio = 0.0;  // sup over the y-grid of |sum_{r<=y} rho(dr)| * (log y)^C / (tau(d) y)
  double ratio_at_top = 0.0;
  double ratio_at_base = 0.0;
  bool flagged = false;  // growing implied constant across the grid
};

CancellationReport cancellation_check(const MollifierCoefficients& rho, i64 d, double y,
                                      double C_exp, const Sieve& sieve = default_sieve());

// sum over m = 0 (mod d), m <= N of a_m chi(m/d) m^{1/2 - s}
cdouble dirichlet_polynomial_Ad(const CoefficientSequence& seq, i64 d,
                                const DirichletCharacter& chi, cdouble s);

// Formal Dirichlet-series division (sum_l lambda(delta l) l^{-s}) / (sum_l lambda(l) l^{-s})
// in exact integers.  The quotient must be supported on integers whose prime
// factors all divide delta; its chi-twist is the same quotient with each
// coefficient multiplied by chi(j).
struct EulerFactorReport {
  bool supported_ok = false;
  std::vector<std::pair<i64, i64>> quotient;  // nonzero (j, coefficient)
  double max_abs_on_line = 0.0;               // sampled sup_t |P(it, chi)|
  double tau_delta_2g = 0.0;
};

EulerFactorReport euler_factor_check(const LCoefficients& L, i64 delta,
                                     const DirichletCharacter* chi, i64 L_trunc);

}  // namespace charsieve
