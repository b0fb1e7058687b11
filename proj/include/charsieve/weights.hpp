#pragma once

#include <functional>
#include <string>

#include "charsieve/common.hpp"
#include "charsieve/quadrature.hpp"

namespace charsieve {

// Smooth weight of compact support in the positive reals.  mean = int Psi,
// mellin0 = int Psi(t)/t dt, both to tight quadrature accuracy.
struct SmoothCutoff {
  std::function<double(double)> f;   // Psi
  std::function<double(double)> df;  // Psi'
  double x_lo = 1.0;
  double x_hi = 2.0;
  double mean = 0.0;
  double mellin0 = 0.0;
  std::string name;

  double operator()(double x) const { return f(x); }
  // (x Psi(x))'
  double omega(double x) const {
    if (x <= x_lo || x >= x_hi) return 0.0;
    return f(x) + x * df(x);
  }
};

// exp(-1/((x-lo)(hi-x))) normalized to peak 1
SmoothCutoff bump_cutoff(double lo = 1.0, double hi = 2.0);
const SmoothCutoff& default_cutoff();
SmoothCutoff cutoff_by_name(const std::string& name);

inline QuadOptions tight_quad() { return {1e-12, 1e-12, 48}; }

// Remainder integrals of the two Euler-Maclaurin applications:
//   sum_l (1/l) Psi(l/T) = mellin0 + psi2(T)/T
//   sum_l (1/l) Psi(T/l) = mellin0 + psi1(T)
// psi2(T) = int (t^{-1}Psi(t))' {tT} dt;  psi1(T) = -int Omega(tT) {1/t} dt.
double psi2(const SmoothCutoff& psi, double T, const QuadOptions& opts = tight_quad());
double psi1(const SmoothCutoff& psi, double T, const QuadOptions& opts = tight_quad());

// |sum_{l>=1} f(l) - int_0^inf [f(t) + {t} f'(t)] dt| for f smooth with
// compact support [lo, hi] in the positive reals.
double euler_maclaurin_residual(const std::function<double(double)>& f,
                                const std::function<double(double)>& df, double lo, double hi);

// Two-variable test weight supported in [1,N]^2 with x^i y^j |d^{i,j}F| <= 1
// for i,j <= 2 (the construction rescales to enforce the bound).
struct TestFunction {
  std::function<double(double, double)> F;
  double N = 2.0;
  int derivative_bound_order = 2;
  // optional product structure F(x,y) = fx(x) fy(y)
  std::function<double(double)> fx, fy;
  double scale = 1.0;

  bool separable() const { return static_cast<bool>(fx) && static_cast<bool>(fy); }
  double operator()(double x, double y) const { return F(x, y); }
};

// smooth plateau ramp: equals 1 on [2,N/2] as a function of x, supported in (1,N)
TestFunction ramp_test_function(double N);
// the ramp multiplied by smooth indicators of |log(x/y)| <= delta log Q and
// of xy <= cap (cap in absolute units)
TestFunction localized_test_function(double N, double Q, double delta, double xy_cap);

// Mellin transform F^(iu, iv) = int int F(x,y) x^{iu-1} y^{iv-1} dx dy
cdouble mellin_F(const TestFunction& F, double u, double v, const QuadOptions& opts = {});

// L1 mass of the Mellin transform on the imaginary axes:
// (2 pi)^{-2} int int |F^(iu,iv)| du dv, slightly overestimated by an
// analytic tail bound so the result stays a true upper bound.
double mellin_l1_bound(const TestFunction& F);

// Rapidly decaying weight on (0,inf)^2 for the factored-shape main term.
struct SpecialTestFunction {
  std::function<double(double, double)> G;
  double decay_c = 2.0;
  double decay_A = 1.0;
  double operator()(double x, double y) const { return G(x, y); }
};

// exp(-(log x)^2 - y)
SpecialTestFunction gauss_log_special();

}  // namespace charsieve
