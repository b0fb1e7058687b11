#include "charsieve/coeffs.hpp"

#include <algorithm>
#include <cmath>

#include "charsieve/accum.hpp"

namespace charsieve {

LCoefficients zeta_power(int g, const Sieve& sieve) {
  if (g < 1 || g > 3) throw std::invalid_argument("zeta_power: degree must be 1, 2 or 3");
  return {g, true, &sieve};
}

MollifierCoefficients mollifier_mu_w(i64 X, const Sieve& sieve) {
  double lx = std::log(static_cast<double>(X));
  return mollifier_mu_w(
      X,
      [X, lx](double r) {
        if (r < 1.0 || r > static_cast<double>(X) || lx <= 0.0) return (r == 1.0) ? 1.0 : 0.0;
        return std::log(static_cast<double>(X) / r) / lx;
      },
      sieve);
}

MollifierCoefficients mollifier_mu_w(i64 X, const std::function<double(double)>& w,
                                     const Sieve& sieve) {
  if (X < 1) throw std::invalid_argument("mollifier support must be nonempty");
  MollifierCoefficients out;
  out.r_lo = 1;
  out.r_hi = X;
  out.bound_exponent = 0.0;  // |mu(r) w(r)| <= 1
  out.kind = "mu_w";
  out.rho.assign(static_cast<size_t>(X + 1), 0.0);
  for (i64 r = 1; r <= X; ++r)
    out.rho[static_cast<size_t>(r)] =
        static_cast<double>(sieve.mobius(r)) * w(static_cast<double>(r));
  return out;
}

MollifierCoefficients mollifier_mu_w_dyadic(i64 XA, const Sieve& sieve) {
  if (XA < 1) throw std::invalid_argument("mollifier support must be nonempty");
  MollifierCoefficients out;
  out.r_lo = XA;
  out.r_hi = 2 * XA;
  out.bound_exponent = 0.0;
  out.kind = "mu_w_dyadic";
  out.rho.assign(static_cast<size_t>(2 * XA + 1), 0.0);
  double a = static_cast<double>(XA), b = 2.0 * a;
  for (i64 r = XA; r <= 2 * XA; ++r) {
    double x = static_cast<double>(r);
    double u = (x - a) * (b - x);
    double bump = (XA == 1 && r == 1) ? 1.0
                  : (u <= 0.0)        ? 0.0
                                      : std::exp(4.0 / ((b - a) * (b - a)) - 1.0 / u);
    out.rho[static_cast<size_t>(r)] = static_cast<double>(sieve.mobius(r)) * bump;
  }
  return out;
}

MollifierCoefficients mollifier_delta_at_one() {
  MollifierCoefficients out;
  out.r_lo = out.r_hi = 1;
  out.bound_exponent = 0.0;
  out.kind = "delta_at_one";
  out.rho = {0.0, 1.0};
  return out;
}

MollifierCoefficients mollifier_all_ones(i64 X) {
  MollifierCoefficients out;
  out.r_lo = 1;
  out.r_hi = X;
  out.bound_exponent = 0.0;
  out.kind = "all_ones";
  out.rho.assign(static_cast<size_t>(X + 1), 1.0);
  out.rho[0] = 0.0;
  return out;
}

CoefficientSequence build_sequence_general(const std::function<double(i64)>& lambda,
                                           const MollifierCoefficients& rho, i64 N) {
  if (N < 2) throw std::invalid_argument("build_sequence: N must be >= 2");
  CoefficientSequence seq;
  seq.N = N;
  seq.a.assign(static_cast<size_t>(N + 1), 0.0);
  for (i64 r = rho.r_lo; r <= std::min(rho.r_hi, N); ++r) {
    double rv = rho.at(r);
    if (rv == 0.0) continue;
    for (i64 m = r, l = 1; m <= N; m += r, ++l)
      seq.a[static_cast<size_t>(m)] += lambda(l) * rv;
  }
  for (i64 m = 1; m <= N; ++m)
    seq.a[static_cast<size_t>(m)] /= std::sqrt(static_cast<double>(m));
  return seq;
}

CoefficientSequence build_sequence(const LCoefficients& L, const MollifierCoefficients& rho,
                                   i64 N) {
  auto seq = build_sequence_general(
      [&L](i64 l) { return static_cast<double>(L.lambda(l)); }, rho, N);
  seq.provenance = "zeta^" + std::to_string(L.g) + " * " + rho.kind;
  return seq;
}

CoefficientSequence free_sequence(std::vector<double> values) {
  CoefficientSequence seq;
  seq.N = static_cast<i64>(values.size()) - 1;
  seq.a = std::move(values);
  seq.provenance = "free";
  return seq;
}

CancellationReport cancellation_check(const MollifierCoefficients& rho, i64 d, double y,
                                      double C_exp, const Sieve& sieve) {
  if (d < 1) throw std::invalid_argument("cancellation_check: d must be positive");
  CancellationReport rep;
  KahanSum partial;
  i64 r = 1;
  double tau_d = static_cast<double>(sieve.divisor_power(d, 2));
  auto ratio_at = [&](double yy, double sum_abs) {
    double ly = std::log(std::max(2.0, yy));
    return sum_abs * std::pow(ly, C_exp) / (tau_d * yy);
  };
  double base_ratio = -1.0;
  for (double yy = 2.0; yy <= y; yy *= 1.25) {
    for (; r <= static_cast<i64>(yy); ++r) partial.add(rho.at(d * r));
    double ratio = ratio_at(yy, std::abs(partial.value()));
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (base_ratio < 0.0) {
      base_ratio = ratio;
      rep.ratio_at_base = ratio;
    }
    rep.ratio_at_top = ratio;
  }
  for (; r <= static_cast<i64>(y); ++r) partial.add(rho.at(d * r));
  double ratio = ratio_at(y, std::abs(partial.value()));
  rep.max_ratio = std::max(rep.max_ratio, ratio);
  rep.ratio_at_top = ratio;
  rep.flagged = rep.ratio_at_top > 1.5 * std::max(rep.ratio_at_base, 1e-12);
  return rep;
}

cdouble dirichlet_polynomial_Ad(const CoefficientSequence& seq, i64 d,
                                const DirichletCharacter& chi, cdouble s) {
  if (d < 1) throw std::invalid_argument("dirichlet_polynomial_Ad: d must be positive");
  KahanCSum acc;
  for (i64 m = d; m <= seq.N; m += d) {
    double am = seq.at(m);
    if (am == 0.0) continue;
    cdouble cv = chi(m / d);
    if (cv == cdouble{0.0, 0.0}) continue;
    cdouble w = std::exp((0.5 - s) * std::log(static_cast<double>(m)));
    acc.add(am * cv * w);
  }
  return acc.value();
}

EulerFactorReport euler_factor_check(const LCoefficients& L, i64 delta,
                                     const DirichletCharacter* chi, i64 L_trunc) {
  if (delta < 1 || L_trunc < 1) throw std::invalid_argument("euler_factor_check: bad input");
  const Sieve& sieve = *L.sieve;
  if (L.lambda(1) != 1) throw std::domain_error("leading coefficient must be 1");
  // untwisted formal division in exact integers; the chi-twist multiplies
  // coefficient j by chi(j) because chi is completely multiplicative
  std::vector<i64> c(static_cast<size_t>(L_trunc + 1), 0);
  for (i64 n = 1; n <= L_trunc; ++n) {
    i64 v = L.lambda(delta * n);
    for (i64 dd : sieve.divisors(n)) {
      if (dd == 1) continue;
      v -= L.lambda(dd) * c[static_cast<size_t>(n / dd)];
    }
    c[static_cast<size_t>(n)] = v;
  }
  EulerFactorReport rep;
  rep.supported_ok = true;
  i64 drad = sieve.radical(delta);
  for (i64 j = 1; j <= L_trunc; ++j) {
    if (c[static_cast<size_t>(j)] == 0) continue;
    rep.quotient.push_back({j, c[static_cast<size_t>(j)]});
    // every prime of j must divide delta
    for (const auto& pe : sieve.factor(j).factors) {
      if (drad % pe.p != 0) {
        rep.supported_ok = false;
        break;
      }
    }
  }
  i64 tau_d = sieve.divisor_power(delta, 2);
  rep.tau_delta_2g = std::pow(static_cast<double>(tau_d), 2.0 * L.g);
  // sample |P(it, chi)| on the imaginary axis
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    KahanCSum acc;
    for (const auto& [j, pj] : rep.quotient) {
      cdouble cv = chi ? (*chi)(j) : cdouble{1.0, 0.0};
      if (cv == cdouble{0.0, 0.0}) continue;
      double lj = std::log(static_cast<double>(j));
      acc.add(static_cast<double>(pj) * cv * cdouble{std::cos(t * lj), -std::sin(t * lj)});
    }
    rep.max_abs_on_line = std::max(rep.max_abs_on_line, std::abs(acc.value()));
  }
  return rep;
}

}  // namespace charsieve
