#include "charsieve/sieve_checks.hpp"

#include <algorithm>
#include <cmath>

#include "charsieve/accum.hpp"
#include "charsieve/quadrature.hpp"
#include "charsieve/weights.hpp"

namespace charsieve {

namespace {

double l2_mass(const std::vector<cdouble>& a) {
  KahanSum s;
  for (const auto& z : a) s.add(std::norm(z));
  return s.value();
}

// |sum over window of a_n chi(n)|^2 summed over primitive chi mod q,
// weighted by w(q); indices run n = base+1 .. base+len with a[i] at base+1+i
double primitive_square_sum(i64 q, const std::vector<cdouble>& a, i64 base, double weight,
                            const Sieve& sieve) {
  if (sieve.phi_star(q) == 0) return 0.0;
  auto G = CharacterGroup::build(q, sieve);
  int r = G->num_factors();
  i64 L = G->exponent();
  const auto& roots = G->roots();
  std::vector<size_t> act;
  std::vector<i64> steps;  // flattened act.size() x r: per-factor index step
  std::vector<cdouble> coef;
  for (size_t i = 0; i < a.size(); ++i) {
    i64 n = base + 1 + static_cast<i64>(i);
    i64 nr = ((n % q) + q) % q;
    if (!G->is_unit(nr) || a[i] == cdouble{0.0, 0.0}) continue;
    const int32_t* row = G->dlog_row(nr);
    for (int j = 0; j < r; ++j) {
      i64 d = G->factor_order(j);
      steps.push_back(static_cast<i64>(row[j]) % d * (L / d) % L);
    }
    coef.push_back(a[i]);
    act.push_back(i);
  }
  if (coef.empty()) return 0.0;
  if (r == 0) {  // q = 1
    KahanCSum s;
    for (const auto& z : coef) s.add(z);
    return weight * std::norm(s.value());
  }
  auto flags = G->primitivity_flags();
  std::vector<i64> e(static_cast<size_t>(r), 0);
  std::vector<i64> idx(coef.size(), 0);
  int bad = 0;
  for (int j = 0; j < r; ++j) bad += flags[static_cast<size_t>(j)][0] ? 0 : 1;
  KahanSum total;
  while (true) {
    if (bad == 0) {
      double sr = 0.0, si = 0.0;
      for (size_t i = 0; i < coef.size(); ++i) {
        const cdouble& z = roots[static_cast<size_t>(idx[i])];
        sr += coef[i].real() * z.real() - coef[i].imag() * z.imag();
        si += coef[i].real() * z.imag() + coef[i].imag() * z.real();
      }
      total.add(sr * sr + si * si);
    }
    int j = r - 1;
    while (j >= 0) {
      auto& ej = e[static_cast<size_t>(j)];
      bad -= flags[static_cast<size_t>(j)][static_cast<size_t>(ej)] ? 0 : 1;
      ej += 1;
      for (size_t i = 0; i < coef.size(); ++i) {
        idx[i] += steps[i * static_cast<size_t>(r) + static_cast<size_t>(j)];
        if (idx[i] >= L) idx[i] -= L;
      }
      if (ej < G->factor_order(j)) {
        bad += flags[static_cast<size_t>(j)][static_cast<size_t>(ej)] ? 0 : 1;
        break;
      }
      ej = 0;
      bad += flags[static_cast<size_t>(j)][0] ? 0 : 1;
      --j;
    }
    if (j < 0) break;
  }
  return weight * total.value();
}

}  // namespace

SieveCheckResult lsi_multiplicative(const std::vector<cdouble>& a, i64 Q, const Sieve& sieve) {
  return lsi_shifted(a, 0, Q, sieve);
}

SieveCheckResult lsi_shifted(const std::vector<cdouble>& a, i64 M, i64 Q, const Sieve& sieve) {
  SieveCheckResult res;
  res.N = static_cast<i64>(a.size());
  res.Q = Q;
  res.M = M;
  KahanSum lhs;
  for (i64 q = 1; q <= Q; ++q) {
    double w = static_cast<double>(q) / static_cast<double>(sieve.euler_phi(q));
    lhs.add(primitive_square_sum(q, a, M, w, sieve));
  }
  res.lhs = lhs.value();
  res.rhs = (static_cast<double>(Q) * Q + static_cast<double>(res.N)) * l2_mass(a);
  res.ratio = res.rhs > 0.0 ? res.lhs / res.rhs : 0.0;
  return res;
}

SieveCheckResult lsi_additive(const std::vector<cdouble>& a, i64 Q, const Sieve& sieve) {
  SieveCheckResult res;
  res.N = static_cast<i64>(a.size());
  res.Q = Q;
  KahanSum lhs;
  for (i64 q = 1; q <= Q; ++q) {
    // e(an/q) table
    std::vector<cdouble> roots(static_cast<size_t>(q));
    for (i64 j = 0; j < q; ++j) {
      double t = kTwoPi * static_cast<double>(j) / static_cast<double>(q);
      roots[static_cast<size_t>(j)] = {std::cos(t), std::sin(t)};
    }
    for (i64 r = (q == 1 ? 0 : 1); r < std::max<i64>(q, 1); ++r) {
      if (q > 1 && igcd(r, q) != 1) continue;
      KahanCSum s;
      for (size_t i = 0; i < a.size(); ++i) {
        i64 n = static_cast<i64>(i) + 1;
        s.add(a[i] * roots[static_cast<size_t>(r * n % q)]);
      }
      lhs.add(std::norm(s.value()));
      if (q == 1) break;
    }
  }
  res.lhs = lhs.value();
  res.rhs = (static_cast<double>(Q) * Q + static_cast<double>(res.N)) * l2_mass(a);
  res.ratio = res.rhs > 0.0 ? res.lhs / res.rhs : 0.0;
  return res;
}

SieveCheckResult lsi_additive_dual(const FareyVector& gamma, i64 N, const Sieve& sieve) {
  SieveCheckResult res;
  res.N = N;
  res.Q = gamma.Q;
  KahanSum lhs, mass;
  for (i64 n = 1; n <= N; ++n) {
    KahanCSum s;
    for (i64 q = 1; q <= gamma.Q; ++q) {
      if (static_cast<size_t>(q) >= gamma.gamma.size()) break;
      const auto& gq = gamma.gamma[static_cast<size_t>(q)];
      size_t idx = 0;
      for (i64 r = (q == 1 ? 0 : 1); r < std::max<i64>(q, 1); ++r) {
        if (q > 1 && igcd(r, q) != 1) continue;
        if (idx >= gq.size()) break;
        double t = kTwoPi * static_cast<double>(r * n % q) / static_cast<double>(q);
        s.add(gq[idx] * cdouble{std::cos(t), std::sin(t)});
        ++idx;
        if (q == 1) break;
      }
    }
    lhs.add(std::norm(s.value()));
  }
  for (const auto& gq : gamma.gamma)
    for (const auto& z : gq) mass.add(std::norm(z));
  res.lhs = lhs.value();
  res.rhs = (static_cast<double>(gamma.Q) * gamma.Q + static_cast<double>(N)) * mass.value();
  res.ratio = res.rhs > 0.0 ? res.lhs / res.rhs : 0.0;
  (void)sieve;
  return res;
}

SieveCheckResult hlsi(const std::vector<cdouble>& a, i64 Q, double T, double quad_tol,
                      const Sieve& sieve) {
  SieveCheckResult res;
  res.N = static_cast<i64>(a.size());
  res.Q = Q;
  res.T = T;
  double mass = l2_mass(a);
  res.rhs = (static_cast<double>(Q) * Q * T + static_cast<double>(res.N)) * mass;
  // precompute log n
  std::vector<double> logs(a.size());
  for (size_t i = 0; i < a.size(); ++i) logs[i] = std::log(static_cast<double>(i + 1));
  // breakpoint hints where the integrand oscillates
  std::vector<double> hints;
  double period = kTwoPi / std::log(std::max(3.0, static_cast<double>(res.N)));
  for (double t = -T + period; t < T; t += period) hints.push_back(t);
  double char_count = 0.0;
  for (i64 q = 1; q <= Q; ++q) char_count += static_cast<double>(sieve.phi_star(q));
  double per_char_tol = quad_tol * std::max(res.rhs, 1.0) / std::max(char_count, 1.0);
  KahanSum lhs;
  for (i64 q = 1; q <= Q; ++q) {
    if (sieve.phi_star(q) == 0) continue;
    auto G = CharacterGroup::build(q, sieve);
    for (const auto& chi : G->primitive_characters()) {
      // chi(n) table over the coefficient window
      std::vector<cdouble> cv(a.size());
      for (size_t i = 0; i < a.size(); ++i) cv[i] = a[i] * chi(static_cast<i64>(i) + 1);
      auto integrand = [&](double t) {
        double sr = 0.0, si = 0.0;
        for (size_t i = 0; i < cv.size(); ++i) {
          if (cv[i] == cdouble{0.0, 0.0}) continue;
          double c = std::cos(t * logs[i]), s = std::sin(t * logs[i]);
          sr += cv[i].real() * c - cv[i].imag() * s;
          si += cv[i].real() * s + cv[i].imag() * c;
        }
        return sr * sr + si * si;
      };
      lhs.add(integrate_split(integrand, -T, T, hints, QuadOptions{per_char_tol, 1e-9, 40}));
    }
  }
  res.lhs = lhs.value();
  res.ratio = res.rhs > 0.0 ? res.lhs / res.rhs : 0.0;
  return res;
}

SieveCheckResult bilinear_bound_check(const BilinearConfig& cfg, double L_mass,
                                      const Sieve& sieve) {
  SieveCheckResult res;
  i64 N = std::max(cfg.A.N, cfg.B.N);
  i64 Q = static_cast<i64>(cfg.dp.Q);
  res.N = N;
  res.Q = Q;
  if (L_mass <= 0.0) L_mass = mellin_l1_bound(cfg.F);
  // sharp modulus cut q <= Q, no smooth weight
  KahanCSum form;
  for (i64 q = 1; q <= Q; ++q) {
    if (sieve.phi_star(q) == 0) continue;
    auto G = CharacterGroup::build(q, sieve);
    for (const auto& chi : G->primitive_characters()) {
      KahanCSum sm, sn;
      for (i64 m = 1; m <= N; ++m) {
        double am = cfg.A.at(m);
        if (am != 0.0 && cfg.F.separable())
          sm.add(am * cfg.F.fx(static_cast<double>(m)) * chi(m));
      }
      for (i64 n = 1; n <= N; ++n) {
        double bn = cfg.B.at(n);
        if (bn != 0.0 && cfg.F.separable())
          sn.add(bn * cfg.F.fy(static_cast<double>(n)) * chi(n));
      }
      form.add(sm.value() * std::conj(sn.value()));
    }
  }
  res.lhs = std::abs(form.value());
  double na = 0.0, nb = 0.0;
  for (i64 m = 1; m <= cfg.A.N; ++m) na += cfg.A.at(m) * cfg.A.at(m);
  for (i64 n = 1; n <= cfg.B.N; ++n) nb += cfg.B.at(n) * cfg.B.at(n);
  double q2 = static_cast<double>(Q) * Q;
  res.rhs = L_mass * std::sqrt(q2 + static_cast<double>(N)) *
            std::sqrt(q2 + static_cast<double>(N)) * std::sqrt(na) * std::sqrt(nb);
  res.ratio = res.rhs > 0.0 ? res.lhs / res.rhs : 0.0;
  return res;
}

}  // namespace charsieve
