#include "charsieve/bilinear.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "charsieve/accum.hpp"
#include "charsieve/parallel.hpp"

namespace charsieve {

namespace {

struct CSumPair {
  double re = 0.0, im = 0.0;
  CSumPair operator+(const CSumPair& o) const { return {re + o.re, im + o.im}; }
};

// characters route, per modulus: sum over primitive chi of
// (sum_m a_m fx(m) chi(m)) * conj(sum_n b_n fy(n) chi(n)) for product weights,
// or the full per-character double sum otherwise
CSumPair s_full_char_block(const BilinearConfig& cfg, DeltaEvaluator& ev, i64 q_lo_idx,
                           i64 q_hi_idx, const std::vector<std::pair<i64, double>>& qw) {
  const Sieve& sieve = ev.sieve();
  i64 N = std::max(cfg.A.N, cfg.B.N);
  KahanSum accr, acci;
  for (i64 iq = q_lo_idx; iq < q_hi_idx; ++iq) {
    i64 q = qw[static_cast<size_t>(iq)].first;
    double wq = qw[static_cast<size_t>(iq)].second;
    if (sieve.phi_star(q) == 0) continue;
    auto G = CharacterGroup::build(q, sieve);
    int r = G->num_factors();
    i64 L = G->exponent();
    const auto& roots = G->roots();

    // dlog rows for every index with a nonzero coefficient and gcd(.,q)=1
    std::vector<i64> units;
    std::vector<const int32_t*> rows;
    std::vector<double> am, bn, fxv, fyv;
    units.reserve(static_cast<size_t>(N));
    for (i64 m = 1; m <= N; ++m) {
      if (igcd(m % q == 0 ? q : m % q, q) != 1) continue;
      units.push_back(m);
      rows.push_back(G->dlog_row(m % q));
      am.push_back(cfg.A.at(m));
      bn.push_back(cfg.B.at(m));
      if (cfg.F.separable()) {
        fxv.push_back(cfg.F.fx(static_cast<double>(m)));
        fyv.push_back(cfg.F.fy(static_cast<double>(m)));
      }
    }
    if (units.empty()) continue;

    if (r == 0) {
      if (!G->admits_primitive()) continue;
      // q = 1: single trivial character
      double sa = 0.0, sb = 0.0;
      if (cfg.F.separable()) {
        for (size_t i = 0; i < units.size(); ++i) {
          sa += am[i] * fxv[i];
          sb += bn[i] * fyv[i];
        }
        accr.add(wq * sa * sb);
      } else {
        double tot = 0.0;
        for (size_t i = 0; i < units.size(); ++i)
          for (size_t j = 0; j < units.size(); ++j)
            tot += am[i] * bn[j] * cfg.F(static_cast<double>(units[i]), static_cast<double>(units[j]));
        accr.add(wq * tot);
      }
      continue;
    }

    auto flags = G->primitivity_flags();
    std::vector<i64> e(static_cast<size_t>(r), 0);
    int bad = 0;
    for (int j = 0; j < r; ++j) bad += flags[static_cast<size_t>(j)][0] ? 0 : 1;
    // per-unit angle index, updated incrementally with the odometer
    std::vector<i64> idx(units.size(), 0);
    std::vector<std::vector<i64>> step(static_cast<size_t>(r), std::vector<i64>(units.size()));
    for (int j = 0; j < r; ++j) {
      i64 d = G->factor_order(j);
      for (size_t i = 0; i < units.size(); ++i)
        step[static_cast<size_t>(j)][i] = static_cast<i64>(rows[i][j]) % d * (L / d) % L;
    }
    double qre = 0.0, qim = 0.0;
    while (true) {
      if (bad == 0) {
        if (cfg.F.separable()) {
          double sar = 0.0, sai = 0.0, sbr = 0.0, sbi = 0.0;
          for (size_t i = 0; i < units.size(); ++i) {
            const cdouble& z = roots[static_cast<size_t>(idx[i])];
            double ca = am[i] * fxv[i];
            double cb = bn[i] * fyv[i];
            sar += ca * z.real();
            sai += ca * z.imag();
            sbr += cb * z.real();
            sbi += cb * z.imag();
          }
          // A_chi * conj(B_chi)
          qre += sar * sbr + sai * sbi;
          qim += sai * sbr - sar * sbi;
        } else {
          for (size_t i = 0; i < units.size(); ++i) {
            for (size_t j = 0; j < units.size(); ++j) {
              double fv = cfg.F(static_cast<double>(units[i]), static_cast<double>(units[j]));
              if (fv == 0.0) continue;
              i64 rel = idx[i] - idx[j];
              if (rel < 0) rel += L;
              const cdouble& z = roots[static_cast<size_t>(rel)];
              qre += am[i] * bn[j] * fv * z.real();
              qim += am[i] * bn[j] * fv * z.imag();
            }
          }
        }
      }
      int j = r - 1;
      while (j >= 0) {
        auto& ej = e[static_cast<size_t>(j)];
        bad -= flags[static_cast<size_t>(j)][static_cast<size_t>(ej)] ? 0 : 1;
        ej += 1;
        auto& st = step[static_cast<size_t>(j)];
        for (size_t i = 0; i < units.size(); ++i) {
          idx[i] += st[i];
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
    accr.add(wq * qre);
    acci.add(wq * qim);
  }
  return {accr.value(), acci.value()};
}

double s_full_kernel_block(const BilinearConfig& cfg, DeltaEvaluator& ev, i64 q_lo_idx,
                           i64 q_hi_idx, const std::vector<std::pair<i64, double>>& qw) {
  const Sieve& sieve = ev.sieve();
  i64 N = std::max(cfg.A.N, cfg.B.N);
  // index caches shared by every modulus in the block
  std::vector<double> fa(static_cast<size_t>(N + 1), 0.0), fb(static_cast<size_t>(N + 1), 0.0);
  for (i64 m = 1; m <= N; ++m) {
    fa[static_cast<size_t>(m)] = cfg.A.at(m);
    fb[static_cast<size_t>(m)] = cfg.B.at(m);
  }
  KahanSum acc;
  for (i64 iq = q_lo_idx; iq < q_hi_idx; ++iq) {
    i64 q = qw[static_cast<size_t>(iq)].first;
    double wq = qw[static_cast<size_t>(iq)].second;
    std::vector<char> cop(static_cast<size_t>(N + 1), 0);
    for (i64 m = 1; m <= N; ++m) cop[static_cast<size_t>(m)] = igcd(m, q) == 1 ? 1 : 0;
    double qsum = 0.0;
    for (i64 d : sieve.divisors(q)) {
      i64 mu = sieve.mobius(q / d);
      if (mu == 0) continue;
      double phi_d = static_cast<double>(sieve.euler_phi(d));
      double dsum = 0.0;
      for (i64 m = 1; m <= N; ++m) {
        if (!cop[static_cast<size_t>(m)] || fa[static_cast<size_t>(m)] == 0.0) continue;
        i64 start = m % d == 0 ? d : m % d;
        for (i64 n = start; n <= N; n += d) {
          if (!cop[static_cast<size_t>(n)] || fb[static_cast<size_t>(n)] == 0.0) continue;
          double fv = cfg.F(static_cast<double>(m), static_cast<double>(n));
          if (fv != 0.0) dsum += fa[static_cast<size_t>(m)] * fb[static_cast<size_t>(n)] * fv;
        }
      }
      qsum += static_cast<double>(mu) * phi_d * dsum;
    }
    acc.add(wq * qsum);
  }
  return acc.value();
}

}  // namespace

double s_full(const BilinearConfig& cfg, DeltaEvaluator& ev, SumMethod method, int workers) {
  // (q, Psi(q/Q)/phi(q)) over the support
  std::vector<std::pair<i64, double>> qw;
  const auto& p = cfg.dp;
  for (i64 q = p.q_min; q <= p.q_max; ++q) {
    double w = p.psi.f(static_cast<double>(q) / p.Q);
    if (w != 0.0) qw.push_back({q, w / static_cast<double>(ev.sieve().euler_phi(q))});
  }
  i64 nq = static_cast<i64>(qw.size());
  if (method == SumMethod::characters) {
    CSumPair total = parallel_chunks<CSumPair>(
        nq, workers, CSumPair{},
        [&](i64 lo, i64 hi) { return s_full_char_block(cfg, ev, lo, hi, qw); },
        [](const CSumPair& a, const CSumPair& b) { return a + b; });
    if (std::abs(total.im) > 1e-10 * std::max(1.0, std::abs(total.re)))
      throw std::runtime_error("s_full: imaginary part above tolerance");
    return total.re;
  }
  return parallel_chunks<double>(
      nq, workers, 0.0,
      [&](i64 lo, i64 hi) { return s_full_kernel_block(cfg, ev, lo, hi, qw); },
      [](double a, double b) { return a + b; });
}

DiagResult s_diag(const BilinearConfig& cfg, DeltaEvaluator& ev, const SingularSeries& ss) {
  i64 N = std::min(cfg.A.N, cfg.B.N);
  KahanSum diag, main;
  const Sieve& sieve = ev.sieve();
  for (i64 m = 1; m <= N; ++m) {
    double c = cfg.A.at(m) * cfg.B.at(m);
    if (c == 0.0) continue;
    double fv = cfg.F(static_cast<double>(m), static_cast<double>(m));
    if (fv == 0.0) continue;
    diag.add(c * fv * ev.delta_diag(m));
    main.add(c * fv * sieve.delta_factor(m));
  }
  DiagResult out{};
  out.s_diag = diag.value();
  out.s_diag_main = cfg.dp.psi.mean * ss.value * cfg.dp.Q * main.value();
  double logN = std::log(std::max(2.0, static_cast<double>(N)));
  out.err_ratio = std::abs(out.s_diag - out.s_diag_main) / (std::sqrt(cfg.dp.Q) * logN * logN);
  return out;
}

BilinearPieces s_pieces(const BilinearConfig& cfg, DeltaEvaluator& ev) {
  i64 N = std::max(cfg.A.N, cfg.B.N);
  KahanSum s1, s2, splus, d2diag;
  std::map<std::pair<i64, i64>, DeltaEvaluator::EmPieces> memo;
  auto pieces_of = [&](i64 m, i64 n) {
    auto key = std::minmax(m, n);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto em = ev.em_pieces(key.first, key.second);
    memo.emplace(key, em);
    return em;
  };
  for (i64 m = 1; m <= N; ++m) {
    double am = cfg.A.at(m);
    if (am == 0.0) continue;
    for (i64 n = 1; n <= N; ++n) {
      double bn = cfg.B.at(n);
      if (bn == 0.0) continue;
      double fv = cfg.F(static_cast<double>(m), static_cast<double>(n));
      if (fv == 0.0) continue;
      double c = am * bn * fv;
      auto em = pieces_of(m, n);
      s2.add(c * em.delta2);
      if (m != n) {
        s1.add(c * em.delta1);
        if (cfg.singular_trivial) splus.add(c * ev.delta_plus(m, n, true));
      } else {
        d2diag.add(c * em.delta2);
      }
    }
  }
  BilinearPieces out{};
  out.s1 = s1.value();
  out.s2 = s2.value();
  out.s_plus = splus.value();
  out.s_star = out.s1 - out.s_plus;
  out.d2_diag = d2diag.value();
  out.s_full_value = s_full(cfg, ev, SumMethod::characters);
  KahanSum diag;
  for (i64 m = 1; m <= std::min(cfg.A.N, cfg.B.N); ++m) {
    double c = cfg.A.at(m) * cfg.B.at(m);
    if (c == 0.0) continue;
    double fv = cfg.F(static_cast<double>(m), static_cast<double>(m));
    if (fv != 0.0) diag.add(c * fv * ev.delta_diag(m));
  }
  out.s_diag_value = diag.value();
  out.recon_residual =
      std::abs(out.s_full_value - out.s_diag_value - out.s1 - out.s2 + out.d2_diag);
  return out;
}

cdouble s_chi(const BilinearConfig& cfg, i64 d1, i64 d2, i64 b, double y,
              const DirichletCharacter& chi) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("s_chi: d1, d2 must be positive");
  KahanCSum acc;
  const auto& psi = cfg.dp.psi;
  for (i64 m = d1; m <= cfg.A.N; m += d1) {
    double am = cfg.A.at(m);
    if (am == 0.0 || igcd(m, b) != 1) continue;
    cdouble cm = chi(m / d1);
    if (cm == cdouble{0.0, 0.0}) continue;
    for (i64 n = d2; n <= cfg.B.N; n += d2) {
      double bn = cfg.B.at(n);
      if (bn == 0.0 || igcd(n, b) != 1) continue;
      double om = psi.omega(std::abs(static_cast<double>(m - n)) / y);
      if (om == 0.0) continue;
      double fv = cfg.F(static_cast<double>(m), static_cast<double>(n));
      if (fv == 0.0) continue;
      cdouble cn = chi(n / d2);
      if (cn == cdouble{0.0, 0.0}) continue;
      acc.add(am * bn * fv * om * cm * std::conj(cn));
    }
  }
  return acc.value();
}

double v_inner(const BilinearConfig& cfg, i64 d1, i64 d2, double y) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("v_inner: d1, d2 must be positive");
  KahanSum acc;
  const auto& psi = cfg.dp.psi;
  for (i64 m = d1; m <= cfg.A.N; m += d1) {
    double am = cfg.A.at(m);
    if (am == 0.0) continue;
    for (i64 n = d2; n <= cfg.B.N; n += d2) {
      double bn = cfg.B.at(n);
      if (bn == 0.0) continue;
      double om = psi.omega(std::abs(static_cast<double>(m - n)) / y);
      if (om == 0.0) continue;
      double fv = cfg.F(static_cast<double>(m), static_cast<double>(n));
      if (fv != 0.0) acc.add(am * bn * fv * om);
    }
  }
  return acc.value();
}

VInnerApprox v_inner_compare(const BilinearConfig& cfg, const MollifierCoefficients& rhoA,
                             const MollifierCoefficients& rhoB, i64 d1, i64 d2, double y) {
  VInnerApprox out{};
  out.exact = v_inner(cfg, d1, d2, y);
  KahanSum sa, sb;
  for (i64 r = rhoA.r_lo; r <= rhoA.r_hi; ++r)
    sa.add(rhoA.at(r) / static_cast<double>(ilcm(r, d1)));
  for (i64 r = rhoB.r_lo; r <= rhoB.r_hi; ++r)
    sb.add(rhoB.at(r) / static_cast<double>(ilcm(r, d2)));
  // int int F(u,v)/sqrt(uv) Omega(|u-v|/y) du dv over the strip |u-v| ~ y
  const auto& psi = cfg.dp.psi;
  double N = cfg.F.N;
  auto inner = [&](double u) {
    auto g = [&](double t) {  // t = u - v
      double v = u - t;
      if (v <= 1.0 || v >= N) return 0.0;
      double om = psi.omega(std::abs(t) / y);
      if (om == 0.0) return 0.0;
      double fv = cfg.F(u, v);
      return fv == 0.0 ? 0.0 : fv * om / std::sqrt(u * v);
    };
    double lo = psi.x_lo * y, hi = psi.x_hi * y;
    QuadOptions o{1e-10, 1e-8, 40};
    return integrate(g, lo, hi, o) + integrate(g, -hi, -lo, o);
  };
  out.approx = sa.value() * sb.value() *
               integrate(inner, 1.0, N, QuadOptions{1e-8, 1e-6, 40});
  out.gap = std::abs(out.exact - out.approx);
  return out;
}

double special_shape_main_term(const SpecialShapeConfig& cfg) {
  const Sieve& sieve = *cfg.sieve;
  SingularSeries ss = singular_series(cfg.prime_cutoff, sieve);
  // integral factor depends only on l1*l2; memoize
  std::map<i64, double> integral;
  auto ifac = [&](i64 l1l2) {
    auto it = integral.find(l1l2);
    if (it != integral.end()) return it->second;
    double v = integrate(
        [&](double t) {
          double psi_v = cfg.psi.f(t);
          if (psi_v == 0.0) return 0.0;
          double yy = static_cast<double>(l1l2) / std::pow(t * cfg.Q, cfg.g);
          return psi_v * cfg.G(1.0, yy);
        },
        cfg.psi.x_lo, cfg.psi.x_hi, QuadOptions{1e-12, 1e-10, 48});
    integral.emplace(l1l2, v);
    return v;
  };
  // G(1, l1 l2 (tQ)^{-g}) is negligible once l1 l2 >> (x_hi Q)^g
  double l1l2_cap = 60.0 * std::pow(cfg.psi.x_hi * cfg.Q, cfg.g);
  i64 m_cap = static_cast<i64>(std::min<double>(
      1e7, static_cast<double>(cfg.rhoA.r_hi) * std::sqrt(l1l2_cap) + 1));
  LCoefficients L = zeta_power(cfg.g, sieve);
  KahanSum acc;
  for (i64 m = 1; m <= m_cap; ++m) {
    // factorizations m = r l with r in the mollifier supports
    std::vector<std::pair<i64, i64>> fa, fb;  // (r, l)
    for (i64 r : sieve.divisors(m)) {
      if (r >= cfg.rhoA.r_lo && r <= cfg.rhoA.r_hi && cfg.rhoA.at(r) != 0.0)
        fa.push_back({r, m / r});
      if (r >= cfg.rhoB.r_lo && r <= cfg.rhoB.r_hi && cfg.rhoB.at(r) != 0.0)
        fb.push_back({r, m / r});
    }
    if (fa.empty() || fb.empty()) continue;
    double dm = sieve.delta_factor(m);
    for (const auto& [r1, l1] : fa) {
      for (const auto& [r2, l2] : fb) {
        if (static_cast<double>(l1) * static_cast<double>(l2) > l1l2_cap) continue;
        double w = cfg.rhoA.at(r1) * cfg.rhoB.at(r2) *
                   static_cast<double>(L.lambda(l1)) * static_cast<double>(L.lambda(l2));
        if (w == 0.0) continue;
        acc.add(w / static_cast<double>(m) * dm * ifac(l1 * l2));
      }
    }
  }
  return ss.value * cfg.Q * acc.value();
}

double special_shape_diag_direct(const SpecialShapeConfig& cfg) {
  const Sieve& sieve = *cfg.sieve;
  i64 q_min = static_cast<i64>(std::floor(cfg.psi.x_lo * cfg.Q)) + 1;
  i64 q_max = static_cast<i64>(std::ceil(cfg.psi.x_hi * cfg.Q)) - 1;
  std::vector<std::pair<i64, double>> qr;
  for (i64 q = q_min; q <= q_max; ++q) {
    double w = cfg.psi.f(static_cast<double>(q) / cfg.Q);
    if (w != 0.0)
      qr.push_back({q, w * static_cast<double>(sieve.phi_star(q)) /
                           static_cast<double>(sieve.euler_phi(q))});
  }
  double l1l2_cap = 60.0 * std::pow(cfg.psi.x_hi * cfg.Q, cfg.g);
  i64 m_cap = static_cast<i64>(std::min<double>(
      1e7, static_cast<double>(cfg.rhoA.r_hi) * std::sqrt(l1l2_cap) + 1));
  LCoefficients L = zeta_power(cfg.g, sieve);
  KahanSum acc;
  std::map<std::pair<i64, i64>, double> qsum_memo;  // keyed on (l1*l2, rad(m))
  for (i64 m = 1; m <= m_cap; ++m) {
    std::vector<std::pair<i64, i64>> fa, fb;
    for (i64 r : sieve.divisors(m)) {
      if (r >= cfg.rhoA.r_lo && r <= cfg.rhoA.r_hi && cfg.rhoA.at(r) != 0.0)
        fa.push_back({r, m / r});
      if (r >= cfg.rhoB.r_lo && r <= cfg.rhoB.r_hi && cfg.rhoB.at(r) != 0.0)
        fb.push_back({r, m / r});
    }
    if (fa.empty() || fb.empty()) continue;
    i64 rad_m = sieve.radical(m);
    for (const auto& [r1, l1] : fa) {
      for (const auto& [r2, l2] : fb) {
        if (static_cast<double>(l1) * static_cast<double>(l2) > l1l2_cap) continue;
        double w = cfg.rhoA.at(r1) * cfg.rhoB.at(r2) *
                   static_cast<double>(L.lambda(l1)) * static_cast<double>(L.lambda(l2));
        if (w == 0.0) continue;
        auto key = std::make_pair(l1 * l2, rad_m);
        auto it = qsum_memo.find(key);
        double qs;
        if (it != qsum_memo.end()) {
          qs = it->second;
        } else {
          KahanSum s;
          for (const auto& [q, ratio] : qr) {
            if (igcd(q, rad_m) != 1) continue;
            double yy = static_cast<double>(l1 * l2) / std::pow(static_cast<double>(q), cfg.g);
            s.add(ratio * cfg.G(1.0, yy));
          }
          qs = s.value();
          qsum_memo.emplace(key, qs);
        }
        acc.add(w / static_cast<double>(m) * qs);
      }
    }
  }
  return acc.value();
}

DecaySummary ExperimentTable::decay() const {
  DecaySummary d;
  if (rows.empty()) return d;
  d.first_norm_err = rows.front().norm_err;
  d.last_norm_err = rows.back().norm_err;
  d.ratio = d.first_norm_err != 0.0 ? d.last_norm_err / d.first_norm_err : 0.0;
  d.last_leq_half_first = d.last_norm_err <= 0.5 * d.first_norm_err;
  return d;
}

RowSetup make_row_config(const AsymptoticsConfig& cfg, double Q, const Sieve& sieve) {
  SmoothCutoff psi = cutoff_by_name(cfg.cutoff);
  double n_exp = cfg.regime == "thm24" ? cfg.n_exponent : (1.0 - cfg.epsilon);
  i64 N = std::max<i64>(4, static_cast<i64>(std::llround(std::pow(Q, n_exp))));
  i64 X = std::max<i64>(1, static_cast<i64>(std::llround(std::pow(Q, cfg.x_rule))));
  MollifierCoefficients rho;
  if (cfg.mollifier == "mu_w") {
    rho = mollifier_mu_w(X, sieve);
  } else if (cfg.mollifier == "mu_w_dyadic") {
    rho = mollifier_mu_w_dyadic(std::max<i64>(1, X / 2), sieve);
  } else if (cfg.mollifier == "delta_at_one") {
    rho = mollifier_delta_at_one();
  } else {
    throw std::invalid_argument("unknown mollifier: " + cfg.mollifier);
  }
  LCoefficients L = zeta_power(cfg.g, sieve);
  CoefficientSequence seq = build_sequence(L, rho, N);
  TestFunction F;
  if (cfg.regime == "thm24" && cfg.localized) {
    double XA = static_cast<double>(std::max<i64>(1, X / 2));
    double cap = XA * XA * std::pow(Q, 2.0 - 2.0 * cfg.delta);
    F = localized_test_function(static_cast<double>(N), Q, cfg.delta, cap);
  } else {
    F = ramp_test_function(static_cast<double>(N));
  }
  double C = std::pow(Q, 0.25);
  RowSetup out{BilinearConfig{DeltaParams(Q, C, psi), std::move(F), seq, seq, true}, N, X};
  return out;
}

ExperimentTable run_experiment(const AsymptoticsConfig& cfg, int workers, const Sieve& sieve) {
  if (cfg.regime != "thm22" && cfg.regime != "thm24" && cfg.regime != "thm25")
    throw std::invalid_argument("unknown regime: " + cfg.regime);
  if (cfg.regime == "thm24" && cfg.n_exponent > 2.0 - cfg.delta)
    throw std::invalid_argument("thm24 requires n_exponent <= 2 - delta");
  std::vector<double> grid = cfg.grid;
  std::sort(grid.begin(), grid.end());
  ExperimentTable table;
  table.regime = cfg.regime;
  table.seed = cfg.seed;
  table.workers = workers;
  table.reduction = reduction_shape(workers);
  SingularSeries ss = singular_series(100000, sieve);
  for (double Q : grid) {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentRow row{};
    row.Q = Q;
    if (cfg.regime == "thm25") {
      SpecialShapeConfig sc{cutoff_by_name(cfg.cutoff), Q, cfg.g, MollifierCoefficients{},
                            MollifierCoefficients{}, gauss_log_special(), 100000, &sieve};
      i64 X = std::max<i64>(1, static_cast<i64>(std::llround(std::pow(Q, cfg.x_rule))));
      sc.rhoA = cfg.mollifier == "delta_at_one" ? mollifier_delta_at_one()
                                                : mollifier_mu_w(X, sieve);
      sc.rhoB = sc.rhoA;
      row.S = special_shape_diag_direct(sc);
      row.S_diag = row.S;
      row.main_term = special_shape_main_term(sc);
      row.abs_err = std::abs(row.S - row.main_term);
      row.norm_err = row.abs_err / std::pow(Q, 0.6);
    } else {
      RowSetup setup = make_row_config(cfg, Q, sieve);
      DeltaEvaluator ev(setup.bc.dp, sieve);
      SumMethod method = SumMethod::characters;
      if (cfg.method == "kernel" || (cfg.method == "auto" && cfg.regime == "thm24"))
        method = SumMethod::kernel;
      table.method = method == SumMethod::kernel ? "kernel" : "characters";
      row.S = s_full(setup.bc, ev, method, workers);
      DiagResult diag = s_diag(setup.bc, ev, ss);
      row.S_diag = diag.s_diag;
      row.main_term = diag.s_diag_main;
      row.abs_err = std::abs(row.S - row.S_diag);
      row.norm_err = row.abs_err / Q;
    }
    row.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    table.rows.push_back(row);
  }
  if (cfg.regime == "thm25") table.method = "direct-diagonal";
  return table;
}

}  // namespace charsieve
