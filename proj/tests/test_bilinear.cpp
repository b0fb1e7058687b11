#include <doctest.h>

#include <cmath>

#include "charsieve/accum.hpp"
#include "charsieve/bilinear.hpp"
#include "charsieve/rng.hpp"

using namespace charsieve;

namespace {

BilinearConfig small_config(double Q, i64 N, i64 X) {
  auto F = ramp_test_function(static_cast<double>(N));
  auto seq = build_sequence(zeta_power(1), mollifier_mu_w(X), N);
  return BilinearConfig{DeltaParams(Q, std::pow(Q, 0.25)), F, seq, seq, true};
}

// independent re-implementation: transposed loop order, plain accumulation,
// character values through the public evaluation API
double s_full_transposed_oracle(const BilinearConfig& cfg) {
  const Sieve& sv = default_sieve();
  cdouble total = 0.0;
  i64 N = std::max(cfg.A.N, cfg.B.N);
  for (i64 n = 1; n <= N; ++n) {
    for (i64 m = 1; m <= N; ++m) {
      double w = cfg.A.at(m) * cfg.B.at(n) * cfg.F(static_cast<double>(m), static_cast<double>(n));
      if (w == 0.0) continue;
      cdouble inner = 0.0;
      for (i64 q = cfg.dp.q_min; q <= cfg.dp.q_max; ++q) {
        double pv = cfg.dp.psi.f(static_cast<double>(q) / cfg.dp.Q);
        if (pv == 0.0) continue;
        cdouble ch = 0.0;
        for (const auto& chi : CharacterGroup::build(q)->primitive_characters())
          ch += chi(m) * std::conj(chi(n));
        inner += pv / static_cast<double>(sv.euler_phi(q)) * ch;
      }
      total += w * inner;
    }
  }
  REQUIRE(std::abs(total.imag()) < 1e-9);
  return total.real();
}

}  // namespace

TEST_CASE("s_full: zero sequences give zero") {
  auto cfg = small_config(40.0, 12, 3);
  for (auto& v : cfg.A.a) v = 0.0;
  DeltaEvaluator ev(cfg.dp);
  CHECK(s_full(cfg, ev) == 0.0);
}

TEST_CASE("s_full equals the transposed-order oracle on a small config") {
  auto cfg = small_config(40.0, 12, 3);
  DeltaEvaluator ev(cfg.dp);
  double fast = s_full(cfg, ev);
  double oracle = s_full_transposed_oracle(cfg);
  CHECK(fast == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("s_full: kernel route equals character route") {
  auto cfg = small_config(50.0, 16, 4);
  DeltaEvaluator ev(cfg.dp);
  double chars = s_full(cfg, ev, SumMethod::characters);
  double kern = s_full(cfg, ev, SumMethod::kernel);
  CHECK(chars == doctest::Approx(kern).epsilon(1e-11));
  // also for a non-separable weight
  auto cfg2 = cfg;
  cfg2.F = localized_test_function(16.0, 50.0, 0.4, 1e6);
  double chars2 = s_full(cfg2, ev, SumMethod::characters);
  double kern2 = s_full(cfg2, ev, SumMethod::kernel);
  CHECK(chars2 == doctest::Approx(kern2).epsilon(1e-11));
}

TEST_CASE("s_full: multithreaded reduction is bit-stable and matches") {
  auto cfg = small_config(60.0, 20, 4);
  DeltaEvaluator ev(cfg.dp);
  double w1 = s_full(cfg, ev, SumMethod::characters, 1);
  double w4a = s_full(cfg, ev, SumMethod::characters, 4);
  double w4b = s_full(cfg, ev, SumMethod::characters, 4);
  CHECK(w4a == w4b);  // bit-stable for a fixed worker count
  CHECK(w1 == doctest::Approx(w4a).epsilon(1e-12));
}

TEST_CASE("reordering identity: s_full equals sum a b F delta(m,n)") {
  auto cfg = small_config(40.0, 12, 3);
  DeltaEvaluator ev(cfg.dp);
  double s = s_full(cfg, ev);
  KahanSum reord;
  for (i64 m = 1; m <= cfg.A.N; ++m) {
    for (i64 n = 1; n <= cfg.B.N; ++n) {
      double w = cfg.A.at(m) * cfg.B.at(n) * cfg.F(static_cast<double>(m), static_cast<double>(n));
      if (w != 0.0) reord.add(w * ev.delta_direct(m, n));
    }
  }
  CHECK(std::abs(s - reord.value()) <= 1e-9 * std::max(1.0, std::abs(s)));
}

TEST_CASE("linearity in A, B and F") {
  auto cfg = small_config(40.0, 12, 3);
  DeltaEvaluator ev(cfg.dp);
  Rng rng(31);
  auto cfg2 = cfg;
  std::vector<double> extra(static_cast<size_t>(cfg.A.N + 1), 0.0);
  for (auto& v : extra) v = rng.gaussian() * 0.1;
  extra[0] = 0.0;
  cfg2.A = free_sequence(extra);
  double s1 = s_full(cfg, ev);
  double s2 = s_full(cfg2, ev);
  auto cfg3 = cfg;
  for (i64 m = 0; m <= cfg.A.N; ++m)
    cfg3.A.a[static_cast<size_t>(m)] = 2.0 * cfg.A.at(m) + 0.5 * cfg2.A.at(m);
  double s3 = s_full(cfg3, ev);
  CHECK(s3 == doctest::Approx(2.0 * s1 + 0.5 * s2).epsilon(1e-10));
}

TEST_CASE("shift reduction: shifted factors with compensated weight match") {
  double Q = 40.0;
  i64 N = 14, X = 3;
  double alpha = 1.0 / std::log(Q);
  auto base = small_config(Q, N, X);
  DeltaEvaluator ev(base.dp);
  double s_base = s_full(base, ev);
  // build with lambda(l) l^{-alpha}, rho(r) r^{-alpha} and weight x^alpha F
  auto rho = mollifier_mu_w(X);
  for (i64 r = rho.r_lo; r <= rho.r_hi; ++r)
    rho.rho[static_cast<size_t>(r)] *= std::pow(static_cast<double>(r), -alpha);
  auto shifted = build_sequence_general(
      [alpha](i64 l) { return std::pow(static_cast<double>(l), -alpha); }, rho, N);
  auto cfg = base;
  cfg.A = shifted;
  auto baseF = base.F;
  cfg.F.fx = nullptr;
  cfg.F.fy = nullptr;
  cfg.F.F = [baseF, alpha](double x, double y) {
    return std::pow(x, alpha) * baseF(x, y);
  };
  double s_shift = s_full(cfg, ev);
  CHECK(std::abs(s_shift - s_base) <= 1e-9 * std::max(1.0, std::abs(s_base)));
}

TEST_CASE("diagonal pieces and the main term") {
  auto cfg = small_config(100.0, 18, 4);
  DeltaEvaluator ev(cfg.dp);
  auto ss = singular_series(100000);
  auto d = s_diag(cfg, ev, ss);
  // direct evaluation
  KahanSum direct;
  for (i64 m = 1; m <= cfg.A.N; ++m) {
    double w = cfg.A.at(m) * cfg.B.at(m) * cfg.F(static_cast<double>(m), static_cast<double>(m));
    if (w != 0.0) direct.add(w * ev.delta_direct(m, m));
  }
  CHECK(d.s_diag == doctest::Approx(direct.value()).epsilon(1e-11));
  CHECK(d.err_ratio < 10.0);
}

TEST_CASE("piece bookkeeping: S - S_diag = S1 + S2 - diagonal remainder") {
  auto cfg = small_config(50.0, 12, 3);
  DeltaEvaluator ev(cfg.dp);
  auto pieces = s_pieces(cfg, ev);
  CHECK(pieces.recon_residual <= 1e-8 * std::max(1.0, ev.delta11()));
  // non-singular declaration: s_plus = 0 and s_star = s1
  auto cfg2 = cfg;
  cfg2.singular_trivial = false;
  auto p2 = s_pieces(cfg2, ev);
  CHECK(p2.s_plus == 0.0);
  CHECK(p2.s_star == doctest::Approx(p2.s1));
}

TEST_CASE("restricted twisted sum s_chi") {
  auto cfg = small_config(40.0, 20, 3);
  // empty when the residue class misses the truncation
  auto triv = CharacterGroup::build(1)->principal();
  CHECK(s_chi(cfg, 25, 1, 1, 4.0, triv) == cdouble{0.0, 0.0});
  // principal character mod 1 with b = 1 reduces to the plain inner sum
  double y = 3.0;
  cdouble withchi = s_chi(cfg, 2, 3, 1, y, triv);
  CHECK(withchi.real() == doctest::Approx(v_inner(cfg, 2, 3, y)).epsilon(1e-12));
  CHECK(std::abs(withchi.imag()) < 1e-14);
  // independent direct summation with a genuine character
  auto prims = CharacterGroup::build(5)->primitive_characters();
  const auto& chi = prims[0];
  KahanCSum direct;
  for (i64 m = 2; m <= cfg.A.N; m += 2) {
    for (i64 n = 3; n <= cfg.B.N; n += 3) {
      double om = cfg.dp.psi.omega(std::abs(static_cast<double>(m - n)) / y);
      double w = cfg.A.at(m) * cfg.B.at(n) *
                 cfg.F(static_cast<double>(m), static_cast<double>(n)) * om;
      if (w != 0.0) direct.add(w * chi(m / 2) * std::conj(chi(n / 3)));
    }
  }
  CHECK(std::abs(s_chi(cfg, 2, 3, 1, y, chi) - direct.value()) < 1e-12);
}

TEST_CASE("v_inner: empty kernel support and the smooth comparison") {
  auto cfg = small_config(40.0, 30, 4);
  // y so large that no |m-n| <= N reaches the kernel support
  CHECK(v_inner(cfg, 1, 1, 500.0) == 0.0);
  double v = v_inner(cfg, 1, 1, 6.0);
  CHECK(v != 0.0);
  auto rho = mollifier_mu_w(4);
  auto cmp = v_inner_compare(cfg, rho, rho, 1, 1, 6.0);
  CHECK(cmp.exact == doctest::Approx(v).epsilon(1e-12));
  CHECK(std::isfinite(cmp.approx));
  CHECK(cmp.gap < std::abs(cmp.exact) + std::abs(cmp.approx) + 1.0);
}

TEST_CASE("factored-shape main term: trivial mollifier collapse") {
  SpecialShapeConfig sc{default_cutoff(), 60.0, 1,          mollifier_delta_at_one(),
                        mollifier_delta_at_one(), gauss_log_special(), 100000,
                        &default_sieve()};
  double main = special_shape_main_term(sc);
  // collapse: S Q sum_l delta(l)/l int Psi(t) G(1, l^2/(tQ)) dt
  const Sieve& sv = default_sieve();
  auto ss = singular_series(100000, sv);
  KahanSum expect;
  for (i64 l = 1; l <= 3000; ++l) {
    double I = integrate(
        [&](double t) {
          double pv = sc.psi.f(t);
          if (pv == 0.0) return 0.0;
          return pv * sc.G(1.0, static_cast<double>(l) * l / (t * sc.Q));
        },
        sc.psi.x_lo, sc.psi.x_hi, tight_quad());
    expect.add(sv.delta_factor(l) / static_cast<double>(l) * I);
  }
  CHECK(main == doctest::Approx(ss.value * sc.Q * expect.value()).epsilon(1e-8));
  // zero weight kills everything
  auto sc0 = sc;
  sc0.G.G = [](double, double) { return 0.0; };
  CHECK(special_shape_main_term(sc0) == 0.0);
}

TEST_CASE("factored-shape: direct diagonal tracks the main term") {
  SpecialShapeConfig sc{default_cutoff(), 100.0, 1, mollifier_mu_w(10), mollifier_mu_w(10),
                        gauss_log_special(), 100000, &default_sieve()};
  double direct = special_shape_diag_direct(sc);
  double main = special_shape_main_term(sc);
  CHECK(std::abs(direct - main) <= 2.0 * std::pow(100.0, 0.6));
}

TEST_CASE("experiment runner basics") {
  AsymptoticsConfig cfg;
  cfg.regime = "thm22";
  cfg.grid = {40.0};
  cfg.epsilon = 0.25;
  auto table = run_experiment(cfg, 1);
  REQUIRE(table.rows.size() == 1);  // one row per grid point
  CHECK(table.rows[0].Q == 40.0);
  CHECK(std::isfinite(table.rows[0].norm_err));
  // unknown regime rejected
  cfg.regime = "bogus";
  CHECK_THROWS_AS(run_experiment(cfg, 1), std::invalid_argument);
}
