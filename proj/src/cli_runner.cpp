#include "charsieve/cli_runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "charsieve/bilinear.hpp"
#include "charsieve/delta.hpp"
#include "charsieve/io.hpp"
#include "charsieve/parallel.hpp"
#include "charsieve/rng.hpp"
#include "charsieve/sieve_checks.hpp"

namespace charsieve {

namespace {

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::string opt_field(const std::optional<double>& v) { return v ? fmt17(*v) : "na"; }

}  // namespace

int run_identities(const ExperimentConfig& cfg, std::ostream& log) {
  if (!cfg.identities) {
    log << "error: config has no [identities] section\n";
    return kExitConfig;
  }
  const auto& ic = *cfg.identities;
  const Sieve& sieve = default_sieve();
  std::string csv =
      "Q,C,m,n,delta,delta_prime,delta_double_prime,residual_split,residual_cancel,"
      "residual_em,residual_recon_dd,residual_recon_p,pass\n";
  bool violated = false;
  SmoothCutoff psi;
  try {
    psi = cutoff_by_name(ic.cutoff);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  for (double Q : ic.grid) {
    double C = ic.C > 0.0 ? ic.C : std::pow(Q, 0.25);
    std::optional<DeltaParams> params;
    try {
      params.emplace(Q, C, psi);
    } catch (const std::exception& e) {
      log << "error: empty family for Q = " << Q << ": " << e.what() << "\n";
      return kExitConfig;
    }
    DeltaEvaluator ev(*params, sieve);
    double scale = ev.delta11();
    Rng rng(ic.seed);
    std::vector<std::pair<i64, i64>> pairs;
    for (int i = 0; i < ic.pairs; ++i)
      pairs.push_back({rng.one_to(ic.max_mn), rng.one_to(ic.max_mn)});
    for (const auto& [m, n] : pairs) {
      DeltaReport r = ev.report(m, n);
      double tol_split = ic.tol_exact * std::max(1.0, scale);
      bool pass = r.residual_split <= tol_split;
      if (r.residual_cancel) pass = pass && *r.residual_cancel <= tol_split;
      if (r.residual_recon_dd) pass = pass && *r.residual_recon_dd <= ic.tol_quad;
      if (r.residual_recon_p) pass = pass && *r.residual_recon_p <= ic.tol_quad;
      if (r.residual_em) pass = pass && *r.residual_em <= ic.tol_quad;
      violated = violated || !pass;
      csv += fmt_g(Q) + "," + fmt_g(C) + "," + std::to_string(m) + "," + std::to_string(n) +
             "," + fmt17(r.delta) + "," + fmt17(r.delta_prime) + "," +
             fmt17(r.delta_double_prime) + "," + fmt17(r.residual_split) + "," +
             opt_field(r.residual_cancel) + "," + opt_field(r.residual_em) + "," +
             opt_field(r.residual_recon_dd) + "," + opt_field(r.residual_recon_p) + "," +
             (pass ? "1" : "0") + "\n";
    }
  }
  // exact rational identity suites
  std::string lemma_csv = "lemma,l_or_u,a,s,m,n,ok\n";
  Rng rng(ic.seed + 1);
  for (i64 l = 1; l <= ic.lemma_cases; ++l) {
    i64 a, s;
    do {
      a = rng.one_to(100);
      s = rng.one_to(100);
    } while (igcd(a, s) != 1);
    bool ok = mobius_switch_check(l, a, s, sieve);
    violated = violated || !ok;
    lemma_csv += "divisor_switch," + std::to_string(l) + "," + std::to_string(a) + "," +
                 std::to_string(s) + ",,," + std::string(ok ? "1" : "0") + "\n";
  }
  for (i64 u = 1; u <= ic.lemma_cases; ++u) {
    if (!sieve.is_squarefree(u)) continue;
    i64 m = rng.one_to(100), n = rng.one_to(100);
    bool ok = gcd_expansion_check(u, m, n, sieve);
    violated = violated || !ok;
    lemma_csv += "gcd_expansion," + std::to_string(u) + ",,," + std::to_string(m) + "," +
                 std::to_string(n) + "," + std::string(ok ? "1" : "0") + "\n";
  }
  write_text_file(out_path(cfg, "identities_delta.csv"), csv);
  write_text_file(out_path(cfg, "identities_lemmas.csv"), lemma_csv);
  log << (violated ? "identities: residual violation\n" : "identities: all cases passed\n");
  return violated ? kExitResidual : kExitOk;
}

int run_asymptotics(const ExperimentConfig& cfg, std::ostream& log) {
  if (!cfg.asymptotics) {
    log << "error: config has no [asymptotics] section\n";
    return kExitConfig;
  }
  ExperimentTable table;
  try {
    table = run_experiment(*cfg.asymptotics, cfg.workers);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  table.config_echo = cfg.serialize();
  table.config_hash = cfg.hash();
  std::string csv = "Q,S,S_diag,main_term,abs_err,norm_err\n";
  for (const auto& r : table.rows) {
    csv += fmt17(r.Q) + "," + fmt17(r.S) + "," + fmt17(r.S_diag) + "," + fmt17(r.main_term) +
           "," + fmt17(r.abs_err) + "," + fmt17(r.norm_err) + "\n";
  }
  JsonWriter jw;
  jw.begin_object();
  jw.field("regime", table.regime);
  jw.field("method", table.method);
  jw.field("reduction", table.reduction);
  jw.field("seed", table.seed);
  jw.field("workers", static_cast<i64>(table.workers));
  jw.field("config_hash", table.config_hash);
  jw.field("config", table.config_echo);
  jw.begin_array("rows");
  for (const auto& r : table.rows) {
    jw.element_object();
    jw.field("Q", r.Q);
    jw.field("S", r.S);
    jw.field("S_diag", r.S_diag);
    jw.field("main_term", r.main_term);
    jw.field("abs_err", r.abs_err);
    jw.field("norm_err", r.norm_err);
    jw.end_object();
  }
  jw.end_array();
  jw.end_object();
  write_text_file(out_path(cfg, "asymptotics.csv"), csv);
  write_text_file(out_path(cfg, "asymptotics.json"), jw.str() + "\n");
  DecaySummary d = table.decay();
  log << "rows: " << table.rows.size() << "\n";
  for (const auto& r : table.rows)
    log << "  Q = " << r.Q << "  norm_err = " << fmt_g(r.norm_err) << "  (" << fmt_g(r.wall_time)
        << " s)\n";
  log << "decay: first = " << fmt_g(d.first_norm_err) << ", last = " << fmt_g(d.last_norm_err)
      << ", ratio = " << fmt_g(d.ratio) << "\n";
  return kExitOk;
}

namespace {

std::vector<cdouble> make_trial_vector(Rng& rng, i64 N, i64 Q, int kind,
                                       std::string& kind_name, const Sieve& sieve) {
  std::vector<cdouble> a(static_cast<size_t>(N));
  switch (kind % 4) {
    case 0: {
      kind_name = "gaussian";
      for (auto& z : a) z = rng.cgaussian();
      break;
    }
    case 1: {
      kind_name = "spike";
      a[static_cast<size_t>(rng.one_to(N) - 1)] = {1.0, 0.0};
      break;
    }
    case 2: {
      kind_name = "mobius";
      for (i64 n = 1; n <= N; ++n)
        a[static_cast<size_t>(n - 1)] = {static_cast<double>(sieve.mobius(n)), 0.0};
      break;
    }
    default: {
      kind_name = "character";
      i64 q = 3 + rng.one_to(std::max<i64>(2, Q - 3));
      auto prims = CharacterGroup::build(q, sieve)->primitive_characters();
      if (prims.empty()) {
        for (auto& z : a) z = rng.cgaussian();
        kind_name = "gaussian";
      } else {
        const auto& chi = prims[static_cast<size_t>(rng.one_to(static_cast<i64>(prims.size())) - 1)];
        for (i64 n = 1; n <= N; ++n) a[static_cast<size_t>(n - 1)] = chi(n);
      }
      break;
    }
  }
  return a;
}

struct SuiteStats {
  double min_ratio = 1e300, max_ratio = -1e300, sum = 0.0;
  std::vector<double> ratios;
  u64 argmax_seed = 0;
  void add(double r, u64 seed) {
    ratios.push_back(r);
    if (r > max_ratio) {
      max_ratio = r;
      argmax_seed = seed;
    }
    min_ratio = std::min(min_ratio, r);
  }
  double median() {
    if (ratios.empty()) return 0.0;
    std::vector<double> v = ratios;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  }
};

}  // namespace

int run_sieve(const ExperimentConfig& cfg, std::ostream& log) {
  if (!cfg.sieve) {
    log << "error: config has no [sieve] section\n";
    return kExitConfig;
  }
  const auto& sc = *cfg.sieve;
  const Sieve& sieve = default_sieve();
  std::string csv = "suite,trials,N,Q,M,T,min_ratio,median_ratio,max_ratio,argmax_seed,pass\n";
  bool violated = false;
  const double tol = 1.0 + 1e-9;
  for (const std::string& suite : sc.suites) {
    SuiteStats stats;
    for (int t = 0; t < sc.trials; ++t) {
      u64 trial_seed = sc.seed + static_cast<u64>(t);
      Rng rng(trial_seed);
      std::string kind;
      SieveCheckResult r;
      if (suite == "multiplicative") {
        auto a = make_trial_vector(rng, sc.N, sc.Q, t, kind, sieve);
        r = lsi_multiplicative(a, sc.Q, sieve);
      } else if (suite == "shifted") {
        auto a = make_trial_vector(rng, sc.N, sc.Q, t, kind, sieve);
        r = lsi_shifted(a, sc.M, sc.Q, sieve);
      } else if (suite == "additive") {
        auto a = make_trial_vector(rng, sc.N, sc.Q, t, kind, sieve);
        r = lsi_additive(a, sc.Q, sieve);
      } else if (suite == "additive_dual") {
        FareyVector g;
        g.Q = sc.Q;
        g.gamma.resize(static_cast<size_t>(sc.Q + 1));
        for (i64 q = 1; q <= sc.Q; ++q) {
          i64 cnt = q == 1 ? 1 : sieve.euler_phi(q);
          auto& gq = g.gamma[static_cast<size_t>(q)];
          gq.resize(static_cast<size_t>(cnt));
          for (auto& z : gq) z = rng.cgaussian();
        }
        if (t % 4 == 1) {  // spike at a single fraction
          for (auto& gq : g.gamma) std::fill(gq.begin(), gq.end(), cdouble{0.0, 0.0});
          g.gamma[2][0] = {1.0, 0.0};  // the fraction 1/2
        }
        r = lsi_additive_dual(g, sc.N, sieve);
      } else if (suite == "hybrid") {
        auto a = make_trial_vector(rng, sc.N, sc.Q, t, kind, sieve);
        r = hlsi(a, sc.Q, sc.T, 1e-6, sieve);
      } else if (suite == "bilinear") {
        if (t >= std::min(sc.trials, 5)) continue;  // expensive; a few trials suffice
        double Q = static_cast<double>(sc.Q);
        i64 N = std::max<i64>(8, sc.N / 2);
        auto F = ramp_test_function(static_cast<double>(N));
        std::vector<double> av(static_cast<size_t>(N + 1), 0.0);
        std::vector<double> bv(static_cast<size_t>(N + 1), 0.0);
        for (i64 i = 1; i <= N; ++i) {
          av[static_cast<size_t>(i)] = rng.gaussian() / std::sqrt(static_cast<double>(i));
          bv[static_cast<size_t>(i)] = rng.gaussian() / std::sqrt(static_cast<double>(i));
        }
        BilinearConfig bc{DeltaParams(Q, std::pow(Q, 0.25)), F, free_sequence(av),
                          free_sequence(bv), true};
        r = bilinear_bound_check(bc, -1.0, sieve);
      } else {
        log << "error: unknown suite '" << suite << "'\n";
        return kExitConfig;
      }
      r.seed = trial_seed;
      stats.add(r.ratio, trial_seed);
      if (r.ratio > tol) violated = true;
    }
    if (stats.ratios.empty()) stats.min_ratio = stats.max_ratio = 0.0;
    bool pass = stats.max_ratio <= tol;
    csv += suite + "," + std::to_string(stats.ratios.size()) + "," + std::to_string(sc.N) + "," +
           std::to_string(sc.Q) + "," + std::to_string(sc.M) + "," + fmt_g(sc.T) + "," +
           fmt17(stats.min_ratio) + "," + fmt17(stats.median()) + "," + fmt17(stats.max_ratio) +
           "," + std::to_string(stats.argmax_seed) + "," + (pass ? "1" : "0") + "\n";
    log << "suite " << suite << ": max ratio " << fmt_g(stats.max_ratio) << "\n";
  }
  write_text_file(out_path(cfg, "sieve_report.csv"), csv);
  return violated ? kExitResidual : kExitOk;
}

}  // namespace charsieve
