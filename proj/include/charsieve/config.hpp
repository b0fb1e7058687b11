#pragma once

#include <optional>
#include <string>
#include <vector>

#include "charsieve/common.hpp"

namespace charsieve {

struct IdentitiesConfig {
  std::vector<double> grid = {50, 100, 200};
  double C = 0.0;  // 0 = auto (Q^{1/4})
  std::string cutoff = "bump";
  int pairs = 50;
  i64 max_mn = 30;
  u64 seed = 1;
  double tol_exact = 1e-9;  // relative to Delta(1,1)
  double tol_quad = 1e-8;   // absolute
  int lemma_cases = 200;    // exhaustive l,u range of the rational identity suites
};

struct AsymptoticsConfig {
  std::string regime = "thm22";  // thm22 | thm24 | thm25
  std::vector<double> grid = {100, 200, 400, 800};
  double epsilon = 0.25;  // thm22: N = Q^{1-epsilon}
  double delta = 0.25;    // thm24 localization exponent
  double n_exponent = 1.5;   // thm24: N = Q^{n_exponent}, must stay <= 2 - delta
  int g = 1;
  std::string mollifier = "mu_w";  // mu_w | mu_w_dyadic | delta_at_one
  double x_rule = 0.5;             // X = Q^{x_rule}
  std::string cutoff = "bump";
  std::string method = "auto";  // auto | characters | kernel
  bool localized = true;        // thm24 only; echoed in the output
  u64 seed = 1;
};

struct SieveSuitesConfig {
  std::vector<std::string> suites = {"multiplicative", "shifted",       "additive",
                                     "additive_dual",  "hybrid",        "bilinear"};
  int trials = 100;
  i64 N = 50;
  i64 Q = 50;
  i64 M = 1000000;  // interval shift of the shifted suite
  double T = 2.0;
  u64 seed = 1;
};

struct ExperimentConfig {
  std::optional<IdentitiesConfig> identities;
  std::optional<AsymptoticsConfig> asymptotics;
  std::optional<SieveSuitesConfig> sieve;
  int workers = 1;
  std::string out_dir = ".";

  // canonical text form; parse(serialize(c)) == c
  std::string serialize() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  u64 hash() const;  // FNV-1a of the canonical form
};

ExperimentConfig default_config();

}  // namespace charsieve
