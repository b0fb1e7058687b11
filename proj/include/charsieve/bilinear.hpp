#pragma once

#include <optional>
#include <string>
#include <vector>

#include "charsieve/coeffs.hpp"
#include "charsieve/common.hpp"
#include "charsieve/config.hpp"
#include "charsieve/delta.hpp"
#include "charsieve/weights.hpp"

namespace charsieve {

// Full parameter set of the bilinear form
//   S(A x B) = sum_q Psi(q/Q)/phi(q) sum over primitive chi mod q
//              sum_{m,n} a_m b_n F(m,n) chi(m) conj(chi(n)).
struct BilinearConfig {
  DeltaParams dp;
  TestFunction F;
  CoefficientSequence A, B;
  bool singular_trivial = true;
};

enum class SumMethod {
  characters,  // definitional complex triple sum (per-character factored when F is a product)
  kernel,      // exact collapse of the character sum to the divisor kernel (real arithmetic)
};

double s_full(const BilinearConfig& cfg, DeltaEvaluator& ev, SumMethod method = SumMethod::characters,
              int workers = 1);

struct DiagResult {
  double s_diag;       // sum_m a_m b_m F(m,m) Delta(m,m)
  double s_diag_main;  // mean(Psi) * singular-series * Q * sum_m a_m b_m delta(m) F(m,m)
  double err_ratio;    // |s_diag - s_diag_main| / (sqrt(Q) (log N)^2)
};
DiagResult s_diag(const BilinearConfig& cfg, DeltaEvaluator& ev,
                  const SingularSeries& ss);

struct BilinearPieces {
  double s1, s2, s_plus, s_star;
  double s_full_value, s_diag_value, d2_diag;
  double recon_residual;  // |S - S_diag - S1 - S2 + D2_diag|
};
BilinearPieces s_pieces(const BilinearConfig& cfg, DeltaEvaluator& ev);

// restricted twisted double sum with the kernel weight Omega(|m-n|/y):
// m = 0 (d1), n = 0 (d2), (mn, b) = 1
cdouble s_chi(const BilinearConfig& cfg, i64 d1, i64 d2, i64 b, double y,
              const DirichletCharacter& chi);

double v_inner(const BilinearConfig& cfg, i64 d1, i64 d2, double y);

struct VInnerApprox {
  double exact;
  double approx;  // (sum_r rhoA(r)/[r,d1]) (sum_r rhoB(r)/[r,d2]) * smooth integral
  double gap;
};
VInnerApprox v_inner_compare(const BilinearConfig& cfg, const MollifierCoefficients& rhoA,
                             const MollifierCoefficients& rhoB, i64 d1, i64 d2, double y);

// Factored-shape main term and its direct diagonal counterpart, for test
// weights of the form G(m/n, l1 l2 / q^g).
struct SpecialShapeConfig {
  SmoothCutoff psi;
  double Q;
  int g;
  MollifierCoefficients rhoA, rhoB;
  SpecialTestFunction G;
  i64 prime_cutoff = 100000;
  const Sieve* sieve = &default_sieve();
};
// S Q sum_{r1 l1 = r2 l2} rhoA(r1) rhoB(r2) lambda(l1) lambda(l2) (r1 l1)^{-1}
//   delta(r1 l1) int Psi(t) G(1, l1 l2 (tQ)^{-g}) dt
double special_shape_main_term(const SpecialShapeConfig& cfg);
// the same diagonal evaluated directly against the modulus sum:
// replaces S Q int Psi ... by sum over q coprime to m of Psi(q/Q) phi*(q)/phi(q) G(1, l1 l2 q^{-g})
double special_shape_diag_direct(const SpecialShapeConfig& cfg);

struct ExperimentRow {
  double Q;
  double S;
  double S_diag;
  double main_term;
  double abs_err;
  double norm_err;
  double wall_time;  // seconds; reported on stdout, never serialized
};

struct DecaySummary {
  double first_norm_err = 0.0;
  double last_norm_err = 0.0;
  double ratio = 0.0;  // last / first
  bool last_leq_half_first = false;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
  std::string config_echo;
  u64 config_hash = 0;
  u64 seed = 0;
  int workers = 1;
  std::string method;
  std::string reduction;
  std::string regime;

  DecaySummary decay() const;
};

// One row per grid point.  Per-row parameters:
//   thm22:  N = Q^{1-epsilon}, mu-mollified degree-g sequences, box weight;
//           S via the character route, S_diag and its main term alongside,
//           norm_err = |S - S_diag| / Q.
//   thm24:  N = Q^{n_exponent}, dyadic mollifier supports, optionally the
//           ratio-localized weight; S via the exact kernel route.
//   thm25:  factored-shape consistency: S = direct diagonal, main_term from
//           the closed form, norm_err = |S - main_term| / Q^{0.6}.
ExperimentTable run_experiment(const AsymptoticsConfig& cfg, int workers,
                               const Sieve& sieve = default_sieve());

// helper shared by the runner and the CLI: builds the per-row configuration
struct RowSetup {
  BilinearConfig bc;
  i64 N;
  i64 X;
};
RowSetup make_row_config(const AsymptoticsConfig& cfg, double Q, const Sieve& sieve);

}  // namespace charsieve
