#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "charsieve/arith.hpp"
#include "charsieve/characters.hpp"
#include "charsieve/common.hpp"
#include "charsieve/weights.hpp"

namespace charsieve {

// Parameters of the averaging operator over primitive characters:
//   Delta(m,n) = sum_q Psi(q/Q)/phi(q) * sum over primitive chi mod q of
//                chi(m) conj(chi(n)),
// q running over the integer support of Psi(./Q).  C is the split point of
// the small/large divisor decomposition and K = floor(x_hi Q / C) bounds the
// conductors appearing in the switched complementary sum.
struct DeltaParams {
  double Q;
  double C;
  i64 K;
  SmoothCutoff psi;
  i64 q_min, q_max;   // integer support of Psi(q/Q)
  // The Mobius switch in the complementary sum is an exact identity only
  // when no k <= K lies in the support of Psi(./Q), i.e. K < q_min.
  bool switch_exact;

  DeltaParams(double Q_, double C_, SmoothCutoff psi_ = default_cutoff());
};

struct DeltaReport {
  i64 m = 0, n = 0;
  double delta = 0, delta_prime = 0, delta_double_prime = 0;
  std::optional<double> delta0_prime, delta0_double_prime, delta1, delta2;
  std::optional<double> delta_plus, delta_star;
  double residual_split = 0;                  // |D - D' - D''|
  std::optional<double> residual_cancel;      // |D0' + D0''|           (m != n)
  std::optional<double> residual_em;          // |D - D1 - D2|          (m != n)
  std::optional<double> residual_recon_dd;    // |D'' - mellin0*D0'' - D2|
  std::optional<double> residual_recon_p;     // |D'  - mellin0*D0' - D1| (m != n)
  double delta11 = 0;                         // scale for relative tolerances
};

// Evaluator with per-modulus character-group cache, the exact primitive
// character-sum kernel, and memoized remainder integrals.  All methods are
// deterministic; caches only memoize pure values.
class DeltaEvaluator {
 public:
  DeltaEvaluator(DeltaParams params, const Sieve& sieve = default_sieve());

  const DeltaParams& params() const { return p_; }
  const Sieve& sieve() const { return sieve_; }

  // sum over primitive chi mod k of chi(m) conj(chi(n)); exact integers via
  // the divisor-sum identity sum_{d | (k, m-n)} mu(k/d) phi(d) when
  // (mn,k) = 1, zero otherwise
  double star_kernel(i64 k, i64 m, i64 n);

  // definitional double sum with complex character values; the imaginary
  // part of the accumulator must stay below 1e-10 relative and is dropped
  double delta_direct(i64 m, i64 n);
  // same, for many pairs in a single sweep over the moduli
  std::vector<double> delta_direct_batch(const std::vector<std::pair<i64, i64>>& pairs);
  // diagonal in closed form: sum over q coprime to m of Psi(q/Q) phi*(q)/phi(q)
  double delta_diag(i64 m);
  double delta11();

  // small-divisor part: c <= C, d | (m-n), weight Psi(cd/Q) mu(c) phi(d)/phi(cd)
  double delta_prime(i64 m, i64 n);
  // complementary part after the Mobius range switch:
  // -sum_{c<=C} mu(c) sum_l sum_{k<=K} Psi(ckl/Q)/phi(ckl) S*_k(m,n), (cl,mn)=1
  double delta_double_prime(i64 m, i64 n);
  // the same sum with the coprimality of l unfolded over squarefree u | l
  double delta_double_prime_em_form(i64 m, i64 n);
  // small-divisor part re-expressed by the complementary-divisor switch and
  // primitive characters (vanishes identically at m = n)
  double delta_prime_reduced(i64 m, i64 n);
  // the u-unfolded form of the reduced expression
  double delta_prime_em_form(i64 m, i64 n);

  struct EmPieces {
    double delta0_prime;
    double delta0_double_prime;
    double delta1;
    double delta2;
  };
  // Euler-Maclaurin split: D'' = mellin0*D0'' + D2 and (m != n)
  // D' = mellin0*D0' + D1; the infinite squarefree-u sums inside D0 are
  // evaluated exactly as Euler products, and the matching tails of D1/D2 use
  // the closed forms psi1 = -mellin0 (T below support) and psi2 = -T*mellin0.
  EmPieces em_pieces(i64 m, i64 n);

  double delta_plus(i64 m, i64 n, bool singular_trivial);
  double delta_star(i64 m, i64 n, bool singular_trivial);

  DeltaReport report(i64 m, i64 n, bool singular_trivial = true);

  double psi2_at(i64 j);     // psi2(Q/j), memoized on the integer j = cku
  double psi1_at(double T);  // memoized on the bit pattern of T

 private:
  std::shared_ptr<const CharacterGroup> group(i64 q);
  double u_full(i64 D, i64 s) const;           // full squarefree-u Euler product
  double u_trunc(i64 D, i64 s, i64 ub) const;  // partial sum u <= ub

  DeltaParams p_;
  const Sieve& sieve_;
  std::mutex mu_groups_;
  std::map<i64, std::shared_ptr<const CharacterGroup>> groups_;
  std::mutex mu_kernel_;
  std::unordered_map<u64, double> kernel_memo_;
  std::mutex mu_quad_;
  std::unordered_map<i64, double> psi2_memo_;
  std::unordered_map<u64, double> psi1_memo_;
  std::vector<std::pair<i64, double>> q_weights_;  // (q, Psi(q/Q)/phi(q)) over the support
  std::vector<double> q_phistar_ratio_;            // Psi(q/Q) phi*(q)/phi(q)
  double delta11_ = -1.0;
};

// Exact identity behind liberating the complementary variable:
//   sum over squarefree u | l, (u,a)=1 of mu((u,s)) phi((u,s)) / phi(u)
//     = phi(a) l / phi(a l)   if (l,s) = 1, else 0.
// Verified in exact rational arithmetic; requires (a,s) = 1.
bool mobius_switch_check(i64 l, i64 a, i64 s, const Sieve& sieve = default_sieve());

// Exact identity expanding mu((u,mn)) phi((u,mn)) for squarefree u:
//   = sum over alpha beta gamma | u with alpha beta | m, alpha gamma | n of
//     alpha beta gamma mu(beta gamma).
bool gcd_expansion_check(i64 u, i64 m, i64 n, const Sieve& sieve = default_sieve());

}  // namespace charsieve
