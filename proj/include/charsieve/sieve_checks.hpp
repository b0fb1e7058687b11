#pragma once

#include <string>
#include <vector>

#include "charsieve/bilinear.hpp"
#include "charsieve/characters.hpp"
#include "charsieve/common.hpp"

namespace charsieve {

// One inequality trial: both sides and their ratio.  Every check here is a
// theorem, so ratio <= 1 + 1e-9 on admissible inputs; a larger ratio means an
// implementation bug.
struct SieveCheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  i64 N = 0, Q = 0, M = 0;
  double T = 0.0;
  std::string vector_kind;
  u64 seed = 0;
};

// sum_{q<=Q} (q/phi(q)) sum over primitive chi of |sum_{n<=N} a_n chi(n)|^2
//   <= (Q^2 + N) sum |a_n|^2
SieveCheckResult lsi_multiplicative(const std::vector<cdouble>& a, i64 Q,
                                    const Sieve& sieve = default_sieve());
// same with the window M < n <= M + N; a[i] is the coefficient of n = M+1+i
SieveCheckResult lsi_shifted(const std::vector<cdouble>& a, i64 M, i64 Q,
                             const Sieve& sieve = default_sieve());
// additive characters over reduced fractions a/q, q <= Q
SieveCheckResult lsi_additive(const std::vector<cdouble>& a, i64 Q,
                              const Sieve& sieve = default_sieve());

// gamma indexed by reduced fractions: gamma[q][j] for the j-th reduced
// residue mod q in increasing order, 1 <= q <= Q
struct FareyVector {
  i64 Q = 0;
  std::vector<std::vector<cdouble>> gamma;  // gamma[q], index 0 unused
};
SieveCheckResult lsi_additive_dual(const FareyVector& gamma, i64 N,
                                   const Sieve& sieve = default_sieve());

// hybrid form: integral over t in [-T,T] of |sum a_n chi(n) n^{it}|^2,
// bounded by (Q^2 T + N) sum |a_n|^2; the t-integral is adaptive quadrature
// with breakpoint hints at multiples of 2 pi / log N
SieveCheckResult hlsi(const std::vector<cdouble>& a, i64 Q, double T, double quad_tol,
                      const Sieve& sieve = default_sieve());

// |sum_{q<=Q} sum* sum_{m,n} a_m b_n F(m,n) chi(m) conj(chi(n))|
//   <= L (Q^2+M)^{1/2} (Q^2+N)^{1/2} ||a|| ||b||
// with L the Mellin L1 mass of F; pass L <= 0 to compute it here.
SieveCheckResult bilinear_bound_check(const BilinearConfig& cfg, double L_mass,
                                      const Sieve& sieve = default_sieve());

}  // namespace charsieve
