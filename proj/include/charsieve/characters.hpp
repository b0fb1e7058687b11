#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "charsieve/arith.hpp"
#include "charsieve/common.hpp"

namespace charsieve {

// Exact angle of a root of unity: e(num/den), reduced, 0 <= num < den.
struct RootAngle {
  i64 num = 0;
  i64 den = 1;
  bool operator==(const RootAngle&) const = default;
};

class CharacterGroup;

// A character mod q given by its exponent vector against the group's cyclic
// generators.  The conductor is computed on construction by testing each
// divisor f of q in increasing order.
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<i64> exponents);

  i64 modulus() const;
  const std::vector<i64>& exponents() const { return e_; }
  i64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus(); }
  bool is_principal() const;

  cdouble operator()(i64 n) const;                // 0 when gcd(n, q) > 1
  std::optional<RootAngle> angle(i64 n) const;    // exact; nullopt when the value is 0
  DirichletCharacter conjugate() const;

  const CharacterGroup& group() const { return *group_; }

 private:
  std::shared_ptr<const CharacterGroup> group_;
  std::vector<i64> e_;
  i64 conductor_;
};

// The unit group mod q decomposed into cyclic factors with a full discrete
// log table.  Generators are deterministic: the smallest primitive root for
// each odd prime power, and the (-1, 5) decomposition at powers of two.
class CharacterGroup : public std::enable_shared_from_this<CharacterGroup> {
 public:
  static std::shared_ptr<const CharacterGroup> build(i64 q, const Sieve& sieve = default_sieve());

  i64 modulus() const { return q_; }
  i64 phi() const { return phi_; }
  i64 exponent() const { return lcm_order_; }  // lcm of factor orders
  int num_factors() const { return static_cast<int>(factors_.size()); }
  i64 factor_order(int j) const { return factors_[static_cast<size_t>(j)].order; }
  i64 factor_generator(int j) const { return factors_[static_cast<size_t>(j)].generator; }

  bool is_unit(i64 n) const;
  // exponent vector of the unit n; throws for non-units
  std::vector<i64> dlog(i64 n) const;
  // raw pointer into the table for hot loops; nullptr marker via first < 0
  const int32_t* dlog_row(i64 residue) const;

  const std::vector<cdouble>& roots() const { return roots_; }  // e(j/exponent())

  DirichletCharacter character(std::vector<i64> exponents) const;
  DirichletCharacter principal() const;
  std::vector<DirichletCharacter> all_characters() const;        // lexicographic
  std::vector<DirichletCharacter> primitive_characters() const;  // same order, filtered

  // Structural primitivity for an exponent tuple (local test per prime-power
  // block); cross-checked in tests against conductor() == q.
  bool primitive_exponents(const std::vector<i64>& e) const;
  // true iff any primitive character mod q exists (false exactly for 2 || q, q > 2)
  bool admits_primitive() const;
  // Per-factor local primitivity tables: when admits_primitive(), a tuple e is
  // primitive iff flags[j][e_j] for every factor j.
  std::vector<std::vector<char>> primitivity_flags() const;
  // Reference conductor algorithm: test each divisor of q in increasing order.
  i64 conductor_of(const std::vector<i64>& e) const;
  // true iff the tuple's character is trivial on every unit u = 1 (mod f)
  bool factors_through(const std::vector<i64>& e, i64 f) const;

  // exact angle index into roots() of prod_j e(e_j x_j / d_j)
  i64 angle_index(const std::vector<i64>& e, const int32_t* x) const;

  const Sieve& sieve() const { return sieve_; }

 private:
  explicit CharacterGroup(const Sieve& sieve) : sieve_(sieve) {}

  struct Factor {
    i64 generator;  // CRT-lifted residue mod q
    i64 order;
    i64 prime;      // the prime of the block this factor belongs to
    int block;      // index into blocks_
  };
  struct Block {
    i64 p;
    int a;          // block modulus p^a
    i64 pk;
    int first_factor;
    int nfactors;
  };

  const Sieve& sieve_;
  i64 q_ = 1;
  i64 phi_ = 1;
  i64 lcm_order_ = 1;
  std::vector<Factor> factors_;
  std::vector<Block> blocks_;
  std::vector<int32_t> dlog_;  // flattened q x max(1, num_factors)
  std::vector<cdouble> roots_;
};

// (1/phi(q)) sum over all characters mod q of chi(m) conj(chi(n)); requires
// gcd(mn, q) = 1.  Equals 1 when m = n (mod q), else 0, up to rounding.
cdouble orthogonality_sum(i64 q, i64 m, i64 n, const Sieve& sieve = default_sieve());

std::vector<DirichletCharacter> primitive_characters(i64 q, const Sieve& sieve = default_sieve());

}  // namespace charsieve
