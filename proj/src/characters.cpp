#include "charsieve/characters.hpp"

#include <algorithm>
#include <cmath>

#include "charsieve/accum.hpp"

namespace charsieve {

namespace {

i64 mulmod(i64 a, i64 b, i64 m) { return static_cast<i64>(static_cast<i128>(a) * b % m); }

i64 powmod(i64 b, i64 e, i64 m) {
  i64 r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// smallest generator of the cyclic unit group mod p^a, p odd
i64 smallest_primitive_root(i64 pk, i64 p, const Sieve& sieve) {
  i64 order = pk / p * (p - 1);
  auto of = sieve.factor(order);
  for (i64 g = 2; g < pk; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& pe : of.factors) {
      if (powmod(g, order / pe.p, pk) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

// x = r1 mod m1, x = r2 mod m2, gcd(m1,m2)=1
i64 crt(i64 r1, i64 m1, i64 r2, i64 m2) {
  for (i64 k = 0; k < m2; ++k) {
    i64 x = r1 + m1 * k;
    if (x % m2 == r2 % m2) return x;
  }
  throw std::logic_error("crt failure");
}

}  // namespace

std::shared_ptr<const CharacterGroup> CharacterGroup::build(i64 q, const Sieve& sieve) {
  if (q < 1) throw std::invalid_argument("modulus must be positive");
  if (q > sieve.bound()) throw std::domain_error("modulus exceeds sieve bound");
  auto G = std::shared_ptr<CharacterGroup>(new CharacterGroup(sieve));
  G->q_ = q;
  G->phi_ = sieve.euler_phi(q);

  auto fq = sieve.factor(q);
  // local generators per prime-power block
  struct LocalFactor {
    i64 gen_local;
    i64 order;
  };
  for (const auto& pe : fq.factors) {
    i64 pk = 1;
    for (int i = 0; i < pe.e; ++i) pk *= pe.p;
    Block blk{pe.p, pe.e, pk, static_cast<int>(G->factors_.size()), 0};
    std::vector<LocalFactor> locals;
    if (pe.p == 2) {
      if (pe.e == 2) {
        locals.push_back({3, 2});  // generated by -1
      } else if (pe.e >= 3) {
        locals.push_back({pk - 1, 2});                 // -1
        locals.push_back({5, pk / 4});                 // 5 has order 2^{a-2}
      }
      // pe.e == 1: trivial unit group, no factor
    } else {
      locals.push_back({smallest_primitive_root(pk, pe.p, sieve), pk / pe.p * (pe.p - 1)});
    }
    for (const auto& lf : locals) {
      i64 lifted = (q == pk) ? lf.gen_local : crt(lf.gen_local, pk, 1, q / pk);
      G->factors_.push_back({lifted, lf.order, pe.p, static_cast<int>(G->blocks_.size())});
      blk.nfactors++;
    }
    G->blocks_.push_back(blk);
  }

  i64 L = 1;
  for (const auto& f : G->factors_) L = ilcm(L, f.order);
  G->lcm_order_ = L;
  G->roots_.resize(static_cast<size_t>(L));
  for (i64 j = 0; j < L; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(L);
    G->roots_[static_cast<size_t>(j)] = {std::cos(t), std::sin(t)};
  }

  // discrete log table: per block, walk the powers of the local generator(s)
  int r = std::max<int>(1, static_cast<int>(G->factors_.size()));
  G->dlog_.assign(static_cast<size_t>(q) * static_cast<size_t>(r), -1);
  if (q == 1) {
    G->dlog_[0] = 0;  // the single residue is a unit with empty exponent vector
  } else {
    for (i64 n = 0; n < q; ++n)
      if (igcd(n, q) == 1) G->dlog_[static_cast<size_t>(n) * r] = 0;
    int fidx = 0;
    for (const auto& blk : G->blocks_) {
      i64 pk = blk.pk;
      if (blk.nfactors == 0) continue;
      if (blk.p != 2) {
        // cyclic: local dlog by walking generator powers
        std::vector<int32_t> local(static_cast<size_t>(pk), -1);
        const auto& f = G->factors_[static_cast<size_t>(fidx)];
        i64 gl = f.generator % pk;
        i64 x = 1;
        for (i64 j = 0; j < f.order; ++j) {
          local[static_cast<size_t>(x)] = static_cast<int32_t>(j);
          x = mulmod(x, gl, pk);
        }
        for (i64 n = 0; n < q; ++n)
          if (igcd(n, q) == 1)
            G->dlog_[static_cast<size_t>(n) * r + fidx] = local[static_cast<size_t>(n % pk)];
        fidx += 1;
      } else if (blk.a == 2) {
        for (i64 n = 0; n < q; ++n)
          if (igcd(n, q) == 1)
            G->dlog_[static_cast<size_t>(n) * r + fidx] = static_cast<int32_t>((n % 4 == 3) ? 1 : 0);
        fidx += 1;
      } else {
        // a >= 3: every odd residue mod 2^a is +-5^j
        std::vector<int32_t> sign(static_cast<size_t>(pk), -1), epow(static_cast<size_t>(pk), -1);
        i64 x = 1;
        i64 half = pk / 4;  // order of 5
        for (i64 j = 0; j < half; ++j) {
          sign[static_cast<size_t>(x)] = 0;
          epow[static_cast<size_t>(x)] = static_cast<int32_t>(j);
          i64 y = pk - x;
          sign[static_cast<size_t>(y)] = 1;
          epow[static_cast<size_t>(y)] = static_cast<int32_t>(j);
          x = mulmod(x, 5, pk);
        }
        for (i64 n = 0; n < q; ++n) {
          if (igcd(n, q) != 1) continue;
          i64 m = n % pk;
          G->dlog_[static_cast<size_t>(n) * r + fidx] = sign[static_cast<size_t>(m)];
          G->dlog_[static_cast<size_t>(n) * r + fidx + 1] = epow[static_cast<size_t>(m)];
        }
        fidx += 2;
      }
    }
  }
  return G;
}

bool CharacterGroup::is_unit(i64 n) const {
  i64 m = n % q_;
  if (m < 0) m += q_;
  if (q_ == 1) return true;
  return igcd(m, q_) == 1;
}

const int32_t* CharacterGroup::dlog_row(i64 residue) const {
  int r = std::max<int>(1, static_cast<int>(factors_.size()));
  return &dlog_[static_cast<size_t>(residue) * r];
}

std::vector<i64> CharacterGroup::dlog(i64 n) const {
  i64 m = n % q_;
  if (m < 0) m += q_;
  if (!is_unit(n)) throw std::domain_error("dlog of a non-unit");
  std::vector<i64> out(factors_.size());
  const int32_t* row = dlog_row(m);
  for (size_t j = 0; j < factors_.size(); ++j) out[j] = row[j];
  return out;
}

i64 CharacterGroup::angle_index(const std::vector<i64>& e, const int32_t* x) const {
  i64 idx = 0;
  for (size_t j = 0; j < factors_.size(); ++j) {
    i64 d = factors_[j].order;
    idx = (idx + (e[j] % d) * (lcm_order_ / d) % lcm_order_ * (x[j] % d)) % lcm_order_;
  }
  return idx;
}

bool CharacterGroup::factors_through(const std::vector<i64>& e, i64 f) const {
  // trivial on every unit u = 1 (mod f)?
  for (i64 u = 1 + f; u < q_; u += f) {
    if (igcd(u, q_) != 1) continue;
    if (angle_index(e, dlog_row(u)) != 0) return false;
  }
  return true;
}

i64 CharacterGroup::conductor_of(const std::vector<i64>& e) const {
  for (i64 f : sieve_.divisors(q_)) {
    if (factors_through(e, f)) return f;
  }
  return q_;
}

bool CharacterGroup::primitive_exponents(const std::vector<i64>& e) const {
  // primitive iff every prime-power block is locally primitive
  for (const auto& blk : blocks_) {
    if (blk.nfactors == 0) return false;  // 2 || q: everything is induced mod q/2
    if (blk.p != 2) {
      i64 ej = e[static_cast<size_t>(blk.first_factor)] % factors_[static_cast<size_t>(blk.first_factor)].order;
      if (blk.a == 1) {
        if (ej == 0) return false;
      } else {
        if (ej % blk.p == 0) return false;
      }
    } else if (blk.a == 2) {
      if (e[static_cast<size_t>(blk.first_factor)] % 2 == 0) return false;
    } else {
      // a >= 3: primitive iff the 5-component is odd
      if (e[static_cast<size_t>(blk.first_factor) + 1] % 2 == 0) return false;
    }
  }
  return true;
}

bool CharacterGroup::admits_primitive() const {
  for (const auto& blk : blocks_)
    if (blk.nfactors == 0) return false;
  return true;
}

std::vector<std::vector<char>> CharacterGroup::primitivity_flags() const {
  std::vector<std::vector<char>> flags(factors_.size());
  for (size_t j = 0; j < factors_.size(); ++j)
    flags[j].assign(static_cast<size_t>(factors_[j].order), 1);
  for (const auto& blk : blocks_) {
    if (blk.nfactors == 0) continue;  // callers must check admits_primitive()
    size_t j = static_cast<size_t>(blk.first_factor);
    if (blk.p != 2) {
      for (i64 e = 0; e < factors_[j].order; ++e) {
        bool ok = (blk.a == 1) ? (e != 0) : (e % blk.p != 0);
        flags[j][static_cast<size_t>(e)] = ok ? 1 : 0;
      }
    } else if (blk.a == 2) {
      flags[j][0] = 0;
    } else {
      size_t j5 = j + 1;  // the 5-part carries the condition
      for (i64 e = 0; e < factors_[j5].order; ++e)
        flags[j5][static_cast<size_t>(e)] = (e % 2 == 1) ? 1 : 0;
    }
  }
  return flags;
}

DirichletCharacter CharacterGroup::character(std::vector<i64> exponents) const {
  return DirichletCharacter(shared_from_this(), std::move(exponents));
}

DirichletCharacter CharacterGroup::principal() const {
  return character(std::vector<i64>(factors_.size(), 0));
}

std::vector<DirichletCharacter> CharacterGroup::all_characters() const {
  std::vector<DirichletCharacter> out;
  out.reserve(static_cast<size_t>(phi_));
  std::vector<i64> e(factors_.size(), 0);
  while (true) {
    out.push_back(character(e));
    int j = static_cast<int>(factors_.size()) - 1;
    while (j >= 0) {
      if (++e[static_cast<size_t>(j)] < factors_[static_cast<size_t>(j)].order) break;
      e[static_cast<size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

std::vector<DirichletCharacter> CharacterGroup::primitive_characters() const {
  std::vector<DirichletCharacter> out;
  std::vector<i64> e(factors_.size(), 0);
  while (true) {
    if (primitive_exponents(e)) out.push_back(character(e));
    int j = static_cast<int>(factors_.size()) - 1;
    while (j >= 0) {
      if (++e[static_cast<size_t>(j)] < factors_[static_cast<size_t>(j)].order) break;
      e[static_cast<size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharacterGroup> group,
                                       std::vector<i64> exponents)
    : group_(std::move(group)), e_(std::move(exponents)) {
  if (e_.size() != static_cast<size_t>(group_->num_factors()))
    throw std::invalid_argument("exponent vector length mismatch");
  for (size_t j = 0; j < e_.size(); ++j) {
    i64 d = group_->factor_order(static_cast<int>(j));
    e_[j] = ((e_[j] % d) + d) % d;
  }
  conductor_ = group_->conductor_of(e_);
}

i64 DirichletCharacter::modulus() const { return group_->modulus(); }

bool DirichletCharacter::is_principal() const {
  for (i64 x : e_)
    if (x != 0) return false;
  return true;
}

std::optional<RootAngle> DirichletCharacter::angle(i64 n) const {
  if (!group_->is_unit(n)) return std::nullopt;
  i64 m = n % modulus();
  if (m < 0) m += modulus();
  i64 idx = group_->angle_index(e_, group_->dlog_row(m));
  i64 L = group_->exponent();
  i64 g = igcd(idx, L);
  if (idx == 0) return RootAngle{0, 1};
  return RootAngle{idx / g, L / g};
}

cdouble DirichletCharacter::operator()(i64 n) const {
  if (!group_->is_unit(n)) return {0.0, 0.0};
  i64 m = n % modulus();
  if (m < 0) m += modulus();
  return group_->roots()[static_cast<size_t>(group_->angle_index(e_, group_->dlog_row(m)))];
}

DirichletCharacter DirichletCharacter::conjugate() const {
  std::vector<i64> ce(e_.size());
  for (size_t j = 0; j < e_.size(); ++j) {
    i64 d = group_->factor_order(static_cast<int>(j));
    ce[j] = (d - e_[j]) % d;
  }
  return DirichletCharacter(group_, std::move(ce));
}

cdouble orthogonality_sum(i64 q, i64 m, i64 n, const Sieve& sieve) {
  if (q < 1) throw std::invalid_argument("modulus must be positive");
  i64 mr = ((m % q) + q) % q;
  i64 nr = ((n % q) + q) % q;
  if (q > 1 && (igcd(mr, q) != 1 || igcd(nr, q) != 1))
    throw std::domain_error("orthogonality_sum requires gcd(mn, q) = 1");
  auto G = CharacterGroup::build(q, sieve);
  int r = G->num_factors();
  i64 L = G->exponent();
  const int32_t* xm = G->dlog_row(mr);
  const int32_t* xn = G->dlog_row(nr);
  // per-factor step of the angle index when the exponent there ticks by one
  std::vector<i64> step(static_cast<size_t>(r));
  for (int j = 0; j < r; ++j) {
    i64 d = G->factor_order(j);
    i64 z = ((xm[j] - xn[j]) % d + d) % d;
    step[static_cast<size_t>(j)] = z * (L / d) % L;
  }
  KahanCSum acc;
  std::vector<i64> e(static_cast<size_t>(r), 0);
  while (true) {
    i64 idx = 0;
    for (int j = 0; j < r; ++j) idx = (idx + e[static_cast<size_t>(j)] * step[static_cast<size_t>(j)]) % L;
    acc.add(G->roots()[static_cast<size_t>(idx)]);
    int j = r - 1;
    while (j >= 0) {
      if (++e[static_cast<size_t>(j)] < G->factor_order(j)) break;
      e[static_cast<size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  cdouble v = acc.value();
  return v / static_cast<double>(G->phi());
}

std::vector<DirichletCharacter> primitive_characters(i64 q, const Sieve& sieve) {
  return CharacterGroup::build(q, sieve)->primitive_characters();
}

}  // namespace charsieve
