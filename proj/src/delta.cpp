#include "charsieve/delta.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "charsieve/accum.hpp"

namespace charsieve {

namespace {

// zeta(2) zeta(3) / zeta(6) = prod_p (1 + 1/(p(p-1))), the completed value of
// the squarefree-u sums appearing in the Euler-Maclaurin main terms
const double kUSumConst = [] {
  const double z2 = M_PI * M_PI / 6.0;
  const double z3 = 1.2020569031595942854;
  const double z6 = std::pow(M_PI, 6) / 945.0;
  return z2 * z3 / z6;
}();

// sorted distinct primes of m*n without forming the product
std::vector<i64> prime_union(i64 m, i64 n, const Sieve& sieve) {
  std::vector<i64> ps;
  for (const auto& pe : sieve.factor(m).factors) ps.push_back(pe.p);
  for (const auto& pe : sieve.factor(n).factors) ps.push_back(pe.p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

bool contains(const std::vector<i64>& sorted, i64 p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

bool coprime_to_set(i64 v, const std::vector<i64>& sorted, const Sieve& sieve) {
  for (const auto& pe : sieve.factor(v).factors)
    if (contains(sorted, pe.p)) return false;
  return true;
}

}  // namespace

DeltaParams::DeltaParams(double Q_, double C_, SmoothCutoff psi_)
    : Q(Q_), C(C_), psi(std::move(psi_)) {
  if (!(Q > 0.0)) throw std::invalid_argument("Q must be positive");
  if (!(C >= 1.0)) throw std::invalid_argument("split point C must be >= 1");
  q_min = static_cast<i64>(std::floor(psi.x_lo * Q)) + 1;
  q_max = static_cast<i64>(std::ceil(psi.x_hi * Q)) - 1;
  if (q_min > q_max)
    throw std::domain_error("empty modulus range: no integer q with Psi(q/Q) > 0");
  K = static_cast<i64>(std::floor(psi.x_hi * Q / C));
  switch_exact = K < q_min;
}

DeltaEvaluator::DeltaEvaluator(DeltaParams params, const Sieve& sieve)
    : p_(std::move(params)), sieve_(sieve) {
  if (p_.q_max > sieve_.bound()) throw std::domain_error("modulus range exceeds sieve bound");
  q_weights_.reserve(static_cast<size_t>(p_.q_max - p_.q_min + 1));
  for (i64 q = p_.q_min; q <= p_.q_max; ++q) {
    double w = p_.psi.f(static_cast<double>(q) / p_.Q);
    if (w == 0.0) continue;
    double phi = static_cast<double>(sieve_.euler_phi(q));
    q_weights_.push_back({q, w / phi});
    q_phistar_ratio_.push_back(w * static_cast<double>(sieve_.phi_star(q)) / phi);
  }
}

std::shared_ptr<const CharacterGroup> DeltaEvaluator::group(i64 q) {
  std::lock_guard<std::mutex> lk(mu_groups_);
  auto it = groups_.find(q);
  if (it != groups_.end()) return it->second;
  auto G = CharacterGroup::build(q, sieve_);
  groups_.emplace(q, G);
  return G;
}

double DeltaEvaluator::star_kernel(i64 k, i64 m, i64 n) {
  if (k == 1) return 1.0;
  i64 mr = ((m % k) + k) % k;
  i64 nr = ((n % k) + k) % k;
  if (igcd(mr, k) != 1 || igcd(nr, k) != 1) return 0.0;
  bool memoizable = k < (1LL << 21);
  u64 key = 0;
  if (memoizable) {
    key = (static_cast<u64>(k) << 42) | (static_cast<u64>(mr) << 21) | static_cast<u64>(nr);
    std::lock_guard<std::mutex> lk(mu_kernel_);
    auto it = kernel_memo_.find(key);
    if (it != kernel_memo_.end()) return it->second;
  }
  // sum_{d | (k, m-n)} mu(k/d) phi(d), valid for (mn,k) = 1
  i64 r = ((mr - nr) % k + k) % k;
  i64 g = (r == 0) ? k : igcd(k, r);
  i64 total = 0;
  for (i64 d : sieve_.divisors(g)) total += sieve_.mobius(k / d) * sieve_.euler_phi(d);
  double v = static_cast<double>(total);
  if (memoizable) {
    std::lock_guard<std::mutex> lk(mu_kernel_);
    kernel_memo_.emplace(key, v);
  }
  return v;
}

std::vector<double> DeltaEvaluator::delta_direct_batch(
    const std::vector<std::pair<i64, i64>>& pairs) {
  size_t nP = pairs.size();
  std::vector<KahanSum> acc_re(nP), acc_im(nP);
  std::vector<i64> idx(nP), step_j(nP);
  for (size_t iq = 0; iq < q_weights_.size(); ++iq) {
    i64 q = q_weights_[iq].first;
    double wq = q_weights_[iq].second;
    if (sieve_.phi_star(q) == 0) continue;
    auto G = group(q);
    int r = G->num_factors();
    i64 L = G->exponent();
    const auto& roots = G->roots();

    // active pairs and their per-factor index steps
    std::vector<size_t> act;
    std::vector<std::array<i64, 8>> steps;
    for (size_t p = 0; p < nP; ++p) {
      i64 mr = ((pairs[p].first % q) + q) % q;
      i64 nr = ((pairs[p].second % q) + q) % q;
      if (!G->is_unit(mr) || !G->is_unit(nr)) continue;
      const int32_t* xm = G->dlog_row(mr);
      const int32_t* xn = G->dlog_row(nr);
      std::array<i64, 8> st{};
      for (int j = 0; j < r; ++j) {
        i64 d = G->factor_order(j);
        i64 z = ((static_cast<i64>(xm[j]) - xn[j]) % d + d) % d;
        st[static_cast<size_t>(j)] = z * (L / d) % L;
      }
      act.push_back(p);
      steps.push_back(st);
    }
    if (act.empty()) continue;

    if (r == 0) {  // q = 1: the trivial character is primitive
      for (size_t a = 0; a < act.size(); ++a) {
        acc_re[act[a]].add(wq);
      }
      continue;
    }

    auto flags = G->primitivity_flags();
    std::vector<i64> e(static_cast<size_t>(r), 0);
    std::vector<double> pre(act.size(), 0.0), pim(act.size(), 0.0);
    std::vector<i64> cur(act.size(), 0);
    int bad = 0;
    for (int j = 0; j < r; ++j) bad += flags[static_cast<size_t>(j)][0] ? 0 : 1;
    while (true) {
      if (bad == 0) {
        for (size_t a = 0; a < act.size(); ++a) {
          const cdouble& z = roots[static_cast<size_t>(cur[a])];
          pre[a] += z.real();
          pim[a] += z.imag();
        }
      }
      int j = r - 1;
      while (j >= 0) {
        bad -= flags[static_cast<size_t>(j)][static_cast<size_t>(e[static_cast<size_t>(j)])] ? 0 : 1;
        e[static_cast<size_t>(j)] += 1;
        for (size_t a = 0; a < act.size(); ++a) {
          cur[a] += steps[a][static_cast<size_t>(j)];
          if (cur[a] >= L) cur[a] -= L;
        }
        if (e[static_cast<size_t>(j)] < G->factor_order(j)) {
          bad += flags[static_cast<size_t>(j)][static_cast<size_t>(e[static_cast<size_t>(j)])] ? 0 : 1;
          break;
        }
        e[static_cast<size_t>(j)] = 0;
        bad += flags[static_cast<size_t>(j)][0] ? 0 : 1;
        --j;
      }
      if (j < 0) break;
    }
    for (size_t a = 0; a < act.size(); ++a) {
      acc_re[act[a]].add(wq * pre[a]);
      acc_im[act[a]].add(wq * pim[a]);
    }
  }
  std::vector<double> out(nP);
  for (size_t p = 0; p < nP; ++p) {
    double re = acc_re[p].value(), im = acc_im[p].value();
    if (std::abs(im) > 1e-10 * std::max(1.0, std::abs(re)))
      throw std::runtime_error("delta_direct: imaginary part above tolerance");
    out[p] = re;
  }
  return out;
}

double DeltaEvaluator::delta_direct(i64 m, i64 n) {
  if (m < 1 || n < 1) throw std::invalid_argument("delta_direct: m, n must be positive");
  return delta_direct_batch({{m, n}})[0];
}

double DeltaEvaluator::delta_diag(i64 m) {
  KahanSum acc;
  for (size_t iq = 0; iq < q_weights_.size(); ++iq) {
    if (igcd(q_weights_[iq].first, m) == 1) acc.add(q_phistar_ratio_[iq]);
  }
  return acc.value();
}

double DeltaEvaluator::delta11() {
  if (delta11_ < 0.0) delta11_ = delta_diag(1);
  return delta11_;
}

double DeltaEvaluator::delta_prime(i64 m, i64 n) {
  auto mnp = prime_union(m, n, sieve_);
  KahanSum acc;
  i64 Cfl = static_cast<i64>(std::floor(p_.C));
  for (i64 c = 1; c <= Cfl; ++c) {
    i64 muc = sieve_.mobius(c);
    if (muc == 0 || !coprime_to_set(c, mnp, sieve_)) continue;
    double wc = static_cast<double>(muc);
    if (m == n) {
      i64 dlo = static_cast<i64>(std::floor(p_.psi.x_lo * p_.Q / c)) + 1;
      i64 dhi = static_cast<i64>(std::ceil(p_.psi.x_hi * p_.Q / c)) - 1;
      for (i64 d = std::max<i64>(1, dlo); d <= dhi; ++d) {
        if (!coprime_to_set(d, mnp, sieve_)) continue;
        double w = p_.psi.f(static_cast<double>(c) * d / p_.Q);
        if (w == 0.0) continue;
        acc.add(wc * w * static_cast<double>(sieve_.euler_phi(d)) /
                static_cast<double>(sieve_.euler_phi(c * d)));
      }
    } else {
      i64 t = std::abs(m - n);
      for (i64 d : sieve_.divisors(t)) {
        if (!coprime_to_set(d, mnp, sieve_)) continue;
        double w = p_.psi.f(static_cast<double>(c) * d / p_.Q);
        if (w == 0.0) continue;
        acc.add(wc * w * static_cast<double>(sieve_.euler_phi(d)) /
                static_cast<double>(sieve_.euler_phi(c * d)));
      }
    }
  }
  return acc.value();
}

double DeltaEvaluator::delta_double_prime(i64 m, i64 n) {
  auto mnp = prime_union(m, n, sieve_);
  KahanSum acc;
  i64 Cfl = static_cast<i64>(std::floor(p_.C));
  for (i64 c = 1; c <= Cfl; ++c) {
    i64 muc = sieve_.mobius(c);
    if (muc == 0 || !coprime_to_set(c, mnp, sieve_)) continue;
    for (i64 k = 1; k <= p_.K; ++k) {
      if (static_cast<double>(c) * k >= p_.psi.x_hi * p_.Q) break;
      double S = star_kernel(k, m, n);
      if (S == 0.0) continue;
      i64 llo = static_cast<i64>(std::floor(p_.psi.x_lo * p_.Q / (static_cast<double>(c) * k))) + 1;
      i64 lhi = static_cast<i64>(std::ceil(p_.psi.x_hi * p_.Q / (static_cast<double>(c) * k))) - 1;
      for (i64 l = std::max<i64>(1, llo); l <= lhi; ++l) {
        if (!coprime_to_set(l, mnp, sieve_)) continue;
        double w = p_.psi.f(static_cast<double>(c) * k * l / p_.Q);
        if (w == 0.0) continue;
        acc.add(muc * w * S / static_cast<double>(sieve_.euler_phi(c * k * l)));
      }
    }
  }
  return -acc.value();
}

namespace {

// mu((u,S)) phi((u,S)) / (u phi(u)) for squarefree u against a prime set S
double u_weight_set(i64 u, const std::vector<i64>& s_primes, const Sieve& sieve) {
  double sign = 1.0, phig = 1.0, phiu = 1.0;
  for (const auto& pe : sieve.factor(u).factors) {
    phiu *= static_cast<double>(pe.p - 1);
    if (contains(s_primes, pe.p)) {
      sign = -sign;
      phig *= static_cast<double>(pe.p - 1);
    }
  }
  return sign * phig / (static_cast<double>(u) * phiu);
}

double u_full_set(const std::vector<i64>& d_primes, const std::vector<i64>& s_primes) {
  // prod over p not dividing D of (1 + w_p), w_p = -1/p if p | S else 1/(p(p-1))
  double v = kUSumConst;
  for (i64 p : d_primes) {
    double pd = static_cast<double>(p);
    v /= 1.0 + 1.0 / (pd * (pd - 1.0));
  }
  for (i64 p : s_primes) {
    if (contains(d_primes, p)) continue;
    double pd = static_cast<double>(p);
    v *= (1.0 - 1.0 / pd) / (1.0 + 1.0 / (pd * (pd - 1.0)));
  }
  return v;
}

double u_trunc_set(const std::vector<i64>& d_primes, const std::vector<i64>& s_primes, i64 ub,
                   const Sieve& sieve) {
  KahanSum acc;
  for (i64 u = 1; u <= ub; ++u) {
    bool ok = true;
    double sign = 1.0, phig = 1.0, phiu = 1.0;
    for (const auto& pe : sieve.factor(u).factors) {
      if (pe.e > 1 || contains(d_primes, pe.p)) {
        ok = false;
        break;
      }
      phiu *= static_cast<double>(pe.p - 1);
      if (contains(s_primes, pe.p)) {
        sign = -sign;
        phig *= static_cast<double>(pe.p - 1);
      }
    }
    if (ok) acc.add(sign * phig / (static_cast<double>(u) * phiu));
  }
  return acc.value();
}

std::vector<i64> prime_set_of(i64 v, const Sieve& sieve) {
  std::vector<i64> ps;
  for (const auto& pe : sieve.factor(v).factors) ps.push_back(pe.p);
  return ps;
}

std::vector<i64> merge_sets(std::vector<i64> a, const std::vector<i64>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

double DeltaEvaluator::u_full(i64 D, i64 s) const {
  return u_full_set(prime_set_of(D, sieve_), prime_set_of(s, sieve_));
}

double DeltaEvaluator::u_trunc(i64 D, i64 s, i64 ub) const {
  return u_trunc_set(prime_set_of(D, sieve_), prime_set_of(s, sieve_), ub, sieve_);
}

double DeltaEvaluator::psi2_at(i64 j) {
  {
    std::lock_guard<std::mutex> lk(mu_quad_);
    auto it = psi2_memo_.find(j);
    if (it != psi2_memo_.end()) return it->second;
  }
  double v = psi2(p_.psi, p_.Q / static_cast<double>(j));
  std::lock_guard<std::mutex> lk(mu_quad_);
  psi2_memo_.emplace(j, v);
  return v;
}

double DeltaEvaluator::psi1_at(double T) {
  u64 key = std::bit_cast<u64>(T);
  {
    std::lock_guard<std::mutex> lk(mu_quad_);
    auto it = psi1_memo_.find(key);
    if (it != psi1_memo_.end()) return it->second;
  }
  double v = psi1(p_.psi, T);
  std::lock_guard<std::mutex> lk(mu_quad_);
  psi1_memo_.emplace(key, v);
  return v;
}

double DeltaEvaluator::delta_double_prime_em_form(i64 m, i64 n) {
  auto mnp = prime_union(m, n, sieve_);
  KahanSum acc;
  i64 Cfl = static_cast<i64>(std::floor(p_.C));
  double hiQ = p_.psi.x_hi * p_.Q;
  for (i64 c = 1; c <= Cfl; ++c) {
    i64 muc = sieve_.mobius(c);
    if (muc == 0 || !coprime_to_set(c, mnp, sieve_)) continue;
    for (i64 k = 1; k <= p_.K && static_cast<double>(c) * k < hiQ; ++k) {
      double S = star_kernel(k, m, n);
      if (S == 0.0) continue;
      double phick = static_cast<double>(sieve_.euler_phi(c * k));
      auto ck_primes = prime_set_of(c * k, sieve_);
      i64 umax = static_cast<i64>(std::ceil(hiQ / (static_cast<double>(c) * k))) - 1;
      for (i64 u = 1; u <= umax; ++u) {
        if (!sieve_.is_squarefree(u) || !coprime_to_set(u, ck_primes, sieve_)) continue;
        double wu = u_weight_set(u, mnp, sieve_);
        i64 llo =
            static_cast<i64>(std::floor(p_.psi.x_lo * p_.Q / (static_cast<double>(c) * k * u))) + 1;
        i64 lhi = static_cast<i64>(std::ceil(hiQ / (static_cast<double>(c) * k * u))) - 1;
        KahanSum lsum;
        for (i64 l = std::max<i64>(1, llo); l <= lhi; ++l) {
          double w = p_.psi.f(static_cast<double>(c) * k * u * l / p_.Q);
          if (w != 0.0) lsum.add(w / static_cast<double>(l));
        }
        acc.add(muc / phick * wu * lsum.value() * S);
      }
    }
  }
  return -acc.value();
}

namespace {

// (a,c) pairs with ac <= C, both parts squarefree jointly (mu(ac) != 0)
struct ACPair {
  i64 a, c;
  double weight;  // mu(a) mu(ac) / (a phi(ac))
};

std::vector<ACPair> ac_pairs(double C, const std::vector<i64>& mnp, const Sieve& sieve) {
  std::vector<ACPair> out;
  i64 Cfl = static_cast<i64>(std::floor(C));
  for (i64 a = 1; a <= Cfl; ++a) {
    if (sieve.mobius(a) == 0 || !coprime_to_set(a, mnp, sieve)) continue;
    for (i64 c = 1; a * c <= Cfl; ++c) {
      i64 muac = sieve.mobius(a * c);
      if (muac == 0 || !coprime_to_set(c, mnp, sieve)) continue;
      double w = static_cast<double>(sieve.mobius(a)) * muac /
                 (static_cast<double>(a) * sieve.euler_phi(a * c));
      out.push_back({a, c, w});
    }
  }
  return out;
}

// (g,h) pairs with g h | gcd(m,n) and mu(g) != 0
struct GHPair {
  i64 g, h, gh;
  double mug;
};

std::vector<GHPair> gh_pairs(i64 m, i64 n, const Sieve& sieve) {
  std::vector<GHPair> out;
  i64 G = igcd(m, n);
  for (i64 g : sieve.divisors(G)) {
    i64 mug = sieve.mobius(g);
    if (mug == 0) continue;
    for (i64 h : sieve.divisors(G / g)) out.push_back({g, h, g * h, static_cast<double>(mug)});
  }
  return out;
}

}  // namespace

double DeltaEvaluator::delta_prime_reduced(i64 m, i64 n) {
  if (m == n) return 0.0;
  auto mnp = prime_union(m, n, sieve_);
  i64 t = std::abs(m - n);
  KahanSum acc;
  for (const auto& ac : ac_pairs(p_.C, mnp, sieve_)) {
    for (const auto& gh : gh_pairs(m, n, sieve_)) {
      i64 mb = m / gh.gh, nb = n / gh.gh;
      double num = static_cast<double>(ac.a) * ac.c * t;
      double den = static_cast<double>(gh.h) * p_.Q;
      // window of j = k l from the support of Psi(num / (j den))
      i64 jlo = static_cast<i64>(std::floor(num / (p_.psi.x_hi * den))) + 1;
      i64 jhi = static_cast<i64>(std::ceil(num / (p_.psi.x_lo * den))) - 1;
      auto mbnb = prime_union(mb, nb, sieve_);
      for (i64 j = std::max<i64>(1, jlo); j <= jhi; ++j) {
        if (j % ac.a != 0) continue;
        double w = p_.psi.f(num / (static_cast<double>(j) * den));
        if (w == 0.0) continue;
        double phij = static_cast<double>(sieve_.euler_phi(j));
        for (i64 l : sieve_.divisors(j)) {
          if (!coprime_to_set(l, mbnb, sieve_)) continue;
          double S = star_kernel(j / l, mb, nb);
          if (S == 0.0) continue;
          acc.add(ac.weight * gh.mug * w * S / phij);
        }
      }
    }
  }
  return acc.value();
}

double DeltaEvaluator::delta_prime_em_form(i64 m, i64 n) {
  if (m == n) return 0.0;
  auto mnp = prime_union(m, n, sieve_);
  i64 t = std::abs(m - n);
  KahanSum acc;
  for (const auto& ac : ac_pairs(p_.C, mnp, sieve_)) {
    for (const auto& gh : gh_pairs(m, n, sieve_)) {
      i64 mb = m / gh.gh, nb = n / gh.gh;
      auto mbnb = prime_union(mb, nb, sieve_);
      for (i64 k = 1; k <= p_.K; ++k) {
        double S = star_kernel(k, mb, nb);
        if (S == 0.0) continue;
        i64 gk = igcd(ac.a, k);
        double Tb = static_cast<double>(gk) * ac.c * t /
                    (static_cast<double>(k) * gh.h * p_.Q);
        if (Tb <= p_.psi.x_lo) continue;  // no l >= 1 reaches the support
        double phila = static_cast<double>(sieve_.euler_phi(ilcm(ac.a, k)));
        auto ak_primes = merge_sets(prime_set_of(ac.a, sieve_), prime_set_of(k, sieve_));
        i64 umax = static_cast<i64>(std::floor(Tb / p_.psi.x_lo));
        for (i64 u = 1; u <= umax; ++u) {
          if (!sieve_.is_squarefree(u) || !coprime_to_set(u, ak_primes, sieve_)) continue;
          double wu = u_weight_set(u, mbnb, sieve_);
          double Tu = Tb / static_cast<double>(u);
          i64 llo = static_cast<i64>(std::floor(Tu / p_.psi.x_hi)) + 1;
          i64 lhi = static_cast<i64>(std::ceil(Tu / p_.psi.x_lo)) - 1;
          KahanSum lsum;
          for (i64 l = std::max<i64>(1, llo); l <= lhi; ++l) {
            double w = p_.psi.f(Tu / static_cast<double>(l));
            if (w != 0.0) lsum.add(w / static_cast<double>(l));
          }
          acc.add(ac.weight * gh.mug / phila * wu * lsum.value() * S);
        }
      }
    }
  }
  return acc.value();
}

DeltaEvaluator::EmPieces DeltaEvaluator::em_pieces(i64 m, i64 n) {
  auto mnp = prime_union(m, n, sieve_);
  double hiQ = p_.psi.x_hi * p_.Q;
  double mellin0 = p_.psi.mellin0;

  // complementary side: valid for every m, n
  KahanSum d0dd, d2;
  i64 Cfl = static_cast<i64>(std::floor(p_.C));
  for (i64 c = 1; c <= Cfl; ++c) {
    i64 muc = sieve_.mobius(c);
    if (muc == 0 || !coprime_to_set(c, mnp, sieve_)) continue;
    for (i64 k = 1; k <= p_.K; ++k) {
      double S = star_kernel(k, m, n);
      if (S == 0.0) continue;
      double phick = static_cast<double>(sieve_.euler_phi(c * k));
      auto ck_primes = prime_set_of(c * k, sieve_);
      double full = u_full_set(ck_primes, mnp);
      i64 ub = static_cast<i64>(std::ceil(hiQ / (static_cast<double>(c) * k))) - 1;
      KahanSum trunc, s2;
      for (i64 u = 1; u <= ub; ++u) {
        if (!sieve_.is_squarefree(u) || !coprime_to_set(u, ck_primes, sieve_)) continue;
        double wu = u_weight_set(u, mnp, sieve_);
        trunc.add(wu);
        s2.add(wu * static_cast<double>(u) * psi2_at(c * k * u));
      }
      double tail = full - trunc.value();
      d0dd.add(-muc / phick * full * S);
      // finite remainder terms plus the closed-form tail psi2(T) = -T mellin0
      d2.add(-(1.0 / p_.Q) * muc * (static_cast<double>(c) * k / phick) * S * s2.value());
      d2.add(muc / phick * S * mellin0 * tail);
    }
  }

  EmPieces out{};
  out.delta0_double_prime = d0dd.value();
  out.delta2 = d2.value();

  if (m == n) {
    out.delta0_prime = 0.0;
    out.delta1 = 0.0;
    return out;
  }

  i64 t = std::abs(m - n);
  KahanSum d0p, d1;
  for (const auto& ac : ac_pairs(p_.C, mnp, sieve_)) {
    for (const auto& gh : gh_pairs(m, n, sieve_)) {
      i64 mb = m / gh.gh, nb = n / gh.gh;
      auto mbnb = prime_union(mb, nb, sieve_);
      for (i64 k = 1; k <= p_.K; ++k) {
        double S = star_kernel(k, mb, nb);
        if (S == 0.0) continue;
        double phila = static_cast<double>(sieve_.euler_phi(ilcm(ac.a, k)));
        auto ak_primes = merge_sets(prime_set_of(ac.a, sieve_), prime_set_of(k, sieve_));
        double full = u_full_set(ak_primes, mbnb);
        d0p.add(ac.weight * gh.mug / phila * full * S);

        i64 gk = igcd(ac.a, k);
        double Tb = static_cast<double>(gk) * ac.c * t /
                    (static_cast<double>(k) * gh.h * p_.Q);
        i64 ub = static_cast<i64>(std::floor(Tb / p_.psi.x_lo));
        KahanSum trunc, s1;
        for (i64 u = 1; u <= ub; ++u) {
          if (!sieve_.is_squarefree(u) || !coprime_to_set(u, ak_primes, sieve_)) continue;
          double wu = u_weight_set(u, mbnb, sieve_);
          trunc.add(wu);
          s1.add(wu * psi1_at(Tb / static_cast<double>(u)));
        }
        double tail = full - trunc.value();
        d1.add(ac.weight * gh.mug / phila * S * (s1.value() - mellin0 * tail));
      }
    }
  }
  out.delta0_prime = d0p.value();
  out.delta1 = d1.value();
  return out;
}

double DeltaEvaluator::delta_plus(i64 m, i64 n, bool singular_trivial) {
  if (!singular_trivial) return 0.0;
  if (m == n) throw std::invalid_argument("delta_plus needs m != n");
  auto mnp = prime_union(m, n, sieve_);
  double mellin0 = p_.psi.mellin0;
  i64 t = std::abs(m - n);
  KahanSum acc;
  for (const auto& ac : ac_pairs(p_.C, mnp, sieve_)) {
    for (const auto& gh : gh_pairs(m, n, sieve_)) {
      i64 mb = m / gh.gh, nb = n / gh.gh;
      auto mbnb = prime_union(mb, nb, sieve_);
      double phia = static_cast<double>(sieve_.euler_phi(ac.a));
      auto a_primes = prime_set_of(ac.a, sieve_);
      double full = u_full_set(a_primes, mbnb);
      double Tb = static_cast<double>(ac.c) * t / (static_cast<double>(gh.h) * p_.Q);
      i64 ub = static_cast<i64>(std::floor(Tb / p_.psi.x_lo));
      KahanSum trunc, s1;
      for (i64 u = 1; u <= ub; ++u) {
        if (!sieve_.is_squarefree(u) || !coprime_to_set(u, a_primes, sieve_)) continue;
        double wu = u_weight_set(u, mbnb, sieve_);
        trunc.add(wu);
        s1.add(wu * psi1_at(Tb / static_cast<double>(u)));
      }
      double tail = full - trunc.value();
      acc.add(ac.weight * gh.mug / phia * (s1.value() - mellin0 * tail));
    }
  }
  return acc.value();
}

double DeltaEvaluator::delta_star(i64 m, i64 n, bool singular_trivial) {
  double d1 = em_pieces(m, n).delta1;
  return d1 - delta_plus(m, n, singular_trivial);
}

DeltaReport DeltaEvaluator::report(i64 m, i64 n, bool singular_trivial) {
  DeltaReport r;
  r.m = m;
  r.n = n;
  r.delta11 = delta11();
  r.delta = delta_direct(m, n);
  r.delta_prime = delta_prime(m, n);
  r.delta_double_prime = delta_double_prime(m, n);
  r.residual_split = std::abs(r.delta - r.delta_prime - r.delta_double_prime);
  EmPieces em = em_pieces(m, n);
  double mellin0 = p_.psi.mellin0;
  r.delta0_double_prime = em.delta0_double_prime;
  r.delta2 = em.delta2;
  r.residual_recon_dd =
      std::abs(r.delta_double_prime - mellin0 * em.delta0_double_prime - em.delta2);
  if (m != n) {
    r.delta0_prime = em.delta0_prime;
    r.delta1 = em.delta1;
    r.residual_cancel = std::abs(em.delta0_prime + em.delta0_double_prime);
    r.residual_em = std::abs(r.delta - em.delta1 - em.delta2);
    r.residual_recon_p = std::abs(r.delta_prime - mellin0 * em.delta0_prime - em.delta1);
    double dp = delta_plus(m, n, singular_trivial);
    r.delta_plus = dp;
    r.delta_star = em.delta1 - dp;
  }
  return r;
}

// ---------------------------------------------------------------------------
// exact rational identity checks

namespace {

struct Frac {
  i128 num = 0;
  i128 den = 1;
  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  Frac operator+(const Frac& o) const {
    Frac r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  bool operator==(const Frac& o) const { return num * o.den == o.num * den; }
};

}  // namespace

bool mobius_switch_check(i64 l, i64 a, i64 s, const Sieve& sieve) {
  if (igcd(a, s) != 1) throw std::invalid_argument("mobius_switch_check requires (a,s) = 1");
  // enumerate squarefree u | l with (u,a) = 1 over subsets of l's primes
  std::vector<i64> usable;
  for (const auto& pe : sieve.factor(l).factors)
    if (a % pe.p != 0) usable.push_back(pe.p);
  Frac lhs{0, 1};
  size_t nsub = size_t{1} << usable.size();
  for (size_t mask = 0; mask < nsub; ++mask) {
    i64 u = 1;
    for (size_t i = 0; i < usable.size(); ++i)
      if (mask & (size_t{1} << i)) u *= usable[i];
    i64 g = igcd(u, s);
    i64 mug = sieve.mobius(g);
    Frac term{static_cast<i128>(mug) * sieve.euler_phi(g), static_cast<i128>(sieve.euler_phi(u))};
    term.reduce();
    lhs = lhs + term;
  }
  Frac rhs{0, 1};
  if (igcd(l, s) == 1) rhs = Frac{static_cast<i128>(sieve.euler_phi(a)) * l,
                                  static_cast<i128>(sieve.euler_phi(a * l))};
  rhs.reduce();
  return lhs == rhs;
}

bool gcd_expansion_check(i64 u, i64 m, i64 n, const Sieve& sieve) {
  if (!sieve.is_squarefree(u)) throw std::invalid_argument("gcd_expansion_check requires squarefree u");
  // (u, mn) for squarefree u: product of primes of u dividing m or n
  i64 g = 1;
  for (const auto& pe : sieve.factor(u).factors)
    if (m % pe.p == 0 || n % pe.p == 0) g *= pe.p;
  i64 lhs = sieve.mobius(g) * sieve.euler_phi(g);
  i64 rhs = 0;
  for (i64 alpha : sieve.divisors(u)) {
    if (m % alpha != 0 || n % alpha != 0) continue;
    i64 u2 = u / alpha;
    for (i64 beta : sieve.divisors(u2)) {
      if (m % (alpha * beta) != 0) continue;
      i64 u3 = u2 / beta;
      for (i64 gamma : sieve.divisors(u3)) {
        if (n % (alpha * gamma) != 0) continue;
        rhs += alpha * beta * gamma * sieve.mobius(beta * gamma);
      }
    }
  }
  return lhs == rhs;
}

}  // namespace charsieve
