#pragma once

#include "bstark/cones.hpp"
#include "bstark/field.hpp"
#include "bstark/group_ring.hpp"

#include <mpfr.h>

#include <cmath>
#include <random>

namespace bstark_test {

using namespace bstark;

inline ExactVector<QuadReal> embed(const FieldElement& x) { return {x.embed(0), x.embed(1)}; }

inline FieldElement random_totally_positive(const QuadField& F, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> c(-400, 400), den(1, 30);
  while (true) {
    FieldElement x = F.elt(Rat(c(rng), den(rng)), Rat(c(rng), den(rng)));
    if (x.totally_positive()) return x;
  }
}

// Hurwitz zeta(s, x) by Euler-Maclaurin with N explicit terms and K Bernoulli
// corrections, in MPFR; valid for real s != 1 as the analytic continuation.
inline void hurwitz_em(mpfr_t out, double s, const Rat& x, int N, int K) {
  const mpfr_prec_t prec = 256;
  static const long b2k_num[] = {1, -1, 1, -1, 5, -691, 7, -3617};
  static const long b2k_den[] = {6, 30, 42, 30, 66, 2730, 6, 510};
  mpfr_t acc, t, base, sm, fact, poch;
  mpfr_inits2(prec, acc, t, base, sm, fact, poch, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(sm, s, MPFR_RNDN);
  mpfr_set_zero(acc, 1);
  for (int n = 0; n < N; ++n) {
    mpfr_set_q(base, x.get_mpq_t(), MPFR_RNDN);
    mpfr_add_si(base, base, n, MPFR_RNDN);
    mpfr_neg(t, sm, MPFR_RNDN);
    mpfr_pow(t, base, t, MPFR_RNDN);
    mpfr_add(acc, acc, t, MPFR_RNDN);
  }
  mpfr_set_q(base, x.get_mpq_t(), MPFR_RNDN);
  mpfr_add_si(base, base, N, MPFR_RNDN);
  // (N+x)^{1-s}/(s-1)
  mpfr_si_sub(t, 1, sm, MPFR_RNDN);
  mpfr_pow(t, base, t, MPFR_RNDN);
  mpfr_t sm1;
  mpfr_init2(sm1, prec);
  mpfr_sub_si(sm1, sm, 1, MPFR_RNDN);
  mpfr_div(t, t, sm1, MPFR_RNDN);
  mpfr_add(acc, acc, t, MPFR_RNDN);
  // (N+x)^{-s}/2
  mpfr_neg(t, sm, MPFR_RNDN);
  mpfr_pow(t, base, t, MPFR_RNDN);
  mpfr_div_ui(t, t, 2, MPFR_RNDN);
  mpfr_add(acc, acc, t, MPFR_RNDN);
  // sum_k B_2k/(2k)! s(s+1)...(s+2k-2) (N+x)^{-s-2k+1}
  mpfr_set_ui(fact, 1, MPFR_RNDN);
  mpfr_set(poch, sm, MPFR_RNDN);
  for (int k = 1; k <= K; ++k) {
    mpfr_mul_ui(fact, fact, static_cast<unsigned long>((2 * k - 1) * (2 * k)), MPFR_RNDN);
    if (k > 1) {
      mpfr_add_si(t, sm, 2 * k - 3, MPFR_RNDN);
      mpfr_mul(poch, poch, t, MPFR_RNDN);
      mpfr_add_si(t, sm, 2 * k - 2, MPFR_RNDN);
      mpfr_mul(poch, poch, t, MPFR_RNDN);
    }
    mpfr_neg(t, sm, MPFR_RNDN);
    mpfr_sub_si(t, t, 2 * k - 1, MPFR_RNDN);
    mpfr_pow(t, base, t, MPFR_RNDN);
    mpfr_mul(t, t, poch, MPFR_RNDN);
    mpfr_mul_si(t, t, b2k_num[k - 1], MPFR_RNDN);
    mpfr_div_si(t, t, b2k_den[k - 1], MPFR_RNDN);
    mpfr_div(t, t, fact, MPFR_RNDN);
    mpfr_add(acc, acc, t, MPFR_RNDN);
  }
  mpfr_set(out, acc, MPFR_RNDN);
  mpfr_clears(acc, t, base, sm, fact, poch, sm1, static_cast<mpfr_ptr>(nullptr));
}

inline double distance(const mpfr_t a, const Rat& b) {
  mpfr_t t;
  mpfr_init2(t, 256);
  mpfr_set_q(t, b.get_mpq_t(), MPFR_RNDN);
  mpfr_sub(t, t, a, MPFR_RNDN);
  double d = std::fabs(mpfr_get_d(t, MPFR_RNDN));
  mpfr_clear(t);
  return d;
}

// L(0, chi_D) = -(1/|D|) sum_{a=1}^{|D|} (D/a) a for a fundamental discriminant D < 0.
inline Rat dirichlet_l0(long D) {
  long f = -D;
  Rat s = 0;
  for (long a = 1; a <= f; ++a) s += Rat(mpz_kronecker_si(Int(D).get_mpz_t(), a) * a);
  Rat out = -s / Rat(f);
  out.canonicalize();
  return out;
}


inline std::shared_ptr<const AbelianGroup> cyclic(std::vector<int> orders) {
  return std::make_shared<const AbelianGroup>(AbelianGroup::cyclic_product(orders));
}

inline GroupRingElement random_element(const std::shared_ptr<const AbelianGroup>& G, std::mt19937_64& rng, int lo, int hi,
                                BaseRing ring = BaseRing::integer, const Int& modulus = 0) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<Rat> c;
  for (int g = 0; g < G->size(); ++g) c.push_back(Rat(dist(rng)));
  return GroupRingElement::from_coefficients(G, c, ring, modulus);
}

inline GroupRingMatrix random_matrix(const std::shared_ptr<const AbelianGroup>& G, std::mt19937_64& rng, int n, int m,
                              BaseRing ring, const Int& modulus) {
  GroupRingMatrix a(static_cast<std::size_t>(n));
  for (auto& row : a)
    for (int j = 0; j < m; ++j) row.push_back(random_element(G, rng, -4, 4, ring, modulus));
  return a;
}

// Another presentation of the same module: invertible row and column operations,
// a redundant relation, and a stabilising generator killed by its own relation.
inline GroupRingMatrix re_present(GroupRingMatrix a, std::mt19937_64& rng) {
  const GroupRingElement any = a[0][0];
  const auto G = any.group_ptr();
  const std::size_t n = a.size(), m = a[0].size();
  std::uniform_int_distribution<std::size_t> rn(0, n - 1), rm(0, m - 1);
  std::uniform_int_distribution<int> rg(0, G->size() - 1);
  for (int step = 0; step < 6; ++step) {
    std::size_t i = rn(rng), j = rn(rng);
    if (i != j) {
      auto r = random_element(G, rng, -2, 2, any.ring(), any.modulus());
      for (std::size_t k = 0; k < m; ++k) a[i][k] = a[i][k] + r * a[j][k];
    }
    std::size_t c1 = rm(rng), c2 = rm(rng);
    if (c1 != c2) {
      auto r = random_element(G, rng, -2, 2, any.ring(), any.modulus());
      for (std::size_t k = 0; k < n; ++k) a[k][c1] = a[k][c1] + r * a[k][c2];
    }
    auto u = any.basis(rg(rng));
    for (std::size_t k = 0; k < m; ++k) a[i][k] = u * a[i][k];
  }
  // redundant column
  auto r1 = random_element(G, rng, -2, 2, any.ring(), any.modulus());
  auto r2 = random_element(G, rng, -2, 2, any.ring(), any.modulus());
  for (std::size_t k = 0; k < n; ++k) a[k].push_back(r1 * a[k][0] + r2 * a[k][m - 1]);
  // stabilisation: new generator e with relation e = 0, then mixed into the others
  const GroupRingElement zero = any - any;
  for (auto& row : a) row.push_back(zero);
  std::vector<GroupRingElement> extra(a[0].size(), zero);
  extra.back() = any.constant(1);
  a.push_back(extra);
  auto r3 = random_element(G, rng, -2, 2, any.ring(), any.modulus());
  for (std::size_t k = 0; k < a[0].size(); ++k) a[0][k] = a[0][k] + r3 * a.back()[k];
  return a;
}

inline InertiaDatum datum(const AbelianGroup& G, std::vector<int> decomposition, int frobenius) {
  InertiaDatum d;
  d.inertia = G.subgroup(decomposition);
  d.decomposition = std::move(decomposition);
  d.frobenius = frobenius;
  d.validate(G);
  return d;
}

}  // namespace bstark_test
