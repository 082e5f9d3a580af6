#include "bstark/zeta.hpp"

#include "doctest.h"
#include "support.hpp"

#include <mpfr.h>

#include <random>

using namespace bstark;
using namespace bstark_test;

namespace {

// Lattice points of (shift + L) in {t1 w1 + t2 w2 : 0 < t_i <= 1}, by brute force.
std::size_t parallelogram_points(const QuadField& F, const Lattice2& L, const FieldElement& shift,
                                 const FieldElement& w1, const FieldElement& w2) {
  FieldElement e1(L.x1, L.y1, F.d()), e2(Rat(0), L.y2, F.d());
  // express w1, w2 in lattice coordinates to bound the search box
  auto kc = [&](const FieldElement& x) {
    Rat k1 = x.a() / L.x1;
    return std::array<Rat, 2>{k1, (x.b() - k1 * L.y1) / L.y2};
  };
  auto a = kc(w1), b = kc(w2), s = kc(shift);
  long lim1 = to_long(floor_rat(abs(a[0]) + abs(b[0]))) + 2;
  long lim2 = to_long(floor_rat(abs(a[1]) + abs(b[1]))) + 2;
  Rat det = w1.a() * w2.b() - w2.a() * w1.b();
  std::size_t count = 0;
  for (long i = -lim1; i <= lim1; ++i) {
    for (long j = -lim2; j <= lim2; ++j) {
      FieldElement y = shift + Rat(i - to_long(floor_rat(s[0]))) * e1 + Rat(j - to_long(floor_rat(s[1]))) * e2;
      Rat t1 = (y.a() * w2.b() - w2.a() * y.b()) / det;
      Rat t2 = (w1.a() * y.b() - y.a() * w1.b()) / det;
      if (t1 > 0 && t1 <= 1 && t2 > 0 && t2 <= 1) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("rank one cone values match the Hurwitz continuation") {
  QuadField F(5);
  Lattice2 O = F.ideal(1).basis();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<long> den(1, 997);
  mpfr_t h;
  mpfr_init2(h, 256);
  for (int i = 0; i < 100; ++i) {
    long q = den(rng);
    std::uniform_int_distribution<long> num(1, q);
    Rat x(num(rng), q);
    x.canonicalize();
    Rat v = cone_zeta_at_zero(F, {F.elt(1)}, O, F.elt(x, 0));
    CHECK(v == Rat(1, 2) - x);
    hurwitz_em(h, 0.0, x, 12, 8);
    CHECK(distance(h, v) < 1e-20);
  }
  CHECK(cone_zeta_at_zero(F, {F.elt(1)}, O, F.elt(1)) == Rat(-1, 2));
  CHECK(cone_zeta_at_zero(F, {F.elt(1)}, O, F.elt(Rat(1, 2), 0)) == 0);
  // shifts off the ray's lattice line contribute nothing
  CHECK(cone_zeta_at_zero(F, {F.elt(1)}, O, F.elt(Rat(1, 2), Rat(1, 3))) == 0);
  mpfr_clear(h);
}

TEST_CASE("rank two fractional point sets match brute-force enumeration") {
  QuadField F(5);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> c(-5, 5);
  FieldElement eps = shintani_unit(F, F.ideal(3)).epsilon;
  for (const IdealF& I : {F.ideal(3), F.ideal(F.elt(2, 1)), F.inverse(F.ideal(F.elt(3, 1)))}) {
    ConePlan plan(F, {F.elt(1), eps}, I.basis());
    for (int t = 0; t < 5; ++t) {
      FieldElement shift = F.elt(Rat(c(rng), 7), Rat(c(rng), 11));
      auto pts = plan.fractional_points(shift);
      CHECK(pts.size() == plan.point_classes());
      CHECK(parallelogram_points(F, I.basis(), shift, plan.primitive_generators()[0],
                                 plan.primitive_generators()[1]) == pts.size());
    }
  }
}

TEST_CASE("subdividing a cone along an interior ray preserves its zeta value") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> c(-6, 6);
  for (long d : {5L, 2L, 13L}) {
    QuadField F(d);
    FieldElement eps = shintani_unit(F, F.ideal(3)).epsilon;
    for (const FieldElement& v : {F.elt(1) + eps, F.elt(2) + eps * F.elt(3), F.elt(3) + eps}) {
      REQUIRE(v.totally_positive());
      for (const IdealF& I : {F.ideal(3), F.ideal(F.elt(1, 1))}) {
        for (int t = 0; t < 3; ++t) {
          FieldElement shift = F.elt(Rat(c(rng), 5), Rat(c(rng), 3));
          Rat whole = cone_zeta_at_zero(F, {F.elt(1), eps}, I.basis(), shift);
          Rat split = cone_zeta_at_zero(F, {F.elt(1), v}, I.basis(), shift) +
                      cone_zeta_at_zero(F, {v}, I.basis(), shift) +
                      cone_zeta_at_zero(F, {v, eps}, I.basis(), shift);
          CHECK(whole == split);
        }
      }
    }
  }
}

TEST_CASE("narrow class partial zeta values agree with genus theory") {
  // For F with narrow class number 2 and genus field F(sqrt(-a), sqrt(-b)),
  // zeta(0, C_1) - zeta(0, C_2) = L(0, chi_{-a}) L(0, chi_{-b}) and the sum is zeta_F(0) = 0.
  struct Case {
    long d;
    Rat diff;
  };
  for (const auto& cs : {Case{3, Rat(1, 6)}, Case{6, Rat(1, 3)}, Case{7, Rat(1, 2)}, Case{21, Rat(1, 3)}}) {
    QuadField F(cs.d);
    IdealF one = F.ideal(1);
    RayClassGroup G(F, one);
    REQUIRE(G.size() == 2);
    ZetaEngine engine(F, one, shintani_unit(F, one).epsilon);
    auto z = partial_zeta_values(engine, G, Int(1));
    CHECK(z[0] + z[1] == 0);
    CHECK(z[0] - z[1] == cs.diff);
  }
}

TEST_CASE("canonical shift") {
  QuadField F(5);
  IdealF n = F.ideal(3);
  for (const IdealF& b : {F.ideal(1), F.ideal(F.elt(2, 1)), F.inverse(F.primes_above(11)[0].ideal)}) {
    FieldElement z = canonical_shift(F, b, n);
    CHECK(F.inverse(b).contains(z));
    ResidueRing R(F, n);
    CHECK(R.reduce(z) == R.one());
  }
  CHECK(canonical_shift(F, F.ideal(1), n) == F.elt(1));
}

TEST_CASE("coset values add up to the full value") {
  QuadField F(5);
  IdealF n = F.ideal(3);
  ZetaEngine engine(F, n, shintani_unit(F, n).epsilon);
  RayClassGroup G(F, n);
  for (int s = 0; s < G.size(); ++s) {
    IdealF b = G.ideal_in_class(s, Int(3 * 7 * 11));
    Rat all = engine.zeta_all(b);
    for (int m : {1, 2}) {
      CosetZeta cz(F, b, n, engine.domain(), PadicLevel(7, m));
      CHECK(cz.fast_path());
      Rat total = 0;
      for (long a = 0; a < cz.level().count; ++a) total += cz.value(a);
      CHECK(total == all);
      std::mt19937_64 rng(s * 10 + m);
      std::uniform_int_distribution<long> pick(0, cz.level().count - 1);
      for (int t = 0; t < 20; ++t) {
        long a = pick(rng);
        CHECK(cz.value(a) == cz.exact_value(a));
      }
    }
  }
}

TEST_CASE("partial zeta values do not depend on the ideal or the domain") {
  QuadField F(5);
  IdealF n = F.ideal(3);
  FieldElement eps = shintani_unit(F, n).epsilon;
  ZetaEngine up(F, n, eps);
  ZetaEngine down(F, n, F.elt(1) / eps);
  RayClassGroup G(F, n);
  for (int s = 0; s < G.size(); ++s) {
    IdealF b1 = G.ideal_in_class(s, Int(3));
    // 4 + 3 omega is totally positive and congruent to 1 mod 3
    IdealF b2 = F.mul(b1, F.ideal(F.elt(4, 3)));
    CHECK_FALSE(b1 == b2);
    CHECK(up.zeta_all(b1) == up.zeta_all(b2));
    CHECK(up.zeta_all(b1) == down.zeta_all(b1));
  }
}

TEST_CASE("stickelberger elements satisfy their invariants") {
  struct Cfg {
    long d, n, p, ell;
  };
  for (const auto& c : {Cfg{5, 3, 7, 11}, Cfg{5, 6, 7, 11}, Cfg{2, 3, 13, 7}, Cfg{13, 3, 7, 17}, Cfg{2, 5, 11, 7},
                        Cfg{5, 4, 13, 11}}) {
    QuadField F(c.d);
    auto cfg = make_zeta_config(F, F.ideal(c.n), c.p, c.ell);
    StickelbergerElement theta;
    CHECK_NOTHROW(theta = stickelberger(cfg));
    RayClassGroup G(F, cfg.conductor);
    CHECK(stickelberger_violation(theta, G, true).empty());
  }
}

TEST_CASE("default configuration stickelberger values") {
  QuadField F(5);
  auto cfg = make_zeta_config(F, F.ideal(3), 7, 11);
  auto theta = stickelberger(cfg);
  RayClassGroup G(F, cfg.conductor);
  REQUIRE(G.size() == 2);
  CHECK(theta.coefficients == std::vector<Rat>{Rat(4), Rat(-4)});
}


TEST_CASE("odd character values agree with Dirichlet L-values") {
  // For n = (3) and #G = 2, H = F(sqrt(-3)) and the odd character is chi_{-3} o N,
  // so L(chi, 0) = L(0, chi_{-3}) L(0, chi_{-3 disc}) and the T-factor is 1 - chi(l) ell.
  CHECK(dirichlet_l0(-3) == Rat(1, 3));
  CHECK(dirichlet_l0(-4) == Rat(1, 2));
  struct Cfg {
    long d, p, ell;
  };
  for (const auto& c : {Cfg{5, 7, 11}, Cfg{2, 13, 7}, Cfg{17, 7, 13}, Cfg{29, 19, 5}, Cfg{53, 19, 7}}) {
    QuadField F(c.d);
    auto cfg = make_zeta_config(F, F.ideal(3), c.p, c.ell);
    RayClassGroup G(F, cfg.conductor);
    REQUIRE(G.size() == 2);
    auto theta = stickelberger(cfg);
    Rat chi_theta = theta.coefficients[0] - theta.coefficients[1];
    long chi_l = mpz_kronecker_si(Int(-3).get_mpz_t(), c.ell);
    Rat expected = dirichlet_l0(-3) * dirichlet_l0(-3 * F.discriminant()) * Rat(1 - chi_l * c.ell);
    CHECK(chi_theta == expected);
  }
}

TEST_CASE("stickelberger elements do not depend on the domain or on z") {
  struct Cfg {
    long d, n, p, ell;
  };
  for (const auto& c : {Cfg{5, 3, 7, 11}, Cfg{5, 6, 7, 11}, Cfg{2, 5, 11, 7}, Cfg{13, 3, 7, 17}, Cfg{5, 4, 13, 11}}) {
    QuadField F(c.d);
    auto cfg = make_zeta_config(F, F.ideal(c.n), c.p, c.ell);
    RayClassGroup G(F, cfg.conductor);
    FieldElement eps = shintani_unit(F, cfg.conductor).epsilon;
    ZetaEngine base(F, cfg.conductor, eps);
    ZetaEngine inverse(F, cfg.conductor, F.elt(1) / eps);
    ZetaEngine moved(F, cfg.conductor, eps, ShiftChoice::translated);
    auto t0 = stickelberger(cfg, base, G);
    CHECK(stickelberger(cfg, inverse, G).coefficients == t0.coefficients);
    CHECK(stickelberger(cfg, moved, G).coefficients == t0.coefficients);
    IdealF b = G.ideal_in_class(G.size() - 1, Int(c.n * c.p * c.ell));
    CHECK_FALSE(base.shift_for(b) == moved.shift_for(b));
  }
}

TEST_CASE("invalid shifts are rejected") {
  QuadField F(5);
  IdealF n = F.ideal(3);
  ZetaEngine engine(F, n, shintani_unit(F, n).epsilon);
  CHECK_THROWS_AS(CosetZeta(F, F.ideal(1), n, engine.domain(), PadicLevel(7, 1), F.elt(2)), ConfigError);
  CHECK_THROWS_AS(CosetZeta(F, F.ideal(1), n, engine.domain(), PadicLevel(7, 1), F.elt(Rat(1, 2), 0)), ConfigError);
  CHECK_NOTHROW(CosetZeta(F, F.ideal(1), n, engine.domain(), PadicLevel(7, 1), F.elt(4)));
}

TEST_CASE("theta at lower levels") {
  QuadField F(5);
  auto cfg = make_zeta_config(F, F.ideal(6), 7, 11);
  RayClassGroup G(F, cfg.conductor);
  CHECK(stickelberger_at_level(cfg, cfg.conductor, G).coefficients == stickelberger(cfg).coefficients);
  CHECK_THROWS_AS(stickelberger_at_level(cfg, F.ideal(5), RayClassGroup(F, F.ideal(5))), ConfigError);

  // Route 1: chi(Theta_{S,T}) at level n. Route 2: the value at the conductor f of chi times
  // the Euler factors (1 - chi^{-1}(v)) for v | n, v not dividing f.
  auto theta_n = stickelberger(cfg).group_ring(G.group());
  int strict = 0;
  for (const auto& chi : characters(G.group())) {
    IdealF f = character_conductor(G, chi);
    if (f == cfg.conductor) continue;
    ++strict;
    RayClassGroup Gf(F, f);
    auto proj = G.projection_to(Gf);
    Character chi_f{chi.e, std::vector<int>(static_cast<std::size_t>(Gf.size()), 0)};
    for (int s = 0; s < G.size(); ++s) chi_f.values[static_cast<std::size_t>(proj[static_cast<std::size_t>(s)])] = chi.value(s);
    Cyclotomic route2 = character_value(chi_f, stickelberger_at_level(cfg, f, Gf).group_ring(Gf.group()));
    for (const auto& [P, e] : F.factor(cfg.conductor)) {
      if (P.ideal.divides(f)) continue;
      int v = Gf.class_of(P.ideal);
      route2 = route2 * (Cyclotomic(chi.e, Rat(1)) - Cyclotomic::root(chi.e, chi_f.conj_value(v)));
    }
    CHECK(character_value(chi, theta_n) == route2);
  }
  CHECK(strict > 0);
}

TEST_CASE("theta with only archimedean depletion") {
  struct Cfg {
    long d, n, p, ell;
  };
  for (const auto& c : {Cfg{5, 3, 7, 11}, Cfg{5, 6, 7, 11}, Cfg{5, 4, 13, 11}, Cfg{2, 5, 11, 7}}) {
    QuadField F(c.d);
    auto cfg = make_zeta_config(F, F.ideal(c.n), c.p, c.ell);
    RayClassGroup G(F, cfg.conductor);
    auto inf = stickelberger_infinite(cfg);
    Int bound = 1;
    for (const auto& [P, e] : F.factor(cfg.conductor)) bound *= Int(static_cast<long>(G.inertia_subgroup(P.ideal).size()));
    for (const auto& x : inf.coefficients) CHECK(bound % x.get_den() == 0);
    Rat aug = 0;
    for (const auto& x : inf.coefficients) aug += x;
    CHECK(aug == 0);
    // S = S_infinity plus the primes of n: the depleted element is recovered by the Euler factors.
    auto theta = stickelberger(cfg).group_ring(G.group());
    auto inf_g = inf.group_ring(G.group());
    for (const auto& chi : characters(G.group())) {
      IdealF f = character_conductor(G, chi);
      RayClassGroup Gf(F, f);
      Cyclotomic expected = character_value(chi, inf_g);
      for (const auto& [P, e] : F.factor(cfg.conductor)) {
        if (P.ideal.divides(f)) continue;
        int v = Gf.class_of(P.ideal);
        auto proj = G.projection_to(Gf);
        int lift = 0;
        while (proj[static_cast<std::size_t>(lift)] != v) ++lift;
        expected = expected * (Cyclotomic(chi.e, Rat(1)) - Cyclotomic::root(chi.e, chi.conj_value(lift)));
      }
      CHECK(character_value(chi, theta) == expected);
    }
    // The odd-character product of Theta^# is a nonzero rational integer.
    std::vector<Rat> sharp(inf_g.size());
    for (int g = 0; g < G.size(); ++g) sharp[static_cast<std::size_t>(g)] = inf_g[static_cast<std::size_t>(G.group().inv(g))];
    Cyclotomic prod = odd_character_product(sharp, G);
    REQUIRE(prod.is_rational());
    CHECK(prod.rational_value() != 0);
    CHECK(is_integer(prod.rational_value()));
  }
}
