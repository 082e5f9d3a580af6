#include "bstark/pipeline.hpp"

#include "doctest.h"

#include <climits>

using namespace bstark;

namespace {

// Default configuration d=5, n=(3), p=7, l=11: H = F(sqrt -3) and the unit is
// zeta (pi / pi-bar)^4 with pi = 2 + sqrt -3, the root of unity fixed by u = 1 mod l.
// Its minimal polynomial over F, derived by hand, is 2401 X^2 + 4273 X + 2401.
const long kP0 = 2401, kP1 = 4273;

struct Default {
  QuadField F{5};
  ZetaConfig cfg = make_zeta_config(F, F.ideal(3), 7, 11);
  Pipeline pl{cfg};
};

Default& fixture() {
  static Default s;
  return s;
}

// The oracle polynomial at p^e w, scaled so that the result is a unit-level
// condition on w modulo p^m.
PadicElement oracle_at(const PadicUnitValue& v) {
  const PadicElement& w = v.unit;
  const Int p8 = ipow(Int(7), 8);
  if (v.exponent == 4) {
    // P(7^4 w) / 7^4 = 7^8 w^2 + 4273 w + 1
    return w.scalar(p8) * w * w + w.scalar(kP1) * w + w.scalar(1);
  }
  REQUIRE(v.exponent == -4);
  // 7^4 P(w / 7^4) = w^2 + 4273 w + 7^8
  return w * w + w.scalar(kP1) * w + w.scalar(p8);
}

BSPolynomial oracle_polynomial(const QuadField& F) {
  BSPolynomial P;
  P.coefficients = {F.elt(1), F.elt(make_rat(kP1, kP0), Rat(0)), F.elt(1)};
  return P;
}

}  // namespace

TEST_CASE("analytic units are stable in m and have valuation zeta_{S,T}") {
  auto& s = fixture();
  auto u2 = analytic_units(s.pl, 2);
  auto u3 = analytic_units(s.pl, 3);
  REQUIRE(u2.size() == 2);
  for (std::size_t i = 0; i < u2.size(); ++i) {
    CHECK(Rat(u3[i].value.exponent) == s.pl.theta().coefficients[i]);
    CHECK(u2[i].value.exponent == u3[i].value.exponent);
    CHECK(u3[i].value.unit.congruent(u2[i].value.unit, 2));
    CHECK(u3[i].value.unit.is_unit());
    CHECK(u3[i].provenance.find("m=3") != std::string::npos);
  }
}

TEST_CASE("analytic units are roots of the hand-derived polynomial") {
  auto& s = fixture();
  for (int m : {2, 3}) {
    for (const auto& u : analytic_units(s.pl, m)) CHECK(oracle_at(u.value).is_zero());
  }
}

TEST_CASE("v_p identity holds for every class") {
  auto& s = fixture();
  IdealF q = s.pl.conjugation_ideal();
  for (int cls = 0; cls < s.pl.group().size(); ++cls) {
    IdealF b = s.pl.class_ideal(cls);
    HatUnitValue v1 = v_unit(s.pl, b, q, 3);
    HatUnitValue v2 = v_unit(s.pl, s.F.mul(b, q), q, 3);
    CHECK((v1 * v2).is_one());
  }
  CHECK_THROWS_AS(v_unit(s.pl, s.pl.class_ideal(0), s.pl.class_ideal(0), 3), ConfigError);
}

TEST_CASE("recognition of the default unit needs more precision than m=3") {
  auto& s = fixture();
  auto units = analytic_units(s.pl, 3);
  try {
    bs_polynomial(s.F, units);
    FAIL("expected a precision failure");
  } catch (const PrecisionError& e) {
    CHECK(std::string(e.what()).find("insufficient precision") != std::string::npos);
  }
  long N = 0;
  auto cleared = cleared_polynomial(units, N);
  CHECK(N == 4);
  // p^4 P = 7^{-4} (2401 X^2 + 4273 X + 2401) * 7^4 has middle coefficient 4273/2401 * 7^4
  CHECK(cleared[1] == cleared[1].scalar(kP1));
  CHECK(cleared[2] == cleared[2].scalar(ipow(Int(7), 4)));
}

TEST_CASE("verify_bs accepts the hand-derived polynomial") {
  auto& s = fixture();
  auto units = analytic_units(s.pl, 3);
  auto rep = verify_bs(s.pl, oracle_polynomial(s.F), units);
  INFO(rep.to_string());
  CHECK(rep.all_passed());
  CHECK(rep.get("a_valuations").witness.find("{-4, 4}") != std::string::npos);
}

TEST_CASE("verify_bs rejects perturbed polynomials") {
  auto& s = fixture();
  auto units = analytic_units(s.pl, 2);
  for (long delta : {-2L, -1L, 1L, 11L}) {
    BSPolynomial P = oracle_polynomial(s.F);
    P.coefficients[1] = s.F.elt(make_rat(kP1 + delta, kP0), Rat(0));
    auto rep = verify_bs(s.pl, P, units);
    INFO(delta << "\n" << rep.to_string());
    CHECK_FALSE((rep.get("c_T_congruence").passed && rep.get("d_splitting_law").passed));
  }
  BSPolynomial P = oracle_polynomial(s.F);
  P.coefficients[0] = s.F.elt(2);
  CHECK_FALSE(verify_bs(s.pl, P, units).all_passed());
}

TEST_CASE("a perturbed measure value moves the analytic unit off the polynomial") {
  Default s;
  IdealF b = s.pl.class_ideal(0);
  s.pl.set_mutation(MeasureMutation{b, PadicLevel(7, 2).index(3, 2), 1});
  auto u = analytic_unit(s.pl, b, 2);
  CHECK_FALSE(oracle_at(u.value).is_zero());
  s.pl.set_mutation(std::nullopt);
  CHECK(oracle_at(analytic_unit(s.pl, b, 2).value).is_zero());
}

TEST_CASE("bs_polynomial recovers a known polynomial from synthetic roots") {
  QuadField F{5};
  const long p = 7;
  const int m = 10;
  // (X - 49 omega)(X - omega' / 49)
  FieldElement r1 = F.omega(), r2 = F.omega().conj();
  AnalyticUnit a{0, F.ideal(1), m, {2, PadicElement::from_field(F, p, m, r1)}, ""};
  AnalyticUnit b{1, F.ideal(1), m, {-2, PadicElement::from_field(F, p, m, r2)}, ""};
  BSPolynomial P = bs_polynomial(F, {a, b});
  REQUIRE(P.coefficients.size() == 3);
  FieldElement x1 = F.elt(49) * r1, x2 = r2 / F.elt(49);
  CHECK(P.coefficients[0] == x1 * x2);
  CHECK(P.coefficients[1] == -(x1 + x2));
  CHECK(P.coefficients[2] == F.elt(1));
  CHECK(P.p_exponent == 2);
}

TEST_CASE("factor degrees modulo primes follow quadratic reciprocity") {
  QuadField F{5};
  // X^2 - 5 splits modulo every prime of F; X^2 + 1 splits iff -1 is a square in the residue field.
  std::vector<FieldElement> x2m5{F.elt(-5), F.elt(0), F.elt(1)};
  std::vector<FieldElement> x2p1{F.elt(1), F.elt(0), F.elt(1)};
  for (long q : {3L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
    for (const auto& Q : F.primes_above(q)) {
      auto d1 = factor_degrees_mod(F, x2m5, Q);
      REQUIRE(d1);
      CHECK(*d1 == std::vector<int>{1, 1});
      auto d2 = factor_degrees_mod(F, x2p1, Q);
      REQUIRE(d2);
      bool square = Q.residue_degree == 2 || q % 4 == 1;
      CHECK(*d2 == (square ? std::vector<int>{1, 1} : std::vector<int>{2}));
    }
  }
  // 11 splits in F and 3 does not divide 10, so X^3 - 1 = (X - 1)(X^2 + X + 1) there.
  std::vector<FieldElement> cubic{F.elt(-1), F.elt(0), F.elt(0), F.elt(1)};
  auto d = factor_degrees_mod(F, cubic, F.primes_above(11).front());
  REQUIRE(d);
  CHECK(*d == std::vector<int>{1, 2});
  // Inseparable modulo q
  std::vector<FieldElement> sq{F.elt(1), F.elt(-2), F.elt(1)};
  CHECK_FALSE(factor_degrees_mod(F, sq, F.primes_above(11).front()));
}

TEST_CASE("field valuation") {
  QuadField F{5};
  CHECK(field_valuation(F.elt(make_rat(49, 3), Rat(7)), 7) == 1);
  CHECK(field_valuation(F.elt(make_rat(1, 343), Rat(0)), 7) == -3);
  CHECK(field_valuation(F.elt(0), 7) == LONG_MAX);
}
