#include "bstark/padic.hpp"

#include "doctest.h"

#include <map>
#include <random>

using namespace bstark;

namespace {

FieldElement random_integral(const QuadField& F, std::mt19937_64& rng, long h) {
  std::uniform_int_distribution<long> c(-h, h);
  return F.elt(c(rng), c(rng));
}

}  // namespace

TEST_CASE("p-adic ring laws follow the field") {
  std::mt19937_64 rng(3);
  for (long d : {5L, 2L, 13L}) {
    QuadField F(d);
    long p = d == 5 ? 7 : (d == 2 ? 13 : 7);
    REQUIRE(F.splitting_symbol(p) == -1);
    for (int t = 0; t < 300; ++t) {
      FieldElement a = random_integral(F, rng, 10000), b = random_integral(F, rng, 10000);
      auto pa = PadicElement::from_field(F, p, 6, a), pb = PadicElement::from_field(F, p, 6, b);
      CHECK(pa * pb == PadicElement::from_field(F, p, 6, a * b));
      CHECK(pa + pb == PadicElement::from_field(F, p, 6, a + b));
      CHECK(pa - pb == PadicElement::from_field(F, p, 6, a - b));
      CHECK(pa.norm() == mod_pos(a.norm().get_num(), pa.modulus()));
      CHECK((pa * pb).norm() == mod_pos(pa.norm() * pb.norm(), pa.modulus()));
      CHECK(pa.trace() == mod_pos(a.trace().get_num(), pa.modulus()));
      if (pa.is_unit()) {
        CHECK(pa * pa.inverse() == PadicElement(F, p, 6, 1, 0));
        CHECK(pa.pow(-3) * pa.pow(3) == PadicElement(F, p, 6, 1, 0));
        // 1/b for p-integral b
        CHECK(PadicElement::from_field(F, p, 6, F.elt(1) / a) == pa.inverse());
      }
    }
  }
}

TEST_CASE("p-adic precision bookkeeping") {
  QuadField F(5);
  auto x = PadicElement(F, 7, 5, 49 * 3, 49 * 2);
  CHECK(x.valuation() == 2);
  auto y = x.divide_by_p(2);
  CHECK(y.precision() == 3);
  CHECK(y == PadicElement(F, 7, 3, 3, 2));
  CHECK_THROWS_AS(x.divide_by_p(3), PrecisionError);
  CHECK_THROWS_AS(x.inverse(), PrecisionError);
  CHECK(PadicElement(F, 7, 4, 0, 0).valuation() == 4);
  CHECK(x.with_precision(2).is_zero());
  CHECK_THROWS_AS(PadicElement::from_field(F, 7, 3, F.elt(Rat(1, 7), 0)), ConfigError);
  CHECK(PadicElement::from_field(F, 7, 3, F.elt(Rat(1, 2), 0)) * PadicElement(F, 7, 3, 2, 0) == PadicElement(F, 7, 3, 1, 0));
}

TEST_CASE("recognition round trips and rejects random residues") {
  QuadField F(5);
  auto x = PadicElement::from_field(F, 7, 10, F.elt(3, -2));
  auto r = recognize(F, x, Int(100));
  REQUIRE(r);
  CHECK(*r == F.elt(3, -2));
  CHECK_THROWS_AS(recognize(F, PadicElement(F, 7, 2, 1, 1), Int(100)), PrecisionError);

  std::mt19937_64 rng(17);
  const long B = 1000;
  const int m = 8;  // 7^8 = 5764801 > 2 * 10^6
  int recovered = 0;
  for (int t = 0; t < 1000; ++t) {
    FieldElement a = random_integral(F, rng, B);
    auto rec = recognize(F, PadicElement::from_field(F, 7, m, a), Int(B));
    if (rec && *rec == a) ++recovered;
  }
  CHECK(recovered == 1000);

  // bound far below p^(m/2): random residues almost never have a small lift
  std::uniform_int_distribution<long> res(0, 5764800);
  int accepted = 0;
  for (int t = 0; t < 1000; ++t) {
    if (recognize(F, PadicElement(F, 7, m, res(rng), res(rng)), Int(50))) ++accepted;
  }
  CHECK(accepted == 0);

  auto esc = recognize_escalating(F, PadicElement::from_field(F, 7, m, F.elt(-700, 13)));
  REQUIRE(esc.value);
  CHECK(*esc.value == F.elt(-700, 13));
  auto low = recognize_escalating(F, PadicElement::from_field(F, 7, 3, F.elt(-4273, 0)));
  CHECK_FALSE(low.value);
  CHECK_FALSE(low.detail.empty());
}

TEST_CASE("principal parts and square roots") {
  QuadField F(5);
  std::mt19937_64 rng(5);
  const long p = 7;
  const int m = 6;
  PadicElement one(F, p, m, 1, 0);
  for (int t = 0; t < 200; ++t) {
    FieldElement a = random_integral(F, rng, 500);
    auto u = PadicElement::from_field(F, p, m, a);
    if (!u.is_unit()) continue;
    auto w = principal_part(u);
    CHECK(w.congruent(one, 1));
    // u / <u> is a (p^2 - 1)-th root of unity
    CHECK((u * w.inverse()).pow(Int(p * p - 1)) == one);
    HatUnitValue h{Rat(t % 5 - 2) * 2, w};
    auto s = h.sqrt();
    CHECK((s * s).matches(h));
    CHECK(h.pow(Rat(1, 3)).pow(Rat(3)).matches(h));
    CHECK((h * h.inverse()).is_one());
  }
  // p^e u values
  auto u = PadicUnitValue{3, PadicElement(F, p, m, 2, 5)};
  CHECK((u * u.inverse()).matches(PadicUnitValue{0, one}));
  CHECK(HatUnitValue::from(PadicUnitValue{0, PadicElement(F, p, m, 3, 0).pow(Int(48))}).principal ==
        PadicElement(F, p, m, 3, 0).pow(Int(48)));
}

TEST_CASE("riemann products") {
  QuadField F(5);
  const long p = 7;
  PadicElement one2(F, p, 2, 1, 0);
  CHECK(riemann_product(F, p, 2, [](long) { return 0L; }) == one2);
  const long target = 3 * 49 + 10;
  CHECK(riemann_product(F, p, 2, [&](long i) { return i == target ? 1L : 0L; }) ==
        coset_representative(F, p, 2, target));

  // additive measure: random values at level 2, summed for level 1
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> val(-5, 5);
  std::map<long, long> nu;
  for (long i = 0; i < 49 * 49; ++i) nu[i] = val(rng);
  auto level1 = [&](long idx) {
    long x = idx / 7, y = idx % 7;
    long s = 0;
    for (long i = 0; i < 7; ++i)
      for (long j = 0; j < 7; ++j) s += nu[(x + 7 * i) * 49 + (y + 7 * j)];
    return s;
  };
  auto p2 = riemann_product(F, p, 2, [&](long i) { return nu[i]; });
  auto p1 = riemann_product(F, p, 1, level1);
  CHECK(p2.congruent(p1, 1));

  // accumulator against direct powers, with merging
  RiemannAccumulator a(F, p, 2), b(F, p, 2);
  PadicElement direct = one2;
  long n = 0;
  for (long i = 0; i < 49 * 49; ++i) {
    if ((i / 49) % 7 == 0 && (i % 49) % 7 == 0) continue;
    (n++ % 2 ? a : b).add(i, nu[i]);
    direct = direct * coset_representative(F, p, 2, i).pow(Int(nu[i]));
  }
  a.merge(b);
  CHECK(a.result() == direct);
  CHECK(a.cosets() == 48 * 49);
  CHECK_THROWS(a.add(7 * 49 + 14, 1));
}
