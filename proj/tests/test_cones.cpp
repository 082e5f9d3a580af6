#include "bstark/cones.hpp"
#include "bstark/field.hpp"

#include "doctest.h"
#include "support.hpp"

#include <random>

using namespace bstark;
using namespace bstark_test;

namespace {

using RVec = ExactVector<Rat>;
using QVec = ExactVector<QuadReal>;

RVec random_positive(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> num(1, 997), den(1, 97);
  RVec v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(Rat(num(rng), den(rng)));
  for (auto& c : v) c.canonicalize();
  return v;
}

}  // namespace

TEST_CASE("colmez closure positive subsets") {
  auto C1 = colmez_closure<Rat>({{Rat(1)}});
  CHECK(C1.positive_subsets == std::vector<std::vector<int>>{{0}});
  auto C2 = colmez_closure<Rat>({{Rat(1), Rat(1)}, {Rat(1), Rat(2)}});
  CHECK(C2.q == std::vector<Rat>{Rat(-1), Rat(1)});
  CHECK(C2.positive_subsets == std::vector<std::vector<int>>{{0, 1}, {0}});
  CHECK_FALSE(C2.boundary);
  // e_3 lies on the plane of v_1, v_2, so q_3 = 0 and every J must contain v_1 and v_3
  auto C3 = colmez_closure<Rat>({{Rat(1), Rat(1), Rat(1)}, {Rat(1), Rat(1), Rat(2)}, {Rat(2), Rat(1), Rat(1)}});
  CHECK(C3.q == std::vector<Rat>{Rat(-1), Rat(1), Rat(0)});
  CHECK(C3.boundary);
  CHECK(C3.positive_subsets == std::vector<std::vector<int>>{{0, 1, 2}, {0, 2}});
  CHECK_THROWS_AS(colmez_closure<Rat>({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}), ConfigError);
}

TEST_CASE("faces of a colmez closure are disjoint") {
  std::mt19937_64 rng(3);
  std::vector<std::vector<RVec>> bases = {
      {{Rat(1), Rat(1)}, {Rat(2), Rat(1, 2)}},
      {{Rat(1), Rat(1), Rat(1)}, {Rat(2), Rat(3), Rat(1, 6)}, {Rat(10), Rat(3, 2), Rat(1, 60)}},
      {{Rat(1), Rat(1), Rat(1)}, {Rat(5), Rat(1, 2), Rat(1, 10)}, {Rat(10), Rat(3, 2), Rat(1, 60)}},
  };
  std::uniform_int_distribution<long> t(1, 50);
  for (const auto& base : bases) {
    auto C = colmez_closure(base);
    for (const auto& face : C.faces()) {
      for (int trial = 0; trial < 20; ++trial) {
        RVec x(base.size(), Rat(0));
        for (const auto& g : face.generators()) {
          Rat c(t(rng), t(rng));
          for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * g[i];
        }
        CHECK(C.multiplicity(x) == 1);
      }
    }
  }
}

TEST_CASE("rank one domain") {
  auto D = signed_fundamental_domain<Rat>({}, 1);
  REQUIRE(D.terms.size() == 1);
  CHECK(D.terms[0].weight == 1);
  CHECK(weight_sum<Rat>({Rat(7, 3)}, D) == 1);
}

TEST_CASE("rational plane domain matches the half-open ratio tiling") {
  // Unit (2, 1/2) multiplies the ratio x1/x2 by 4; C*((1,1),(2,1/2)) must be
  // exactly the points with ratio in (1, 4].
  auto D = signed_fundamental_domain<Rat>({{Rat(2), Rat(1, 2)}}, 2);
  REQUIRE(D.terms.size() == 1);
  CHECK(D.terms[0].weight == 1);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    RVec x = random_positive(rng, 2);
    if (i % 7 == 0) x[0] = 4 * x[1];
    if (i % 11 == 0) x[0] = x[1];
    Rat r = x[0] / x[1];
    bool in_tile = r > 1 && r <= 4;
    CHECK(D.terms[0].closure.contains(x) == in_tile);
    CHECK(weight_sum(x, D) == 1);
  }
}

TEST_CASE("real quadratic domains are signed fundamental") {
  std::mt19937_64 rng(17);
  for (long d : {2L, 5L, 13L}) {
    QuadField F(d);
    FieldElement eps = shintani_unit(F, F.ideal(3)).epsilon;
    auto D = signed_fundamental_domain<QuadReal>({embed(eps)}, 2);
    auto Dinv = signed_fundamental_domain<QuadReal>({embed(F.elt(1) / eps)}, 2);
    REQUIRE(D.terms.size() == 1);
    CHECK(D.terms[0].weight == 1);
    CHECK(D.terms[0].closure.positive_subsets == std::vector<std::vector<int>>{{0, 1}, {1}});
    CHECK(Dinv.terms[0].weight == 1);
    CHECK(Dinv.orientation == -1);
    for (int i = 0; i < 200; ++i) {
      FieldElement x = random_totally_positive(F, rng);
      CHECK(weight_sum(embed(x), D) == 1);
      CHECK(weight_sum(embed(x), Dinv) == 1);
    }
    // boundary rays: 1 and eps themselves and their translates
    for (long k = -3; k <= 3; ++k) {
      CHECK(weight_sum(embed(eps.pow(k)), D) == 1);
      CHECK(weight_sum(embed(eps.pow(k) * F.elt(2, 1) * F.elt(2, 1).conj()), D) == 1);
    }
  }
}

TEST_CASE("cubic rational domains are signed fundamental") {
  std::vector<RVec> units = {{Rat(2), Rat(3), Rat(1, 6)}, {Rat(5), Rat(1, 2), Rat(1, 10)}};
  auto D = signed_fundamental_domain<Rat>(units, 3);
  auto Dswap = signed_fundamental_domain<Rat>({units[1], units[0]}, 3);
  CHECK(D.orientation == -Dswap.orientation);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    RVec x = random_positive(rng, 3);
    CHECK(weight_sum(x, D) == 1);
    CHECK(weight_sum(x, Dswap) == 1);
  }
  // points on the domain's own rays
  CHECK(weight_sum<Rat>({Rat(1), Rat(1), Rat(1)}, D) == 1);
  CHECK(weight_sum(units[0], D) == 1);
}
