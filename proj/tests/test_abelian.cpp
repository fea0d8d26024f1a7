#include "doctest.h"
#include "oracles.hpp"

#include "torsion/abelian.hpp"
#include "torsion/normal_form.hpp"

#include <random>

using namespace torsion;

TEST_CASE("canonical invariant factors") {
  auto a = FGAbelian::from_cyclic({4, 6, 0, 1});
  CHECK(a.invariant_factors() == std::vector<Integer>{2, 12});
  CHECK(a.free_rank() == 1);
  CHECK(a.to_string() == "Z x Z/2 x Z/12");
  CHECK(a.torsion() == 24);
  CHECK(a.p_torsion(2) == 8);
  CHECK(a.p_torsion(3) == 3);
  CHECK_FALSE(a.order());
  CHECK(FGAbelian().to_string() == "0");
  CHECK(FGAbelian::from_cyclic({0, 0}).to_string() == "Z^2");
}

TEST_CASE("localization at p keeps the p-part") {
  auto a = FGAbelian::from_cyclic({4, 6, 0}, Locality::at(2));
  CHECK(a.invariant_factors() == std::vector<Integer>{2, 4});
  CHECK(a.torsion() == 8);
  CHECK(a.dim() == 1);
  CHECK(FGAbelian::from_cyclic({9, 5}, Locality::at(5)).to_string() == "Z/5");
}

TEST_CASE("relation matrix torsion matches minor gcds") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 80; ++t) {
    auto m = oracle::random_matrix(rng, 1 + rng() % 4, 1 + rng() % 4, -12, 12);
    auto g = FGAbelian::from_relation_matrix(m);
    CHECK(g.torsion() == oracle::torsion_by_minors(m));
    CHECK(g.free_rank() == m.cols() - rank(m));
    for (unsigned long p : {2ul, 3ul})
      CHECK(FGAbelian::from_relation_matrix(m, Locality::at(p)).torsion() ==
            oracle::p_part(oracle::torsion_by_minors(m), p));
  }
}

TEST_CASE("exponent quotient") {
  auto a = FGAbelian::from_cyclic({0, 8, 3});
  CHECK(a.exponent_quotient(4).to_string() == "Z/4 x Z/4");
  CHECK(a.exponent_quotient(6).to_string() == "Z/6 x Z/6");
  CHECK(a.exponent_quotient(1).to_string() == "0");
}

TEST_CASE("growth function extension") {
  GrowthFunction f;
  CHECK(f(1) == 2);
  CHECK(f(4) == 5);
  CHECK(f(0) == 2);
  auto g = GrowthFunction::from_json(R"({"1":2,"3":10})");
  CHECK(g(2) == 3);
  CHECK(g(3) == 10);
  CHECK(g(5) == 12);
  CHECK(GrowthFunction::from_json(g.to_json())(5) == 12);
  CHECK_THROWS(GrowthFunction::from_json("[1,2]"));
  CHECK_THROWS(GrowthFunction::from_json(R"({"a":1})"));
}

TEST_CASE("enumerated families") {
  // Abelian groups of order 1..8: 1, 1, 1, 2, 1, 1, 1, 3.
  CHECK(finite_abelian_groups_up_to(8).size() == 11);
  // Number of index-n sublattices of Z^2 is sigma(n).
  CHECK(sublattices_up_to_index(2, 4).size() == 1 + 3 + 4 + 7);
  CHECK(sublattices_up_to_index(3, 2).size() == 1 + 7);
}

TEST_CASE("torsion lemma suites on small bounds") {
  TorsionLemmaLimits b;
  b.max_exp = 2;
  b.part = 1;
  auto r1 = check_torsion_lemma(b);
  CHECK(r1.ok());
  CHECK(r1.hypotheses_met > 0);
  b.part = 2;
  auto r2 = check_torsion_lemma(b);
  CHECK(r2.ok());
  CHECK(r2.hypotheses_met > 0);
  IndexBoundLimits e;
  e.max_order = 16;
  e.max_index = 4;
  auto r3 = check_index_bound(e);
  CHECK(r3.ok());
  CHECK(r3.pairs_examined > 0);
}
