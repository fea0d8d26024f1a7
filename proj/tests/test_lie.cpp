#include "doctest.h"

#include "torsion/lie.hpp"
#include "torsion/report.hpp"

using namespace torsion;

TEST_CASE("heisenberg lattice") {
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    auto g = LieLattice::heisenberg(p);
    CHECK(g.rank() == 3);
    CHECK(g.bracket(Vec{1, 0, 0}, Vec{0, 1, 0}) == Vec{0, 0, Integer(p)});
    CHECK(g.bracket(Vec{0, 1, 0}, Vec{1, 0, 0}) == Vec{0, 0, -Integer(p)});
    CHECK(g.is_powerful() == (p != 2));
    CHECK(dimension_additive(g));
    CHECK(derived_sublattice(g) == Lattice::from_rows(IntMatrix{{0, 0, static_cast<long>(p)}}));
    for (unsigned long n = 0; n <= 6; ++n) {
      auto u = uniform_torsion_identity(g, n);
      CHECK(u.ok());
      CHECK(u.direct == ipow(p, n + 1));
    }
  }
}

TEST_CASE("abelian lattice has trivial torsion") {
  auto g = LieLattice::abelian(3, 4);
  CHECK(g.is_powerful());
  for (unsigned long n = 0; n <= 3; ++n) CHECK(uniform_torsion_identity(g, n).direct == 1);
}

TEST_CASE("structure constants are validated") {
  CHECK_THROWS_AS(LieLattice(4, 2, {}), std::invalid_argument);
  CHECK_THROWS_AS(LieLattice(2, 2, {{0, 0, Vec{1, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(LieLattice(2, 2, {{0, 1, Vec{1}}}), std::invalid_argument);
  // [e0, e1] = e1, [e0, e2] = e2 is a Lie algebra; [e1, e2] = e0 on top breaks Jacobi.
  LieLattice ok(3, 3, {{0, 1, Vec{0, 3, 0}}, {0, 2, Vec{0, 0, 3}}});
  CHECK(ok.satisfies_jacobi());
  CHECK_THROWS_AS(LieLattice(3, 3, {{0, 1, Vec{0, 1, 0}}, {0, 2, Vec{0, 0, 1}}, {1, 2, Vec{1, 0, 0}}}),
                  std::invalid_argument);
  auto parsed = LieLattice::from_json(R"({"rank": 3, "p": 5, "brackets": [[0, 1, 0, 0, 5]]})");
  CHECK(uniform_torsion_identity(parsed, 2).direct == 125);
  CHECK_THROWS(LieLattice::from_json(R"({"rank": 3, "p": 5, "brackets": [[0, 1, 0, 5]]})"));
}

TEST_CASE("invariants-coinvariants bound on hand-made modules") {
  // C2 acting on Z by -1: A / (G-1)A = Z/2, and A is torsion-free of dim 1.
  ModuleInstance sign;
  sign.p = 2;
  sign.x_perm = {1, 0};
  sign.y_perm = {0, 1};
  sign.x_matrix = IntMatrix{{-1}};
  sign.y_matrix = IntMatrix{{1}};
  sign.relations = IntMatrix(0, 1);
  auto out = check_coinvariant_bound(sign);
  CHECK(out.group_order == 2);
  CHECK(out.lhs == 2);
  CHECK(out.rhs == 2);
  CHECK(out.holds());
  // Swap action on Z^2: coinvariants are Z, no torsion.
  ModuleInstance swap;
  swap.p = 2;
  swap.x_perm = {1, 0};
  swap.y_perm = {0, 1};
  swap.x_matrix = IntMatrix{{0, 1}, {1, 0}};
  swap.y_matrix = IntMatrix::identity(2);
  swap.relations = IntMatrix(0, 2);
  auto s = check_coinvariant_bound(swap);
  CHECK(s.lhs == 1);
  CHECK(s.holds());
  // Relations must be G-stable.
  swap.relations = IntMatrix{{1, 0}};
  CHECK_THROWS_AS(check_coinvariant_bound(swap), std::invalid_argument);
}

TEST_CASE("random module instances") {
  auto a = random_module_instances(60, 42);
  auto b = random_module_instances(60, 42);
  REQUIRE(a.size() == 60);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].relations == b[k].relations);
    auto out = check_coinvariant_bound(a[k]);
    CHECK(out.group_order <= 8);
    CHECK(out.holds());
  }
}

TEST_CASE("normal subgroups of Q8 and D8") {
  auto q8 = check_normal_subgroup_bound("Q8", {parse_word("xxxx"), parse_word("xxYY"), parse_word("Yxyx")});
  auto d8 = check_normal_subgroup_bound("D8", {parse_word("xxxx"), parse_word("yy"), parse_word("xyxy")});
  // Each has six normal subgroups: 1, the center, three of index 2, the group.
  CHECK(q8.size() == 6);
  CHECK(d8.size() == 6);
  for (const auto* pairs : {&q8, &d8})
    for (const auto& pr : *pairs) {
      CHECK(pr.holds);
      CHECK(pr.index * pr.subgroup_order == 8);
      CHECK(pr.a_ab.to_string() == "Z/2 x Z/2");
    }
  for (const auto& pr : q8)
    if (pr.subgroup_order == 4) CHECK(pr.b_ab.to_string() == "Z/4");
  for (const auto& pr : q8)
    if (pr.subgroup_order == 8) CHECK(pr.b_ab.to_string() == "Z/2 x Z/2");
}

TEST_CASE("lie suite report is deterministic") {
  LieSuiteConfig cfg;
  cfg.n_max = 4;
  cfg.module_instances = 20;
  cfg.seed = 9;
  auto g = LieLattice::heisenberg(3);
  auto r1 = lie_suite(g, cfg);
  auto r2 = lie_suite(g, cfg);
  CHECK(r1.ok);
  CHECK(r1.json == r2.json);
  CHECK(r1.json.find("\"seed\": 9") != std::string::npos);
}
