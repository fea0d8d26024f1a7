#include "doctest.h"

#include "torsion/cosets.hpp"
#include "torsion/errors.hpp"
#include "torsion/subgroup_search.hpp"

#include <numeric>
#include <queue>
#include <random>

using namespace torsion;

namespace {

std::vector<Word> words(std::initializer_list<const char*> texts) {
  std::vector<Word> out;
  for (const char* t : texts) out.push_back(parse_word(t));
  return out;
}

std::vector<PowerWord> power_words(const std::vector<Word>& ws) { return {ws.begin(), ws.end()}; }

bool transitive(const PermutationAction& a) {
  std::vector<bool> seen(a.degree());
  std::queue<std::uint32_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    auto c = q.front();
    q.pop();
    for (Letter l : {Letter::x, Letter::X, Letter::y, Letter::Y}) {
      auto d = a.apply(c, l);
      if (!seen[d]) {
        seen[d] = true;
        ++count;
        q.push(d);
      }
    }
  }
  return count == a.degree();
}

PermutationAction random_transitive(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    Permutation px(n), py(n);
    std::iota(px.begin(), px.end(), 0u);
    std::iota(py.begin(), py.end(), 0u);
    std::shuffle(px.begin(), px.end(), rng);
    std::shuffle(py.begin(), py.end(), rng);
    PermutationAction a(px, py);
    if (transitive(a)) return a;
  }
}

}  // namespace

TEST_CASE("coset enumeration of small groups") {
  CHECK(todd_coxeter(words({"xxx", "yy", "xyxy"}), {}, 100).size() == 6);
  CHECK(todd_coxeter(words({"xxxx", "xxYY", "Yxyx"}), {}, 100).size() == 8);
  CHECK(todd_coxeter(words({"xxxx", "yy", "xyxy"}), {}, 100).size() == 8);
  CHECK(todd_coxeter(words({"xxx", "yy", "xyxyxy"}), {}, 100).size() == 12);
  CHECK(todd_coxeter(words({"xxx", "yy", "xyxy"}), words({"x"}), 100).size() == 2);
  CHECK(todd_coxeter({}, words({"x", "y"}), 10).size() == 1);
  // A5 as the (2,3,5) triangle group.
  CHECK(todd_coxeter(words({"xx", "yyy", "xyxyxyxyxy"}), {}, 1000).size() == 60);
}

TEST_CASE("coset enumeration budget") {
  CHECK_THROWS_AS(todd_coxeter(words({"xx"}), {}, 64), BudgetExhausted);
}

TEST_CASE("coset tables are standardized and validated") {
  auto ct = todd_coxeter(words({"xxx", "yy", "xyxy"}), {}, 100);
  ct.validate();
  auto again = CosetTable::from_json(ct.to_json());
  CHECK(again == ct);
  CHECK(again.key() == ct.key());
  CHECK_THROWS(CosetTable::from_json(R"({"cosets":2,"x":[0,0],"y":[1,0]})"));
  CHECK_THROWS_AS(CosetTable::from_action(PermutationAction({0, 1}, {0, 1})), std::invalid_argument);
}

TEST_CASE("schreier generators of a small subgroup") {
  // Index-2 subgroup of F containing y: the kernel of the x exponent mod 2.
  auto ct = CosetTable::from_action(PermutationAction({1, 0}, {0, 1}));
  auto ss = schreier(ct);
  REQUIRE(ss.generators.size() == 3);
  std::vector<std::string> gens;
  for (const auto& g : ss.generators) gens.push_back(g.to_string());
  std::sort(gens.begin(), gens.end());
  CHECK(gens == std::vector<std::string>{"xx", "xyX", "y"});
  CHECK(is_normal(ct, ss));
}

TEST_CASE("schreier rank of random subgroups") {
  std::mt19937_64 rng(2718);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng() % 7;
    auto ct = CosetTable::from_action(random_transitive(rng, n));
    auto ss = schreier(ct);
    CHECK(ss.generators.size() == n + 1);
    CHECK(ss.transversal[0].is_identity());
    auto ab = subgroup_abelianization(ct, {});
    CHECK(ab.group.to_string() == FGAbelian::from_cyclic(std::vector<Integer>(n + 1, 0)).to_string());
    for (std::size_t g = 0; g < ss.generators.size(); ++g) {
      auto rw = rewrite(ss, ct, ss.generators[g]);
      Vec unit(ss.generators.size());
      unit[g] = 1;
      CHECK(rw.abelian == unit);
      CHECK(expand(ss, rw.sequence) == ss.generators[g]);
      CHECK(rewrite_abelian(ss, ct, ss.generators[g]) == unit);
    }
    CHECK_THROWS_AS(rewrite(ss, ct, parse_word(ct.next(0, Letter::x) == 0 ? "y" : "x")), std::invalid_argument);
  }
}

TEST_CASE("subgroup abelianizations") {
  // Infinite dihedral group: the rotation subgroup is infinite cyclic.
  auto rels = words({"xx", "yy"});
  auto ct = todd_coxeter(rels, words({"xy"}), 100);
  CHECK(ct.size() == 2);
  CHECK(subgroup_abelianization(ct, power_words(rels)).group.to_string() == "Z");
  // Q8 abelianizes to the Klein four group; its center is cyclic of order 2.
  auto q8 = words({"xxxx", "xxYY", "Yxyx"});
  auto whole = todd_coxeter(q8, words({"x", "y"}), 100);
  CHECK(subgroup_abelianization(whole, power_words(q8)).group.to_string() == "Z/2 x Z/2");
  auto center = todd_coxeter(q8, words({"xx"}), 100);
  CHECK(center.size() == 4);
  CHECK(subgroup_abelianization(center, power_words(q8)).group.to_string() == "Z/2");
  CHECK(subgroup_abelianization(center, power_words(q8), Locality::at(3)).group.to_string() == "0");
}

TEST_CASE("intersection and containment") {
  auto a = CosetTable::from_action(PermutationAction({1, 0}, {0, 1}));
  auto b = CosetTable::from_action(PermutationAction({0, 1}, {1, 0}));
  auto c = intersect(a, b);
  CHECK(c.size() == 4);
  auto ss = schreier(c);
  CHECK(subgroup_contained(c, ss, a));
  CHECK(subgroup_contained(c, ss, b));
  CHECK_FALSE(subgroup_contained(a, schreier(a), b));
}

TEST_CASE("normal subgroups of p-power index") {
  // Z^2 = <x, y | [x, y]>: the index-2 subgroups are the three kernels onto Z/2.
  std::vector<PowerWord> rels{parse_word("xyXY")};
  auto top = CosetTable::from_action(PermutationAction({0}, {0}), rels);
  auto kids = invariant_index_p_subgroups(top, rels, 2, 64, 16);
  CHECK(kids.size() == 3);
  for (const auto& k : kids) {
    CHECK(k.size() == 2);
    CHECK(is_normal(k, schreier(k)));
  }
  auto refined = abelian_p_refinement(top, rels, 2, 2, 256);
  CHECK(refined.size() == 16);
}

TEST_CASE("normal subgroup search in the free group") {
  auto top = CosetTable::from_action(PermutationAction({0}, {0}));
  auto res = find_S({}, top, 2);
  CHECK(res.s.size() == 2);
  CHECK(res.index_log == 1);
  CHECK(res.s_abelianization.dim() == 3);
  certify_S(res.s, {}, top, 2);
  auto res2 = find_S({}, res.s, 2);
  CHECK(res2.s.size() > res.s.size());
  certify_S(res2.s, {}, res.s, 2);
}
