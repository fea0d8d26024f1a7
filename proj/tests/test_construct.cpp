#include "doctest.h"
#include "oracles.hpp"

#include "torsion/construct.hpp"
#include "torsion/errors.hpp"
#include "torsion/report.hpp"
#include "torsion/zgmod.hpp"

using namespace torsion;

namespace {

const ConstructionState& two_steps() {
  static const ConstructionState state = [] {
    RunConfig cfg;
    cfg.steps = 2;
    return run(cfg);
  }();
  return state;
}

/// log_2 t_2(H_i^ab) through the relation module: Schreier coordinates of
/// the G-translates of the Magnus images of r and w.
unsigned long t_log_via_module(const ConstructionState& s, unsigned long i) {
  RelationModule rm = relation_module(s.tables[i], {});
  const GroupAction& act = rm.module.action();
  const PowerWord r = ConstructionState::chain_word(s.u, s.a, s.p, i);
  const PowerWord w = ConstructionState::chain_word(s.v, s.a, s.p, i);
  IntMatrix rows(0, rm.module.rank());
  for (const auto& word : {r, w}) {
    if (word.is_identity()) continue;
    Vec image = magnus_vector(act, word);
    for (std::size_t g = 0; g < act.order(); ++g) rows.append_row(schreier_coordinates(rm, act.apply(g, image)));
  }
  return log_p_exact(oracle::p_part(oracle::torsion_by_minors(rows), s.p), s.p);
}

}  // namespace

TEST_CASE("initial state") {
  auto s = init(2, GrowthFunction());
  CHECK(s.i == 0);
  CHECK(s.tables.size() == 1);
  CHECK(s.tables[0].size() == 1);
  s.check_invariants();
  CHECK_THROWS_AS(init(4, GrowthFunction()), std::invalid_argument);
  CHECK(report_tsv(s) == "i\tq_i\ta_i\tt_p_log\tf_q\tdeficiency_sum\tcongruence_ok\tgamma_bound_log\n");
}

TEST_CASE("deficiency sums are exact") {
  auto d = deficiency_check({5, 11}, 2);
  CHECK(d.sum == Rational(65, 1024));
  CHECK(d.below_one);
  CHECK_FALSE(deficiency_check({1}, 2).below_one);
  CHECK(deficiency_check({}, 3).sum == 0);
  CHECK(deficiency_check({3, 4, 5}, 2).sum == Rational(7, 16));
  // With a_j >= 2 + j the sum stays below 2 / (p^2 (p - 1)).
  for (unsigned long p : {2ul, 3ul, 5ul})
    for (std::size_t len = 1; len <= 10; ++len) {
      std::vector<unsigned long> a;
      for (std::size_t j = 1; j <= len; ++j) a.push_back(2 + j);
      const Rational bound(2, ipow(p, 2) * (p - 1));
      CHECK(deficiency_check(a, p).sum <= bound);
      CHECK(deficiency_check(a, p).below_one);
    }
}

TEST_CASE("chain words") {
  auto w = ConstructionState::chain_word({parse_word("x"), parse_word("y")}, {2, 3}, 2, 2);
  CHECK(w.to_string() == parse_power_word("(x)^4(y)^8").to_string());
  CHECK(w.expand() == parse_word("xxxxyyyyyyyy"));
}

TEST_CASE("two construction steps") {
  const auto& s = two_steps();
  s.check_invariants();
  REQUIRE(s.i == 2);
  CHECK(s.q == std::vector<unsigned long>{0, 1, 2});
  CHECK(s.records[0].j == 1);
  CHECK(s.a == std::vector<unsigned long>{5, 11});
  for (unsigned long i = 1; i <= 2; ++i) {
    const auto& rec = s.records[i - 1];
    CHECK(rec.t_log > rec.f_q);
    CHECK(rec.t_log == t_log_via_module(s, i));
    CHECK(s.tables[i].size() == (1u << s.q[i]));
  }
  CHECK(s.a[1] > s.a[0]);
  PowerWord tail;
  tail.append(s.u[1], ipow(2, s.a[1]));
  CHECK(ConstructionState::chain_word(s.u, s.a, 2, 2) == ConstructionState::chain_word(s.u, s.a, 2, 1) * tail);
  CHECK(s.records[1].deficiency == Rational(65, 1024));
  CHECK(s.records[0].congruence_ok == true);
  REQUIRE(s.records[0].gamma_bound_log.has_value());
  CHECK(*s.records[0].gamma_bound_log > s.records[0].f_q);
  auto cert = gamma_certificate(s, 1);
  CHECK(cert.torsion_lemma_hypothesis);
  CHECK(cert.exponent_quotients_agree);
  CHECK_THROWS_AS(gamma_certificate(s, 2), HypothesisUnmet);
}

TEST_CASE("reports round trip and render stably") {
  const auto& s = two_steps();
  const std::string json = report_json(s);
  auto back = state_from_report(json);
  CHECK(report_json(back) == json);
  const std::string tsv = render_report(json);
  CHECK(tsv == report_tsv(s));
  CHECK(render_report(report_json(state_from_report(json))) == tsv);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 3);
  CHECK_THROWS(render_report("{}"));
  CHECK_THROWS(render_report("not json"));
}

TEST_CASE("resume continues a run") {
  RunConfig one;
  one.steps = 1;
  auto partial = run(one);
  RunConfig two;
  two.steps = 2;
  auto resumed = run(two, state_from_report(report_json(partial)));
  CHECK(report_json(resumed) == report_json(two_steps()));
}

TEST_CASE("tampered state is rejected") {
  auto s = two_steps();
  s.a[1] = s.a[0];
  CHECK_THROWS_AS(s.check_invariants(), CertificationFailed);
}

TEST_CASE("exhausted budgets name the failing search") {
  RunConfig cfg;
  cfg.steps = 1;
  cfg.budget.max_cosets = 1;
  try {
    run(cfg);
    FAIL("expected an exhausted search");
  } catch (const Error& e) {
    CHECK(e.anchor() == "normal-subgroup-search");
  }
}
