// One PASS/FAIL line per acceptance criterion; exit status 1 on any FAIL.

#include "oracles.hpp"

#include "torsion/abelian.hpp"
#include "torsion/construct.hpp"
#include "torsion/cosets.hpp"
#include "torsion/errors.hpp"
#include "torsion/lie.hpp"
#include "torsion/normal_form.hpp"
#include "torsion/report.hpp"
#include "torsion/subgroup_search.hpp"
#include "torsion/zgmod.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

using namespace torsion;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.ok = false;
    out.detail += " over time limit";
  }
  if (!out.ok) ++failures;
  std::ostringstream time;
  time.precision(2);
  time << std::fixed << secs;
  std::cout << (out.ok ? "PASS " : "FAIL ") << name << " [" << time.str() << " s] " << out.detail << std::endl;
}

Outcome snf_soundness() {
  std::mt19937_64 rng(500);
  std::size_t oracle_checked = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    IntMatrix a = oracle::random_matrix(rng, r, c, -99, 99);
    if (t % 5 == 0 && r > 1)
      for (std::size_t j = 0; j < c; ++j) a(r - 1, j) = a(0, j) * 3 - a(r - 2, j);
    SmithForm s = snf(a);
    if (s.left * a * s.right != s.diagonal) return {false, "U A V != D at matrix " + std::to_string(t)};
    std::vector<Integer> diag;
    for (std::size_t i = 0; i < std::min(r, c); ++i)
      if (s.diagonal(i, i) != 0) diag.push_back(s.diagonal(i, i));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j && s.diagonal(i, j) != 0) return {false, "off-diagonal entry"};
    for (std::size_t i = 0; i + 1 < diag.size(); ++i)
      if (diag[i] <= 0 || !mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t()))
        return {false, "divisibility chain broken"};
    if (r <= 5 && c <= 5) {
      ++oracle_checked;
      if (diag != oracle::smith_diagonal_by_minors(a)) return {false, "minor-gcd mismatch at matrix " + std::to_string(t)};
    }
  }
  return {true, "500 matrices, " + std::to_string(oracle_checked) + " against minor gcds"};
}

Outcome torsion_lemma_suite() {
  std::size_t met = 0;
  for (int part : {1, 2}) {
    TorsionLemmaLimits b;
    b.part = part;
    b.primes = {2, 3};
    b.max_rank = 2;
    b.max_exp = 4;
    CheckReport rep = check_torsion_lemma(b);
    if (!rep.ok()) return {false, "part " + std::to_string(part) + ": " + rep.violations.front().detail};
    if (rep.hypotheses_met == 0) return {false, "part " + std::to_string(part) + " met no hypotheses"};
    met += rep.hypotheses_met;
  }
  return {true, std::to_string(met) + " pairs meeting the hypotheses, 0 violations"};
}

Outcome index_bound_suite() {
  IndexBoundLimits b;
  b.max_order = 64;
  CheckReport rep = check_index_bound(b);
  if (!rep.ok()) return {false, rep.violations.front().a + " / " + rep.violations.front().b};
  return {true, std::to_string(rep.pairs_examined) + " pairs, 0 violations"};
}

bool transitive(const PermutationAction& a) {
  std::vector<bool> seen(a.degree());
  std::vector<std::uint32_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto c = stack.back();
    stack.pop_back();
    for (Letter l : {Letter::x, Letter::X, Letter::y, Letter::Y})
      if (auto d = a.apply(c, l); !seen[d]) {
        seen[d] = true;
        ++count;
        stack.push_back(d);
      }
  }
  return count == a.degree();
}

Outcome relation_module_rank() {
  std::mt19937_64 rng(8);
  std::ostringstream detail;
  for (std::size_t t = 0; t < 10; ++t) {
    const std::size_t n = 2 + t % 7;
    PermutationAction act;
    do {
      Permutation px(n), py(n);
      std::iota(px.begin(), px.end(), 0u);
      std::iota(py.begin(), py.end(), 0u);
      std::shuffle(px.begin(), px.end(), rng);
      std::shuffle(py.begin(), py.end(), rng);
      act = PermutationAction(px, py);
    } while (!transitive(act));
    CosetTable ct = CosetTable::from_action(act);
    SchreierSystem ss = schreier(ct);
    Lattice image(2 * n);
    for (const auto& g : ss.generators) image.insert(edge_vector(ct.action(), 0, g));
    if (image.rank() != n + 1) return {false, "index " + std::to_string(n) + ": rank " + std::to_string(image.rank())};
    detail << n << ' ';
  }
  // Normal subgroups: the same count inside (ZG)^2.
  for (const auto& gens : {PermutationAction({1, 2, 0}, {1, 0, 2}), PermutationAction({1, 2, 3, 0}, {0, 3, 2, 1})}) {
    FiniteGroup g(gens);
    RelationModule rm = relation_module(CosetTable::from_action(g.regular_action()), {});
    if (rm.module.rank() != g.order() + 1) return {false, "regular index " + std::to_string(g.order())};
    detail << g.order() << "n ";
  }
  return {true, "indices " + detail.str()};
}

std::vector<std::pair<std::string, PerturbationInstance>> module_instances() {
  std::vector<std::pair<std::string, PerturbationInstance>> out;
  auto regular = [](const PermutationAction& gens, std::size_t slots) {
    auto act = std::make_shared<const GroupAction>(GroupAction::regular(FiniteGroup(gens), slots));
    return ZGLattice(act, Lattice::from_rows(IntMatrix::identity(act->degree())));
  };
  auto norm_element = [](std::size_t order, std::size_t slots) {
    Vec v(order * slots);
    for (std::size_t g = 0; g < order; ++g) v[g] = 1;
    return v;
  };
  const PermutationAction c2({1, 0}, {0, 1}), c3({1, 2, 0}, {0, 1, 2}), v4({1, 0, 3, 2}, {2, 3, 0, 1}),
      s3({1, 2, 0}, {1, 0, 2});
  out.push_back({"C2 on ZC2", {2, regular(c2, 1), {norm_element(2, 1)}}});
  out.push_back({"C2 on (ZC2)^2", {2, regular(c2, 2), {norm_element(2, 2), Vec(4)}}});
  out.push_back({"C3 on (ZC3)^2", {3, regular(c3, 2), {norm_element(3, 2), Vec(6)}}});
  out.push_back({"V4 on (ZV4)^2", {2, regular(v4, 2), {norm_element(4, 2), Vec(8)}}});
  out.push_back({"S3 on (ZS3)^2", {3, regular(s3, 2), {norm_element(6, 2), Vec(12)}}});
  // Step 1 of the construction: relation module of the first index-2 subgroup.
  auto top = CosetTable::from_action(PermutationAction({0}, {0}));
  auto found = find_S({}, top, 2);
  auto rm = relation_module(found.s, {PowerWord(), PowerWord()});
  out.push_back({"construction step 1", {2, rm.module, rm.marked}});
  return out;
}

Outcome module_lemma(std::string* reports) {
  std::ostringstream detail;
  for (const auto& [name, inst] : module_instances()) {
    PerturbationReport rep = perturbation_report(inst, 12);
    if (reports) *reports += rep.json;
    const auto& w = rep.data.witness;
    if (!rep.ok) return {false, name + ": K_n bounds fail"};
    if (w.j + 6 > 12) return {false, name + ": witness valuation too large for n <= 12"};
    for (unsigned long c = 1; c <= 5; ++c)
      if (rep.table[w.j + c].t_p < ipow(inst.p, c)) return {false, name + ": growth fails at c=" + std::to_string(c)};
    detail << name << " (j=" << w.j << "); ";
  }
  return {true, detail.str()};
}

ConstructionState construction() {
  RunConfig cfg;
  cfg.p = 2;
  cfg.growth = GrowthFunction::from_json(R"({"1": 2})");
  cfg.steps = 2;
  return run(cfg);
}

Outcome end_to_end(std::string* report) {
  ConstructionState s = construction();
  if (report) *report += report_json(s);
  s.check_invariants();
  std::ostringstream detail;
  for (unsigned long i = 1; i <= 2; ++i) {
    const StepRecord& r = s.records[i - 1];
    if (r.f_q != r.q + 1) return {false, "growth function mismatch"};
    if (!(r.t_log > r.f_q)) return {false, "torsion bound fails at step " + std::to_string(i)};
    if (r.a < r.n_bound + 1 || r.a <= s.t_log[i - 1]) return {false, "exponent rule fails at step " + std::to_string(i)};
    if (i > 1 && r.a <= s.a[i - 2]) return {false, "a_i not strictly increasing"};
    detail << "step " << i << ": q=" << r.q << " a=" << r.a << " log t=" << r.t_log << " f=" << r.f_q << "; ";
  }
  DeficiencyResult d = deficiency_check(s.a, 2);
  if (!d.below_one || d.sum != s.records.back().deficiency) return {false, "deficiency sum " + d.sum.get_str()};
  if (!cauchy_congruence_check(s, 1)) return {false, "congruence at level 1 fails"};
  GammaCertificate g = gamma_certificate(s, 1);
  if (!g.torsion_lemma_hypothesis || !g.exponent_quotients_agree || !(g.bound_log > g.f_q))
    return {false, "Gamma certificate fails"};
  detail << "deficiency " << d.sum.get_str() << "; Gamma_1 torsion >= 2^" << g.bound_log << " > 2^" << g.f_q;
  return {true, detail.str()};
}

Outcome uniform_identity() {
  for (unsigned long p : {3ul, 5ul}) {
    auto g = LieLattice::heisenberg(p);
    if (!g.is_powerful()) return {false, "Heisenberg lattice not powerful"};
    const Integer a = uniform_torsion_identity(g, 0).direct;
    for (unsigned long n = 0; n <= 10; ++n) {
      auto u = uniform_torsion_identity(g, n);
      if (!u.ok() || u.direct != ipow(p, n + 1) || u.direct > a * ipow(p, 3 * n))
        return {false, "p=" + std::to_string(p) + " n=" + std::to_string(n)};
    }
  }
  return {true, "p in {3,5}, n = 0..10, three computations agree"};
}

Outcome coinvariant_suite(std::string* report) {
  auto instances = random_module_instances(1000, 20240601);
  std::size_t violations = 0, torsion_free = 0;
  std::ostringstream lines;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    CoinvariantOutcome o = check_coinvariant_bound(instances[k]);
    if (!o.holds()) ++violations;
    if (instances[k].relations.rows() == 0) ++torsion_free;
    lines << k << '\t' << o.group_order << '\t' << o.lhs << '\t' << o.rhs << '\n';
  }
  if (report) *report += lines.str();
  return {violations == 0, "1000 instances (seed 20240601), " + std::to_string(torsion_free) +
                               " with free A, " + std::to_string(violations) + " violations"};
}

Outcome normal_subgroup_suite(std::string* report) {
  std::size_t pairs = 0;
  for (const auto& [name, rels] : std::vector<std::pair<std::string, std::vector<Word>>>{
           {"Q8", {parse_word("xxxx"), parse_word("xxYY"), parse_word("Yxyx")}},
           {"D8", {parse_word("xxxx"), parse_word("yy"), parse_word("xyxy")}}}) {
    for (const auto& pr : check_normal_subgroup_bound(name, rels)) {
      ++pairs;
      if (report) *report += name + '\t' + pr.b_ab.to_string() + '\t' + std::to_string(pr.index) + '\n';
      if (!pr.holds) return {false, name + " subgroup of order " + std::to_string(pr.subgroup_order)};
    }
  }
  return {pairs == 12, std::to_string(pairs) + " normal pairs, 0 violations"};
}

std::string full_report() {
  std::string out;
  TorsionLemmaLimits b;
  b.max_exp = 4;
  for (int part : {1, 2}) {
    b.part = part;
    out += check_report_json(check_torsion_lemma(b));
  }
  out += check_report_json(check_index_bound(IndexBoundLimits{}));
  module_lemma(&out);
  end_to_end(&out);
  coinvariant_suite(&out);
  normal_subgroup_suite(&out);
  LieSuiteConfig cfg;
  cfg.module_instances = 200;
  out += lie_suite(LieLattice::heisenberg(3), cfg).json;
  return out;
}

}  // namespace

int main() {
  criterion("snf-soundness", 30, snf_soundness);
  criterion("abelian-torsion-lemma-exhaustive", 60, torsion_lemma_suite);
  criterion("finite-index-torsion-bound-exhaustive", 60, index_bound_suite);
  criterion("relation-module-rank", 0, relation_module_rank);
  criterion("module-lemma-reproduction", 300, [] { return module_lemma(nullptr); });
  criterion("end-to-end-construction-p2-two-steps", 600, [] { return end_to_end(nullptr); });
  criterion("uniform-case-identity", 10, uniform_identity);
  criterion("invariants-coinvariants-random-suite", 120, [] { return coinvariant_suite(nullptr); });
  criterion("normal-subgroup-bound-Q8-D8", 0, [] { return normal_subgroup_suite(nullptr); });
  criterion("determinism", 0, [] {
    const std::string first = full_report();
    const std::string second = full_report();
    if (first != second) return Outcome{false, "reports differ"};
    return Outcome{true, std::to_string(first.size()) + " bytes identical across two runs"};
  });
  return failures == 0 ? 0 : 1;
}
