#include "torsion/construct.hpp"

#include "torsion/errors.hpp"
#include "torsion/zgmod.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace torsion {

namespace {

using nlohmann::json;

std::vector<PowerWord> nontrivial(std::initializer_list<PowerWord> words) {
  std::vector<PowerWord> out;
  for (const auto& w : words)
    if (!w.is_identity()) out.push_back(w);
  return out;
}

CosetTable whole_group_table() { return CosetTable::from_action(PermutationAction({0}, {0})); }

std::string rational_string(const Rational& r) { return r.get_str(); }

}  // namespace

PowerWord ConstructionState::chain_word(const std::vector<Word>& bases, const std::vector<unsigned long>& exps,
                                        unsigned long p, std::size_t count) {
  PowerWord out;
  for (std::size_t k = 0; k < count; ++k) out.append(bases.at(k), ipow(p, exps.at(k)));
  return out;
}

void ConstructionState::check_invariants() const {
  const std::string anchor = "inductive-construction";
  auto fail = [&](const std::string& what) { throw CertificationFailed(anchor, what); };
  if (tables.size() != i + 1 || q.size() != i + 1 || t_log.size() != i + 1) fail("history length mismatch");
  if (u.size() != i || v.size() != i || a.size() != i) fail("word or exponent list length mismatch");
  if (!(r == chain_word(u, a, p, i)) || !(w == chain_word(v, a, p, i))) fail("r_i or w_i is not the product of powers");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < 3 || a[k] < k + 3) fail("exponent a_" + std::to_string(k + 1) + " below its floor");
    if (k > 0 && a[k] <= a[k - 1]) fail("exponents are not strictly increasing");
    if (a[k] <= t_log[k]) fail("a_" + std::to_string(k + 1) + " does not exceed log_p t_p(H^ab) of the previous level");
  }
  for (std::size_t k = 1; k <= i; ++k) {
    if (tables[k].size() != static_cast<std::size_t>(ipow(p, q[k]).get_ui())) fail("index is not p^q");
    if (t_log[k] <= growth(q[k])) fail("torsion bound fails at level " + std::to_string(k));
    if (tables[k].action().apply(0, u[k - 1]) != 0 || tables[k].action().apply(0, v[k - 1]) != 0)
      fail("u_i or v_i lies outside F_i");
    if (tables[k].action().apply(0, r) != 0 || tables[k].action().apply(0, w) != 0) fail("r or w lies outside F_i");
  }
}

ConstructionState init(unsigned long p, GrowthFunction growth) {
  if (!is_prime(p)) throw std::invalid_argument("init: p must be prime");
  ConstructionState s;
  s.p = p;
  s.growth = std::move(growth);
  s.tables.push_back(whole_group_table());
  s.q.push_back(0);
  s.t_log.push_back(0);
  return s;
}

DeficiencyResult deficiency_check(const std::vector<unsigned long>& a, unsigned long p) {
  Rational sum = 0;
  for (unsigned long e : a) sum += Rational(2, ipow(p, e));
  sum.canonicalize();
  return {sum, sum < 1};
}

void step(ConstructionState& state, const SearchBudget& budget) {
  const unsigned long p = state.p;
  const unsigned long i = state.i + 1;
  const std::string anchor = "inductive-construction";

  // (1)-(2): S normal in G_(i-1), S < H_(i-1); F_i is its preimage.
  FindSResult found = find_S(nontrivial({state.r, state.w}), state.tables.back(), p, budget);
  const CosetTable& fi = found.s;
  const unsigned long q = found.index_log;

  // (3)-(5): relation module, perturbation witness, lifts.
  RelationModule rm = relation_module(fi, {state.r, state.w});
  PerturbationData pert = find_perturbation(rm.module, rm.marked, p);
  const PerturbationWitness& wit = pert.witness;
  Word ui = lift_to_word(rm, wit.h[0]);
  Word vi = lift_to_word(rm, wit.h[1]);
  const GroupAction& act = rm.module.action();
  if (magnus_vector(act, ui) != wit.h[0] || magnus_vector(act, vi) != wit.h[1])
    throw CertificationFailed(anchor, "lifted words do not map to h");

  // (6): exponent rule.
  const unsigned long f_q = state.growth(q);
  const unsigned long n_bound = wit.j + f_q + 1;
  unsigned long a = std::max({n_bound + 1, state.t_log.back() + 1, 3ul, i + 2});
  if (!state.a.empty()) a = std::max(a, state.a.back() + 1);

  // (7): new relators.
  PowerWord r_new = state.r, w_new = state.w;
  r_new.append(ui, ipow(p, a));
  w_new.append(vi, ipow(p, a));

  // (8): the torsion bound by three routes.
  KnResult kn = build_K_n(rm.module, rm.marked, wit, a);
  ZGLattice direct = span_submodule(rm.module, {magnus_vector(act, r_new), magnus_vector(act, w_new)});
  if (!(direct == kn.k)) throw CertificationFailed(anchor, "K_a differs from the span of the images of r_i, w_i");
  SubgroupAbelianization rs = subgroup_abelianization(fi, nontrivial({r_new, w_new}), Locality::at(p));
  if (rs.group.p_torsion(p) != kn.t_p)
    throw CertificationFailed(anchor, "rewriting and module routes disagree on t_p(H_i^ab)");
  if (kn.t_p <= ipow(p, f_q))
    throw CertificationFailed(anchor, "torsion bound: t_p(H_i^ab) = " + kn.t_p.get_str() + " does not exceed p^f(q_i)");

  StepRecord rec;
  rec.i = i;
  rec.q = q;
  rec.a = a;
  rec.j = wit.j;
  rec.n_bound = n_bound;
  rec.t_log = log_p_exact(kn.t_p, p);
  rec.f_q = f_q;
  rec.u = ui.to_string();
  rec.v = vi.to_string();
  rec.s_abelianization = found.s_abelianization.to_string();
  rec.candidates = found.candidates_examined;

  state.i = i;
  state.tables.push_back(fi);
  state.q.push_back(q);
  state.r = std::move(r_new);
  state.w = std::move(w_new);
  state.u.push_back(std::move(ui));
  state.v.push_back(std::move(vi));
  state.a.push_back(a);
  state.t_log.push_back(rec.t_log);
  DeficiencyResult def = deficiency_check(state.a, p);
  if (!def.below_one) throw CertificationFailed("deficiency", "deficiency sum " + def.sum.get_str() + " is not below 1");
  rec.deficiency = def.sum;
  state.records.push_back(std::move(rec));
  state.check_invariants();
}

bool cauchy_congruence_check(const ConstructionState& state, unsigned long i) {
  if (i < 1 || i >= state.i)
    throw std::invalid_argument("cauchy_congruence_check: needs completed steps i and i+1");
  const unsigned long p = state.p;
  RelationModule rm = relation_module(state.tables[i], {});
  const Lattice target = rm.module.lattice().scaled(ipow(p, state.a[i]));
  for (const auto* bases : {&state.u, &state.v}) {
    PowerWord tail = ConstructionState::chain_word(*bases, state.a, p, i + 1) *
                     ConstructionState::chain_word(*bases, state.a, p, i).inverse();
    if (!target.contains(magnus_vector(rm.module.action(), tail))) return false;
  }
  return true;
}

GammaCertificate gamma_certificate(const ConstructionState& state, unsigned long i) {
  const std::string anchor = "limit-group-torsion";
  if (i < 1 || i >= state.i) throw HypothesisUnmet(anchor, "needs completed steps i and i+1");
  if (!cauchy_congruence_check(state, i)) throw HypothesisUnmet(anchor, "congruence of r_(i+1) and r_i fails");
  const unsigned long p = state.p;
  GammaCertificate cert;
  cert.i = i;
  cert.t_log = state.t_log[i];
  cert.a_next = state.a[i];
  cert.f_q = state.growth(state.q[i]);
  cert.torsion_lemma_hypothesis = cert.a_next > cert.t_log;
  if (!cert.torsion_lemma_hypothesis) throw HypothesisUnmet(anchor, "a_(i+1) does not exceed log_p t_p(H_i^ab)");

  auto chain = [&](const std::vector<Word>& b, std::size_t n) { return ConstructionState::chain_word(b, state.a, p, n); };
  RelationModule rm =
      relation_module(state.tables[i], {chain(state.u, i), chain(state.v, i), chain(state.u, i + 1), chain(state.v, i + 1)});
  FGAbelian level = quotient_invariants(rm.module, span_submodule(rm.module, {rm.marked[0], rm.marked[1]}), p);
  FGAbelian next = quotient_invariants(rm.module, span_submodule(rm.module, {rm.marked[2], rm.marked[3]}), p);
  if (log_p_exact(level.p_torsion(p), p) != cert.t_log)
    throw CertificationFailed(anchor, "recomputed t_p(H_i^ab) differs from the recorded value");
  const Integer modulus = ipow(p, cert.a_next);
  cert.exponent_quotients_agree = level.exponent_quotient(modulus) == next.exponent_quotient(modulus);
  if (!cert.exponent_quotients_agree)
    throw HypothesisUnmet(anchor, "exponent quotients at p^a_(i+1) differ");
  cert.next_level_t_log = log_p_exact(next.p_torsion(p), p);
  if (cert.next_level_t_log < cert.t_log)
    throw CertificationFailed(anchor, "torsion dropped between levels despite the abelian lemma");
  cert.bound_log = cert.t_log;
  if (cert.bound_log <= cert.f_q) throw CertificationFailed(anchor, "bound does not exceed p^f(q_i)");
  return cert;
}

ConstructionState run(const RunConfig& config, std::optional<ConstructionState> resume) {
  ConstructionState state = resume ? std::move(*resume) : init(config.p, config.growth);
  if (resume) state.check_invariants();
  while (state.i < config.steps) step(state, config.budget);
  for (unsigned long i = 1; i < state.i; ++i) {
    state.records[i - 1].congruence_ok = cauchy_congruence_check(state, i);
    state.records[i - 1].gamma_bound_log = gamma_certificate(state, i).bound_log;
  }
  return state;
}

std::string report_json(const ConstructionState& state) {
  json steps = json::array();
  for (const auto& r : state.records) {
    json s;
    s["i"] = r.i;
    s["q_i"] = r.q;
    s["a_i"] = r.a;
    s["j"] = r.j;
    s["N"] = r.n_bound;
    s["t_p_log"] = r.t_log;
    s["f_q"] = r.f_q;
    s["deficiency_sum"] = rational_string(r.deficiency);
    s["u"] = r.u;
    s["v"] = r.v;
    s["s_abelianization"] = r.s_abelianization;
    s["candidates"] = r.candidates;
    s["congruence_ok"] = r.congruence_ok ? json(*r.congruence_ok) : json(nullptr);
    s["gamma_bound_log"] = r.gamma_bound_log ? json(*r.gamma_bound_log) : json(nullptr);
    steps.push_back(std::move(s));
  }
  json tables = json::array();
  for (const auto& t : state.tables) tables.push_back(json::parse(t.to_json()));
  auto words = [](const std::vector<Word>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) out.push_back(w.to_string());
    return out;
  };
  json st;
  st["i"] = state.i;
  st["tables"] = std::move(tables);
  st["q"] = state.q;
  st["r"] = state.r.to_string();
  st["w"] = state.w.to_string();
  st["u"] = words(state.u);
  st["v"] = words(state.v);
  st["a"] = state.a;
  st["t_log"] = state.t_log;
  json out;
  out["p"] = state.p;
  out["growth"] = json::parse(state.growth.to_json());
  out["steps"] = std::move(steps);
  out["state"] = std::move(st);
  return out.dump(2) + "\n";
}

ConstructionState state_from_report(const std::string& json_text) {
  json j = json::parse(json_text);
  ConstructionState s;
  s.p = j.at("p").get<unsigned long>();
  s.growth = GrowthFunction::from_json(j.at("growth").dump());
  const json& st = j.at("state");
  s.i = st.at("i").get<unsigned long>();
  for (const auto& t : st.at("tables")) s.tables.push_back(CosetTable::from_json(t.dump()));
  s.q = st.at("q").get<std::vector<unsigned long>>();
  s.r = parse_power_word(st.at("r").get<std::string>());
  s.w = parse_power_word(st.at("w").get<std::string>());
  for (const auto& w : st.at("u")) s.u.push_back(parse_word(w.get<std::string>()));
  for (const auto& w : st.at("v")) s.v.push_back(parse_word(w.get<std::string>()));
  s.a = st.at("a").get<std::vector<unsigned long>>();
  s.t_log = st.at("t_log").get<std::vector<unsigned long>>();
  for (const auto& r : j.at("steps")) {
    StepRecord rec;
    rec.i = r.at("i").get<unsigned long>();
    rec.q = r.at("q_i").get<unsigned long>();
    rec.a = r.at("a_i").get<unsigned long>();
    rec.j = r.at("j").get<unsigned long>();
    rec.n_bound = r.at("N").get<unsigned long>();
    rec.t_log = r.at("t_p_log").get<unsigned long>();
    rec.f_q = r.at("f_q").get<unsigned long>();
    rec.deficiency = Rational(r.at("deficiency_sum").get<std::string>());
    rec.deficiency.canonicalize();
    rec.u = r.at("u").get<std::string>();
    rec.v = r.at("v").get<std::string>();
    rec.s_abelianization = r.at("s_abelianization").get<std::string>();
    rec.candidates = r.at("candidates").get<std::size_t>();
    if (!r.at("congruence_ok").is_null()) rec.congruence_ok = r.at("congruence_ok").get<bool>();
    if (!r.at("gamma_bound_log").is_null()) rec.gamma_bound_log = r.at("gamma_bound_log").get<unsigned long>();
    s.records.push_back(std::move(rec));
  }
  if (s.records.size() != s.i) throw std::invalid_argument("report: step records do not match the state");
  return s;
}

std::string report_tsv(const ConstructionState& state) {
  std::ostringstream out;
  out << "i\tq_i\ta_i\tt_p_log\tf_q\tdeficiency_sum\tcongruence_ok\tgamma_bound_log\n";
  for (const auto& r : state.records) {
    out << r.i << '\t' << r.q << '\t' << r.a << '\t' << r.t_log << '\t' << r.f_q << '\t' << rational_string(r.deficiency)
        << '\t' << (r.congruence_ok ? (*r.congruence_ok ? "true" : "false") : "-") << '\t'
        << (r.gamma_bound_log ? std::to_string(*r.gamma_bound_log) : "-") << '\n';
  }
  return out.str();
}

}  // namespace torsion
