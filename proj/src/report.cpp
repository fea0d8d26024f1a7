#include "torsion/report.hpp"

#include "torsion/construct.hpp"
#include "torsion/errors.hpp"

#include <sstream>

#include "json.hpp"

namespace torsion {

namespace {

using nlohmann::json;

json integer_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

json vec_json(std::span<const Integer> v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(integer_json(e));
  return out;
}

json rows_json(const std::vector<Vec>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(vec_json(r));
  return out;
}

json matrix_json(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i)));
  return out;
}

json lattice_object(const ZGLattice& l) {
  const auto& act = l.action();
  const auto& g = act.group();
  return {{"ambient_rank", l.ambient_rank()},
          {"basis", rows_json(l.lattice().basis_vectors())},
          {"action",
           {{"x", matrix_json(act.matrix(g.generator_element(Letter::x)))},
            {"y", matrix_json(act.matrix(g.generator_element(Letter::y)))}}}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string error_record(const std::exception& e) {
  json j;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = err->kind();
    j["anchor"] = err->anchor();
  } else if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const json::exception*>(&e)) {
    j["error"] = "InvalidInput";
    j["anchor"] = nullptr;
  } else {
    j["error"] = "InternalError";
    j["anchor"] = nullptr;
  }
  j["message"] = e.what();
  return j.dump() + "\n";
}

std::string snf_tsv(const IntMatrix& a) {
  SmithForm s = snf(a);
  std::ostringstream out;
  out << "rank\t" << s.rank << "\ninvariant_factors";
  for (const auto& d : s.invariant_factors) out << '\t' << d;
  out << '\n';
  return out.str();
}

std::string lattice_json(const ZGLattice& lattice) { return dump(lattice_object(lattice)); }

PerturbationReport perturbation_report(const PerturbationInstance& inst, unsigned long n_max) {
  PerturbationReport rep{find_perturbation(inst.module, inst.marked, inst.p), {}, {}, true};
  verify_witness(inst.module, inst.marked, rep.data);
  const auto& w = rep.data.witness;
  json table = json::array();
  for (unsigned long n = 1; n <= n_max; ++n) {
    KnResult kn = build_K_n(inst.module, inst.marked, w, n);
    const Integer pn = ipow(inst.p, n);
    const bool z_in_k = kn.k.lattice().contains(scaled(w.z, pn));
    const bool k_in_uv = lattice_sum(rep.data.u.lattice(), rep.data.v.lattice().scaled(pn)).contains(kn.k.lattice());
    bool growth_ok = true;
    if (n > w.j + 1) growth_ok = kn.t_p >= ipow(inst.p, n - w.j - 1);
    rep.ok = rep.ok && z_in_k && k_in_uv && growth_ok;
    table.push_back({{"n", n},
                     {"t_p_log", log_p_exact(kn.t_p, inst.p)},
                     {"quotient", kn.quotient.to_string()},
                     {"p^n z in K_n", z_in_k},
                     {"K_n in U + p^n V", k_in_uv},
                     {"growth_ok", growth_ok}});
    rep.table.push_back(std::move(kn));
  }
  json j;
  j["p"] = inst.p;
  j["witness"] = {{"j", w.j}, {"slot", w.slot}, {"h", rows_json(w.h)}, {"s", vec_json(w.s)}, {"z", vec_json(w.z)}};
  j["u"] = lattice_object(rep.data.u);
  j["v"] = lattice_object(rep.data.v);
  j["table"] = std::move(table);
  j["ok"] = rep.ok;
  rep.json = dump(j);
  return rep;
}

std::string check_report_json(const CheckReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) violations.push_back({{"a", v.a}, {"b", v.b}, {"detail", v.detail}});
  json j = {{"name", report.name},
            {"family_size", report.family_size},
            {"pairs_examined", report.pairs_examined},
            {"hypotheses_met", report.hypotheses_met},
            {"boundary_skipped", report.boundary_skipped},
            {"violations", std::move(violations)},
            {"ok", report.ok()}};
  return dump(j);
}

LieSuiteReport lie_suite(const LieLattice& g, const LieSuiteConfig& config) {
  LieSuiteReport rep;
  json uniform = json::array();
  for (unsigned long n = 0; n <= config.n_max; ++n) {
    UniformIdentity u = uniform_torsion_identity(g, n);
    rep.ok = rep.ok && u.ok();
    uniform.push_back({{"n", n},
                       {"direct", integer_json(u.direct)},
                       {"via_scaling", integer_json(u.via_scaling)},
                       {"via_index", integer_json(u.via_index)},
                       {"bound", integer_json(u.bound)},
                       {"ok", u.ok()}});
  }

  std::size_t coinvariant_violations = 0;
  json coinvariant_failures = json::array();
  const auto instances = random_module_instances(config.module_instances, config.seed);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    CoinvariantOutcome out = check_coinvariant_bound(instances[k]);
    if (out.holds()) continue;
    ++coinvariant_violations;
    coinvariant_failures.push_back({{"instance", k}, {"lhs", integer_json(out.lhs)}, {"rhs", integer_json(out.rhs)}});
  }
  rep.ok = rep.ok && coinvariant_violations == 0;

  json pairs = json::array();
  const std::vector<std::pair<std::string, std::vector<Word>>> groups = {
      {"Q8", {parse_word("xxxx"), parse_word("xxYY"), parse_word("Yxyx")}},
      {"D8", {parse_word("xxxx"), parse_word("yy"), parse_word("xyxy")}},
  };
  for (const auto& [name, relators] : groups)
    for (const auto& pair : check_normal_subgroup_bound(name, relators)) {
      rep.ok = rep.ok && pair.holds;
      pairs.push_back({{"group", pair.group},
                       {"subgroup_order", pair.subgroup_order},
                       {"index", pair.index},
                       {"a_ab", pair.a_ab.to_string()},
                       {"b_ab", pair.b_ab.to_string()},
                       {"holds", pair.holds}});
    }

  json j;
  j["p"] = g.prime();
  j["rank"] = g.rank();
  j["powerful"] = g.is_powerful();
  j["dimension_additive"] = dimension_additive(g);
  j["uniform_identity"] = std::move(uniform);
  j["coinvariants"] = {{"seed", config.seed},
             {"instances", instances.size()},
             {"violations", coinvariant_violations},
             {"failures", std::move(coinvariant_failures)}};
  j["normal_pairs"] = std::move(pairs);
  j["ok"] = rep.ok;
  rep.json = dump(j);
  return rep;
}

std::string render_report(const std::string& report_json_text) {
  return report_tsv(state_from_report(report_json_text));
}

}  // namespace torsion
