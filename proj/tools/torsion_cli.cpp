#include "torsion/abelian.hpp"
#include "torsion/construct.hpp"
#include "torsion/cosets.hpp"
#include "torsion/errors.hpp"
#include "torsion/lie.hpp"
#include "torsion/report.hpp"
#include "torsion/zgmod.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace {

using namespace torsion;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

void require_prime(unsigned long p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact torsion-growth experiments on two-generator groups"};
  app.require_subcommand(1);
  int status = 0;

  std::string snf_path;
  auto* snf_cmd = app.add_subcommand("snf", "Smith normal form of an integer matrix file");
  snf_cmd->add_option("file", snf_path, "\"rows cols\" then row-major entries")->required();

  auto* abelian_cmd = app.add_subcommand("abelian", "Abelian torsion suites");
  abelian_cmd->require_subcommand(1);
  auto* abelian_verify = abelian_cmd->add_subcommand("verify", "Exhaustive torsion lemma and finite-index bound checks");
  std::vector<unsigned long> lemma_primes{2, 3};
  unsigned long max_exp = 4;
  std::size_t max_rank = 2;
  unsigned long max_order = 64;
  std::string suite = "all";
  abelian_verify->add_option("--p", lemma_primes, "primes for the torsion lemma suite");
  abelian_verify->add_option("--max-exp", max_exp, "bound on cyclic exponents");
  abelian_verify->add_option("--max-rank", max_rank, "bound on ranks");
  abelian_verify->add_option("--max-order", max_order, "finite-index suite: bound on group orders");
  abelian_verify->add_option("--suite", suite, "lemma, index or all")->check(CLI::IsMember({"lemma", "index", "all"}));

  auto* sub_cmd = app.add_subcommand("subgroup-ab", "Abelianization of a finite-index subgroup");
  std::vector<std::string> relators, subgroup_gens;
  std::string table_path;
  unsigned long sub_p = 0;
  std::size_t sub_cosets = 100000;
  sub_cmd->add_option("--relator,-r", relators, "defining relators, e.g. xxxx");
  sub_cmd->add_option("--subgroup,-s", subgroup_gens, "subgroup generators");
  sub_cmd->add_option("--table", table_path, "coset table JSON instead of enumeration");
  sub_cmd->add_option("--p", sub_p, "localize at p");
  sub_cmd->add_option("--max-cosets", sub_cosets, "enumeration budget");

  auto* perturb_cmd = app.add_subcommand("perturb", "Module lemma on a serialized instance");
  std::string perturb_path, perturb_out;
  unsigned long perturb_n = 12;
  perturb_cmd->add_option("file", perturb_path)->required();
  perturb_cmd->add_option("--n-max", perturb_n, "tabulate n = 1 .. n-max");
  perturb_cmd->add_option("--out", perturb_out, "report path (default stdout)");

  auto* construct_cmd = app.add_subcommand("construct", "Inductive construction");
  construct_cmd->require_subcommand(1);
  auto* construct_run = construct_cmd->add_subcommand("run", "Run construction steps");
  unsigned long run_p = 2, run_steps = 2;
  std::string growth_text, run_out, resume_path;
  SearchBudget budget;
  construct_run->add_option("--p", run_p);
  construct_run->add_option("--growth", growth_text, "JSON map n -> f(n)");
  construct_run->add_option("--steps", run_steps);
  construct_run->add_option("--budget-cosets", budget.max_cosets)->check(CLI::PositiveNumber);
  construct_run->add_option("--budget-depth", budget.max_depth)->check(CLI::PositiveNumber);
  construct_run->add_option("--budget-candidates", budget.max_candidates)->check(CLI::PositiveNumber);
  construct_run->add_option("--out", run_out, "report JSON path");
  construct_run->add_option("--resume", resume_path, "continue from a report JSON");

  auto* lie_cmd = app.add_subcommand("lie", "Lie lattice suites");
  lie_cmd->require_subcommand(1);
  auto* lie_verify = lie_cmd->add_subcommand("verify", "Uniform identity, coinvariant and normal-subgroup suites");
  std::string lie_path, lie_out;
  LieSuiteConfig lie_config;
  lie_verify->add_option("file", lie_path, "structure constants JSON")->required();
  lie_verify->add_option("--n-max", lie_config.n_max);
  lie_verify->add_option("--seed", lie_config.seed);
  lie_verify->add_option("--module-instances", lie_config.module_instances);
  lie_verify->add_option("--out", lie_out, "report path (default stdout)");

  auto* report_cmd = app.add_subcommand("report", "Report utilities");
  report_cmd->require_subcommand(1);
  auto* report_render = report_cmd->add_subcommand("render", "TSV table of a construction report");
  std::string render_path;
  report_render->add_option("file", render_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*snf_cmd) {
      std::cout << snf_tsv(parse_matrix(read_file(snf_path)));
    } else if (*abelian_verify) {
      std::vector<CheckReport> reports;
      if (suite != "index")
        for (int part : {1, 2}) {
          TorsionLemmaLimits b;
          b.part = part;
          b.primes = lemma_primes;
          for (auto p : b.primes) require_prime(p);
          b.max_rank = max_rank;
          b.max_exp = max_exp;
          reports.push_back(check_torsion_lemma(b));
        }
      if (suite != "lemma") {
        IndexBoundLimits b;
        b.max_order = max_order;
        reports.push_back(check_index_bound(b));
      }
      for (const auto& r : reports) {
        std::cout << check_report_json(r);
        if (!r.ok()) status = 1;
      }
    } else if (*sub_cmd) {
      std::vector<PowerWord> rels;
      CosetTable table;
      if (!table_path.empty()) {
        table = CosetTable::from_json(read_file(table_path));
        rels = table.relators();
      } else {
        std::vector<Word> r, s;
        for (const auto& t : relators) r.push_back(parse_word(t));
        for (const auto& t : subgroup_gens) s.push_back(parse_word(t));
        table = todd_coxeter(r, s, sub_cosets);
        rels.assign(r.begin(), r.end());
      }
      Locality loc = Locality::global();
      if (sub_p != 0) {
        require_prime(sub_p);
        loc = Locality::at(sub_p);
      }
      std::cout << "index\t" << table.size() << "\nabelianization\t"
                << subgroup_abelianization(table, rels, loc).group.to_string() << '\n';
    } else if (*perturb_cmd) {
      auto rep = perturbation_report(parse_perturbation_instance(read_file(perturb_path)), perturb_n);
      emit(rep.json, perturb_out);
      if (!rep.ok) status = 1;
    } else if (*construct_run) {
      require_prime(run_p);
      RunConfig config;
      config.p = run_p;
      if (!growth_text.empty()) config.growth = GrowthFunction::from_json(growth_text);
      config.steps = run_steps;
      config.budget = budget;
      std::optional<ConstructionState> resume;
      if (!resume_path.empty()) {
        resume = state_from_report(read_file(resume_path));
        if (growth_text.empty()) config.growth = resume->growth;
      }
      ConstructionState state = run(config, std::move(resume));
      if (!run_out.empty()) write_file(run_out, report_json(state));
      std::cout << report_tsv(state);
    } else if (*lie_verify) {
      auto rep = lie_suite(LieLattice::from_json(read_file(lie_path)), lie_config);
      emit(rep.json, lie_out);
      if (!rep.ok) status = 1;
    } else if (*report_render) {
      std::cout << render_report(read_file(render_path));
    }
  } catch (const std::exception& e) {
    std::cerr << error_record(e);
    return 2;
  }
  return status;
}
