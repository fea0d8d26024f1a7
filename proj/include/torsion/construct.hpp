#pragma once

#include "torsion/abelian.hpp"
#include "torsion/cosets.hpp"
#include "torsion/subgroup_search.hpp"
#include "torsion/words.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torsion {

struct StepRecord {
  unsigned long i = 0;
  unsigned long q = 0;       // log_p |F:F_i|
  unsigned long a = 0;
  unsigned long j = 0;       // witness valuation index
  unsigned long n_bound = 0; // N = j + f(q) + 1
  unsigned long t_log = 0;   // log_p t_p(H_i^ab)
  unsigned long f_q = 0;     // f(q_i)
  Rational deficiency;       // sum over steps so far of 2 p^-a
  std::string u, v;
  std::string s_abelianization;
  std::size_t candidates = 0;
  std::optional<bool> congruence_ok;             // filled once step i+1 exists
  std::optional<unsigned long> gamma_bound_log;  // likewise
};

struct ConstructionState {
  unsigned long p = 2;
  GrowthFunction growth;
  unsigned long i = 0;
  std::vector<CosetTable> tables;  // F_0 .. F_i
  std::vector<unsigned long> q;    // q_0 .. q_i
  PowerWord r, w;
  std::vector<Word> u, v;          // u_1 .. u_i
  std::vector<unsigned long> a;    // a_1 .. a_i
  std::vector<unsigned long> t_log;  // entry 0 is H_0 = F
  std::vector<StepRecord> records;

  /// r_i = u_1^(p^a_1) ... u_i^(p^a_i), as a power word; likewise w_i.
  static PowerWord chain_word(const std::vector<Word>& bases, const std::vector<unsigned long>& exps,
                              unsigned long p, std::size_t count);
  /// Throws CertificationFailed on the first violated invariant.
  void check_invariants() const;
};

ConstructionState init(unsigned long p, GrowthFunction growth);

struct DeficiencyResult {
  Rational sum;
  bool below_one = false;
};

DeficiencyResult deficiency_check(const std::vector<unsigned long>& a, unsigned long p);

/// One induction step. Throws SearchExhausted, NoWitness or
/// CertificationFailed.
void step(ConstructionState& state, const SearchBudget& budget);

/// The tails r_(i+1) r_i^-1 and w_(i+1) w_i^-1 map into p^a_(i+1) M_i.
/// Requires 1 <= i < state.i.
bool cauchy_congruence_check(const ConstructionState& state, unsigned long i);

struct GammaCertificate {
  unsigned long i = 0;
  unsigned long t_log = 0;           // log_p t_p(H_i^ab)
  unsigned long a_next = 0;
  bool torsion_lemma_hypothesis = false;        // a_next > t_log
  bool exponent_quotients_agree = false;
  unsigned long next_level_t_log = 0;  // log_p t_p of F_i / [F_i,F_i] N_(i+1)
  unsigned long bound_log = 0;       // t(Gamma_i^ab) >= p^bound_log
  unsigned long f_q = 0;
};

/// Chains the exponent-quotient identity and the abelian lemma into a lower
/// bound on the torsion of the i-th open subgroup of the limit group.
/// Throws HypothesisUnmet when a hypothesis fails.
GammaCertificate gamma_certificate(const ConstructionState& state, unsigned long i);

struct RunConfig {
  unsigned long p = 2;
  GrowthFunction growth;
  unsigned long steps = 2;
  SearchBudget budget;
};

/// Runs steps up to `config.steps`, then fills congruence and Gamma fields.
/// When `resume` is given the run continues from it.
ConstructionState run(const RunConfig& config, std::optional<ConstructionState> resume = std::nullopt);

std::string report_json(const ConstructionState& state);
ConstructionState state_from_report(const std::string& json_text);
std::string report_tsv(const ConstructionState& state);

}  // namespace torsion
