#pragma once

#include "torsion/abelian.hpp"
#include "torsion/lie.hpp"
#include "torsion/normal_form.hpp"
#include "torsion/zgmod.hpp"

#include <cstdint>
#include <exception>
#include <string>
#include <vector>

namespace torsion {

/// {"error": kind, "anchor": ..., "message": ...} on one line.
std::string error_record(const std::exception& e);

/// "rank\t<r>" then "invariant_factors\t<d1>\t<d2>..." (only d_i > 1).
std::string snf_tsv(const IntMatrix& a);

/// {"ambient_rank", "basis", "action": {"x", "y"}}.
std::string lattice_json(const ZGLattice& lattice);

struct PerturbationReport {
  PerturbationData data;
  std::vector<KnResult> table;  // n = 1 .. n_max
  std::string json;
  bool ok = true;  // witness verified and K_n bounds hold
};

/// Runs the module lemma on an instance and tabulates t_p(M / K_n).
PerturbationReport perturbation_report(const PerturbationInstance& inst, unsigned long n_max);

std::string check_report_json(const CheckReport& report);

struct LieSuiteConfig {
  unsigned long n_max = 10;
  std::uint64_t seed = 1;
  std::size_t module_instances = 1000;
};

struct LieSuiteReport {
  std::string json;
  bool ok = true;
};

/// Uniform identity on `g` for n = 0 .. n_max, the randomized coinvariant suite and
/// the normal-subgroup checks on Q8 and D8.
LieSuiteReport lie_suite(const LieLattice& g, const LieSuiteConfig& config);

/// TSV table of a construction report; rejects malformed reports.
std::string render_report(const std::string& report_json_text);

}  // namespace torsion
