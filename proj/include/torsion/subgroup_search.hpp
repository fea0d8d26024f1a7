#pragma once

#include "torsion/cosets.hpp"

#include <cstddef>
#include <vector>

namespace torsion {

/// Kernel of K -> A for a subgroup K (table `ct`, Schreier system `ss`) and a
/// finite abelian group A = Z/moduli[0] x ... given by the images of the
/// Schreier generators. The resulting table carries `relators`.
CosetTable abelian_cover(const CosetTable& ct, const SchreierSystem& ss, const std::vector<Vec>& images,
                         const std::vector<Integer>& moduli, const std::vector<PowerWord>& relators,
                         std::size_t max_cosets);

/// All index-p subgroups of K that are normal in G = F / <<relators>>. K must
/// be normal in G. At most `max_children` are produced, in a fixed order.
std::vector<CosetTable> invariant_index_p_subgroups(const CosetTable& k, const std::vector<PowerWord>& relators,
                                                    unsigned long p, std::size_t max_cosets,
                                                    std::size_t max_children);

/// [L, L] L^(p^m) for a normal subgroup L of G.
CosetTable abelian_p_refinement(const CosetTable& l, const std::vector<PowerWord>& relators, unsigned long p,
                                unsigned long m, std::size_t max_cosets);

struct SearchBudget {
  std::size_t max_depth = 4;         // levels of index-p descent from G
  std::size_t max_cosets = 4096;     // largest table ever built
  std::size_t max_candidates = 512;  // normal subgroups examined per level
};

struct FindSResult {
  CosetTable l;          // normal in G, infinite abelianization
  unsigned long refine_exponent = 0;
  CosetTable refined_l;  // [L, L] L^(p^m), index above |G:H|
  CosetTable s;          // refined_l intersected with H
  FGAbelian s_abelianization;
  unsigned long index_log = 0;  // log_p |G:S|
  std::size_t candidates_examined = 0;
};

/// Normal subgroup S of p-power index in G = F / <<relators>>, strictly inside
/// the normal subgroup H, with infinite abelianization. Candidates L come from
/// index-p descent; the result has the least |G:S|, ties broken by table key.
/// Throws SearchExhausted when the budget admits no candidate.
FindSResult find_S(const std::vector<PowerWord>& relators, const CosetTable& h, unsigned long p,
                   const SearchBudget& budget = {});

/// Independent re-verification of the four properties of S. Throws
/// CertificationFailed.
void certify_S(const CosetTable& s, const std::vector<PowerWord>& relators, const CosetTable& h, unsigned long p);

}  // namespace torsion
