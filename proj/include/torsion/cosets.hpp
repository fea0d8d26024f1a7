#pragma once

#include "torsion/abelian.hpp"
#include "torsion/words.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace torsion {

/// Complete coset table of a finite-index subgroup of F = <x, y>, with the
/// defining data it was built from. Cosets are numbered in breadth-first
/// order (x, y, x^-1, y^-1) from the base coset 0.
class CosetTable {
public:
  CosetTable() = default;
  /// Builds a standardized table from a transitive action; throws if the
  /// action is not transitive.
  static CosetTable from_action(const PermutationAction& action, std::vector<PowerWord> relators = {},
                                std::vector<PowerWord> subgroup_gens = {});

  std::size_t size() const noexcept { return rows_.size(); }
  std::uint32_t next(std::uint32_t coset, Letter l) const { return rows_[coset][index(l)]; }
  const PermutationAction& action() const noexcept { return action_; }
  const std::vector<PowerWord>& relators() const noexcept { return relators_; }
  const std::vector<PowerWord>& subgroup_generators() const noexcept { return subgroup_gens_; }

  /// Throws CertificationFailed naming the violated invariant.
  void validate() const;
  /// Images of x then y, a canonical key for the subgroup.
  std::vector<std::uint32_t> key() const;

  std::string to_json() const;
  static CosetTable from_json(const std::string& text);

  friend bool operator==(const CosetTable& a, const CosetTable& b) { return a.rows_ == b.rows_; }

private:
  std::vector<std::array<std::uint32_t, 4>> rows_;
  PermutationAction action_;
  std::vector<PowerWord> relators_;
  std::vector<PowerWord> subgroup_gens_;
};

/// HLT enumeration with lookahead. Throws BudgetExhausted when more than
/// `max_cosets` live cosets would be needed.
CosetTable todd_coxeter(const std::vector<Word>& relators, const std::vector<Word>& subgroup_gens,
                        std::size_t max_cosets);

/// Schreier transversal and free generators of the subgroup.
struct SchreierSystem {
  std::vector<Word> transversal;                 // per coset, prefix-closed, base coset -> identity
  std::vector<Word> generators;                  // t_c g t_{cg}^-1 for the non-tree edges
  std::vector<std::array<int, 2>> edge_generator;  // (coset, x/y) -> generator index, -1 on tree edges
  std::vector<std::pair<std::uint32_t, std::size_t>> generator_edge;  // generator -> (coset, x/y)
};

SchreierSystem schreier(const CosetTable& ct);

struct Rewriting {
  Vec abelian;                                  // exponent sums per Schreier generator
  std::vector<std::pair<std::size_t, int>> sequence;  // (generator, +-1)
};

/// Reidemeister-Schreier rewriting of a subgroup word. Throws
/// std::invalid_argument when w is not in the subgroup.
Rewriting rewrite(const SchreierSystem& ss, const CosetTable& ct, const Word& w);
Word expand(const SchreierSystem& ss, const std::vector<std::pair<std::size_t, int>>& sequence);

/// Abelianized rewriting of t_start w t_end^-1 (handles huge exponents).
Vec rewrite_abelian(const SchreierSystem& ss, const CosetTable& ct, const PowerWord& w, std::uint32_t start = 0);

struct SubgroupAbelianization {
  SchreierSystem schreier;
  IntMatrix relations;   // one row per relator conjugate t r t^-1
  FGAbelian group;
};

/// Abelianization of F_S / <<R>> for the subgroup F_S described by `ct`.
/// Every relator must fix every coset (the normal closure lies in F_S).
SubgroupAbelianization subgroup_abelianization(const CosetTable& ct, const std::vector<PowerWord>& relators,
                                               Locality loc = Locality::global());

/// Conjugation test: every Schreier generator conjugated by x and y still
/// fixes the base coset.
bool is_normal(const CosetTable& ct, const SchreierSystem& ss);

/// Coset table of the intersection of two subgroups via the product action.
CosetTable intersect(const CosetTable& a, const CosetTable& b);

/// True when every Schreier generator of `sub` lies in the subgroup of `super`.
bool subgroup_contained(const CosetTable& sub, const SchreierSystem& sub_ss, const CosetTable& super);

}  // namespace torsion
