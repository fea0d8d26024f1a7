#pragma once

#include "torsion/abelian.hpp"
#include "torsion/lattice.hpp"
#include "torsion/words.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace torsion {

/// Z_p Lie lattice on Z^rank given by structure constants
/// (e_i, e_j) = sum_k c_ij^k e_k.
class LieLattice {
public:
  /// `brackets` holds entries (i, j, c_ij); a missing (j, i) is filled in by
  /// antisymmetry. Throws std::invalid_argument on malformed data and when
  /// antisymmetry or the Jacobi identity fails.
  LieLattice(unsigned long p, std::size_t rank, const std::vector<std::tuple<std::size_t, std::size_t, Vec>>& brackets);

  /// {"rank", "p", "brackets": [[i, j, c_1, ..., c_rank], ...]}, indices from 0.
  static LieLattice from_json(const std::string& text);
  /// Z^3 with (e_0, e_1) = p e_2.
  static LieLattice heisenberg(unsigned long p);
  static LieLattice abelian(unsigned long p, std::size_t rank);

  unsigned long prime() const noexcept { return p_; }
  std::size_t rank() const noexcept { return rank_; }
  Vec bracket(std::span<const Integer> a, std::span<const Integer> b) const;

  bool is_antisymmetric() const;
  bool satisfies_jacobi() const;
  /// (G, G) inside p G, or inside 4 G when p = 2.
  bool is_powerful() const;

private:
  const Vec& constant(std::size_t i, std::size_t j) const { return table_[i * rank_ + j]; }

  unsigned long p_;
  std::size_t rank_;
  std::vector<Vec> table_;
};

/// Span of brackets of basis pairs of `sub` (default: the whole lattice).
Lattice derived_sublattice(const LieLattice& g, const Lattice& sub);
Lattice derived_sublattice(const LieLattice& g);
/// p^n G.
Lattice scale(const LieLattice& g, unsigned long n);

struct UniformIdentity {
  unsigned long n = 0;
  Integer direct;       // t(G_n / (G_n, G_n))
  Integer via_scaling;  // t(G / p^n (G, G))
  Integer via_index;    // t(G / (G, G)) |(G, G) / p^n (G, G)|
  Integer bound;        // t(G / (G, G)) p^(n rank)
  bool ok() const { return direct == via_scaling && via_scaling == via_index && direct <= bound; }
};

UniformIdentity uniform_torsion_identity(const LieLattice& g, unsigned long n);

/// rank G = rank (G, G) + dim G / (G, G).
bool dimension_additive(const LieLattice& g);

/// Finite group G (from a faithful permutation action on generators x, y)
/// acting on Z^k by integer matrices; A = Z^k / relations, taken at p.
struct ModuleInstance {
  unsigned long p = 2;
  Permutation x_perm, y_perm;
  IntMatrix x_matrix, y_matrix;  // row vectors: v -> v * matrix
  IntMatrix relations;           // rows span a G-stable lattice
};

struct CoinvariantOutcome {
  std::size_t group_order = 0;
  Integer lhs;  // t(A / (G-1)A)
  Integer rhs;  // t(A) |G|^dim A
  bool fixed_meets_augmentation_trivially = true;  // checked when A is torsion-free
  bool holds() const { return lhs <= rhs && fixed_meets_augmentation_trivially; }
};

/// Throws std::invalid_argument when the instance is not a valid module.
CoinvariantOutcome check_coinvariant_bound(const ModuleInstance& inst);

/// Random instances: signed permutation groups of order <= max_order on Z^k,
/// k <= max_rank, with orbit-spanned relation lattices.
std::vector<ModuleInstance> random_module_instances(std::size_t count, std::uint64_t seed, std::size_t max_order = 8,
                                                 std::size_t max_rank = 4,
                                                 const std::vector<unsigned long>& primes = {2, 3, 5});

struct NormalPair {
  std::string group;
  std::size_t subgroup_order = 0;
  std::size_t index = 0;
  FGAbelian a_ab, b_ab;
  bool holds = false;  // t(A^ab) <= t(B^ab) |A:B|^(dim B^ab + 1), and part 1 when dims agree
};

/// Every normal subgroup B of the finite group <x, y | relators>.
std::vector<NormalPair> check_normal_subgroup_bound(const std::string& name, const std::vector<Word>& relators,
                                      std::size_t max_cosets = 1024);

}  // namespace torsion
