#pragma once

#include "torsion/abelian.hpp"
#include "torsion/cosets.hpp"
#include "torsion/lattice.hpp"
#include "torsion/words.hpp"

#include <memory>
#include <string>
#include <vector>

namespace torsion {

/// Integral representation of a finite group G on Z^degree. Row vectors:
/// g . v = v * matrix(g), so matrix(g h) = matrix(h) * matrix(g).
class GroupAction {
public:
  /// Left multiplication on (ZG)^slots; coordinate slot * |G| + element.
  static GroupAction regular(FiniteGroup group, std::size_t slots);
  /// Arbitrary representation given on the generators x, y of G. Throws
  /// std::invalid_argument when the matrices do not define a homomorphism.
  GroupAction(FiniteGroup group, const IntMatrix& x_matrix, const IntMatrix& y_matrix);

  const FiniteGroup& group() const noexcept { return group_; }
  std::size_t order() const noexcept { return group_.order(); }
  std::size_t degree() const noexcept { return degree_; }
  const IntMatrix& matrix(std::size_t element) const { return matrices_[element]; }

  Vec apply(std::size_t element, std::span<const Integer> v) const;
  /// r . v for r in ZG.
  Vec apply(const GroupRingElement& r, std::span<const Integer> v) const;

private:
  GroupAction() = default;
  void fill_from_generators(const IntMatrix& x_matrix, const IntMatrix& y_matrix);

  FiniteGroup group_{PermutationAction({0}, {0})};
  std::size_t degree_ = 0;
  std::vector<IntMatrix> matrices_;
  std::vector<Permutation> permutations_;  // set when every matrix is a permutation matrix
};

/// G-stable sublattice of Z^degree.
class ZGLattice {
public:
  ZGLattice(std::shared_ptr<const GroupAction> action, Lattice lattice);

  const GroupAction& action() const noexcept { return *action_; }
  const std::shared_ptr<const GroupAction>& action_ptr() const noexcept { return action_; }
  const Lattice& lattice() const noexcept { return lattice_; }
  std::size_t rank() const noexcept { return lattice_.rank(); }
  std::size_t ambient_rank() const noexcept { return lattice_.ambient(); }
  bool is_stable() const;

  friend bool operator==(const ZGLattice& a, const ZGLattice& b) { return a.lattice_ == b.lattice_; }

private:
  std::shared_ptr<const GroupAction> action_;
  Lattice lattice_;
};

/// Relation module F_S^ab of the presentation F -> G = F / F_S inside
/// (ZG)^2, spanned by the Magnus images of the Schreier generators.
struct RelationModule {
  ZGLattice module;
  SchreierSystem schreier;
  std::vector<Vec> schreier_images;  // Magnus image of each Schreier generator
  std::vector<Vec> marked;           // Magnus images of the designated words
  /// Group element of G for each coset of the table.
  std::vector<std::size_t> coset_element;
};

/// Magnus image of a word of F_S in (ZG)^2; the word must lie in F_S.
Vec magnus_vector(const GroupAction& regular, const PowerWord& w);

/// `ct` must describe a normal subgroup F_S of F. Throws
/// std::invalid_argument when a designated word is not in F_S.
RelationModule relation_module(const CosetTable& ct, const std::vector<PowerWord>& designated);

/// Coordinates of h in the Schreier basis of the relation module; throws
/// std::invalid_argument when h is not in M.
Vec schreier_coordinates(const RelationModule& rm, std::span<const Integer> h);
/// A word of F_S whose Magnus image is h.
Word lift_to_word(const RelationModule& rm, std::span<const Integer> h);

ZGLattice span_submodule(const std::shared_ptr<const GroupAction>& action, const std::vector<Vec>& gens);
inline ZGLattice span_submodule(const ZGLattice& m, const std::vector<Vec>& gens) {
  return span_submodule(m.action_ptr(), gens);
}

/// M / K localized at p. Throws std::invalid_argument when K is not in M.
FGAbelian quotient_invariants(const ZGLattice& m, const ZGLattice& k, unsigned long p);

/// Integer matrix of a Q G-equivariant projection onto Q U, scaled by an
/// integer so that it is integral: v -> v * P.
IntMatrix equivariant_projection(const ZGLattice& m, const ZGLattice& u);
/// V = M intersected with the kernel of the averaged projection onto Q U.
ZGLattice equivariant_complement(const ZGLattice& m, const ZGLattice& u);

/// Saturated kernel of f : (ZG)^d -> M, f(r) = sum r_i m_i. The result lives
/// in (ZG)^d with the left regular action.
ZGLattice kernel_lattice(const ZGLattice& m, const std::vector<Vec>& marked);

struct PerturbationWitness {
  unsigned long p = 0;
  std::vector<Vec> h;    // d elements of V
  Vec s;                 // element of L, d blocks of |G| coordinates
  Vec z;                 // sum s_i h_i, nonzero
  unsigned long j = 0;   // least j with z outside p^j V
  std::size_t slot = 0;  // the single slot where h is nonzero
};

struct PerturbationData {
  ZGLattice u;
  ZGLattice v;
  ZGLattice l;
  PerturbationWitness witness;
};

/// s . h = sum_i s_i h_i with s split into d blocks of |G|.
Vec pair_action(const GroupAction& action, std::span<const Integer> s, const std::vector<Vec>& h);

/// Basis-pair search for (s, h); throws NoWitness when the hypotheses fail.
PerturbationData find_perturbation(const ZGLattice& m, const std::vector<Vec>& marked, unsigned long p);

/// Re-checks the witness equations exactly; throws CertificationFailed.
void verify_witness(const ZGLattice& m, const std::vector<Vec>& marked, const PerturbationData& data);

struct KnResult {
  ZGLattice k;
  FGAbelian quotient;  // M / K_n at p
  Integer t_p;
};

/// K_n generated by m_i + p^n h_i.
KnResult build_K_n(const ZGLattice& m, const std::vector<Vec>& marked, const PerturbationWitness& w, unsigned long n);

/// Serialized instance for the perturb command: {"p", "x", "y" (permutations
/// of a faithful action of G), optional "action": {"x", "y"} matrices
/// (default left multiplication on (ZG)^slots), "slots", "module" basis rows,
/// "marked" vectors}.
struct PerturbationInstance {
  unsigned long p;
  ZGLattice module;
  std::vector<Vec> marked;
};

PerturbationInstance parse_perturbation_instance(const std::string& json_text);

}  // namespace torsion
