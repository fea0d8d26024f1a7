#pragma once

#include "torsion/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace torsion {

/// Base ring of a finitely generated module: Z itself, or Z localized at p
/// (the exact stand-in for finitely generated Z_p-modules).
struct Locality {
  std::optional<unsigned long> prime;  // empty = global

  static Locality global() { return {}; }
  static Locality at(unsigned long p);
  bool is_global() const noexcept { return !prime.has_value(); }
  friend bool operator==(const Locality&, const Locality&) = default;
};

/// Z^free_rank + Z/d1 + ... + Z/dk with 1 < d1 | d2 | ... | dk.
class FGAbelian {
public:
  FGAbelian() = default;
  /// Canonicalizes an arbitrary list of cyclic orders (0 means a copy of Z).
  static FGAbelian from_cyclic(const std::vector<Integer>& orders, Locality loc = Locality::global());
  static FGAbelian from_relation_matrix(const IntMatrix& relations, Locality loc = Locality::global());

  const std::vector<Integer>& invariant_factors() const noexcept { return factors_; }
  std::size_t free_rank() const noexcept { return free_rank_; }
  /// Torsion-free rank, the dimension of the module.
  std::size_t dim() const noexcept { return free_rank_; }
  const Locality& locality() const noexcept { return loc_; }

  Integer torsion() const;
  Integer p_torsion(unsigned long p) const;
  /// Order when finite.
  std::optional<Integer> order() const;
  bool is_finite() const noexcept { return free_rank_ == 0; }

  /// A / nA.
  FGAbelian exponent_quotient(const Integer& n) const;
  /// Relation matrix presenting this group on its own cyclic generators.
  IntMatrix presentation() const;
  FGAbelian direct_sum(const FGAbelian& other) const;

  /// "Z^r x Z/d1 x Z/d2 ..."; the trivial group renders as "0".
  std::string to_string() const;

  friend bool operator==(const FGAbelian&, const FGAbelian&) = default;

private:
  std::vector<Integer> factors_;
  std::size_t free_rank_ = 0;
  Locality loc_;
};

/// f : N -> N given by a finite table, extended linearly past (and between)
/// the table keys: f(n) = f(k) + (n - k) for the largest key k <= n. Below
/// the smallest key the smallest key's value is used.
class GrowthFunction {
public:
  GrowthFunction() : table_{{1, 2}} {}
  explicit GrowthFunction(std::map<unsigned long, unsigned long> table);
  static GrowthFunction from_json(const std::string& json_text);

  unsigned long operator()(unsigned long n) const;
  const std::map<unsigned long, unsigned long>& table() const noexcept { return table_; }
  std::string to_json() const;

private:
  std::map<unsigned long, unsigned long> table_;
};

// Exhaustive checks of the two abelian torsion lemmas on bounded families.

struct TorsionLemmaLimits {
  int part = 1;                       // 1: pro-p form, 2: abstract form
  std::vector<unsigned long> primes{2, 3};
  std::size_t max_rank = 2;           // bound on free rank and on the number of cyclic factors
  unsigned long max_exp = 4;          // bound on exponents of the cyclic p-power factors
  unsigned long extra_n = 3;          // part 1: n ranges over k+1 .. k+extra_n
  unsigned long max_m = 4;            // part 2: m ranges over 2 .. max_m
};

struct CheckViolation {
  std::string a, b, detail;
};

struct CheckReport {
  std::string name;
  std::size_t family_size = 0;
  std::size_t pairs_examined = 0;
  std::size_t hypotheses_met = 0;
  std::size_t boundary_skipped = 0;
  std::vector<CheckViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Enumerates the bounded family used by the torsion lemma suite for one prime.
std::vector<FGAbelian> torsion_lemma_family(unsigned long p, std::size_t max_rank, unsigned long max_exp, Locality loc);

/// For every pair (A, B) meeting the hypotheses (part 1: t(A) = p^k, n > k,
/// A[p^n] ~ B[p^n]; part 2: n = t(A) m with m > 1, A[n] ~ B[n]) asserts
/// t(B) >= t(A).
CheckReport check_torsion_lemma(const TorsionLemmaLimits& bounds);

struct IndexBoundLimits {
  unsigned long max_order = 64;       // finite groups: all subgroups of all groups of this order or less
  std::size_t max_free_rank = 2;      // infinite family: Z^f + T
  unsigned long max_torsion = 8;      // infinite family: |T| bound
  unsigned long max_index = 6;        // infinite family: sublattice index bound
};

/// Asserts t(A) <= t(B) |A:B| for all enumerated finite-index pairs B <= A.
CheckReport check_index_bound(const IndexBoundLimits& bounds);

/// All finitely generated abelian groups of order <= n, as invariant-factor lists.
std::vector<std::vector<unsigned long>> finite_abelian_groups_up_to(unsigned long n);

/// Sublattices of Z^k of index <= max_index, as row-HNF bases.
std::vector<IntMatrix> sublattices_up_to_index(std::size_t k, unsigned long max_index);

}  // namespace torsion
