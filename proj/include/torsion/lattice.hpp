#pragma once

#include "torsion/matrix.hpp"

#include <optional>
#include <vector>

namespace torsion {

/// A sublattice of Z^ambient kept in canonical row Hermite form, so equal
/// lattices have identical bases.
class Lattice {
public:
  explicit Lattice(std::size_t ambient = 0) : ambient_(ambient) {}
  static Lattice from_rows(const IntMatrix& rows);
  static Lattice from_vectors(const std::vector<Vec>& rows, std::size_t ambient);

  void insert(std::span<const Integer> v);

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  bool is_zero() const noexcept { return rows_.empty(); }

  IntMatrix basis() const { return IntMatrix::from_rows(rows_, ambient_); }
  const std::vector<Vec>& basis_vectors() const noexcept { return rows_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Integer coordinates of v in the canonical basis, if v lies in the lattice.
  std::optional<Vec> coordinates(std::span<const Integer> v) const;
  bool contains(std::span<const Integer> v) const { return coordinates(v).has_value(); }
  bool contains(const Lattice& other) const;

  Lattice scaled(const Integer& k) const;
  /// {v : k v in this lattice for some k != 0}.
  Lattice saturation() const;
  /// Index [other : this] when this lattice is a full-rank sublattice of other;
  /// nullopt when it is not contained or has smaller rank.
  std::optional<Integer> index_in(const Lattice& other) const;

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
  }

private:
  void canonicalize();

  std::size_t ambient_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);

}  // namespace torsion
