#pragma once

#include "torsion/matrix.hpp"

#include <vector>

namespace torsion {

/// Row Hermite form: `transform * input == form`, `transform` unimodular.
/// Nonzero rows come first, pivots strictly move right, pivots are positive and
/// entries above a pivot lie in [0, pivot).
struct HermiteForm {
  IntMatrix form;
  IntMatrix transform;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

HermiteForm hnf(const IntMatrix& a);

enum class PivotStrategy {
  MinAbs,        // smallest |entry| in the active block
  FirstNonzero,  // first nonzero in column-major order
};

/// `left * input * right == diagonal`; `left`, `right` unimodular,
/// d1 | d2 | ... | dr > 0 followed by zeros.
struct SmithForm {
  IntMatrix diagonal;
  IntMatrix left;
  IntMatrix right;
  std::vector<Integer> invariant_factors;  // only the d_i > 1
  std::size_t rank = 0;
};

SmithForm snf(const IntMatrix& a, PivotStrategy strategy = PivotStrategy::MinAbs);

/// Transform-free path: the full nonzero diagonal d1 | ... | dr (ones included).
std::vector<Integer> smith_diagonal(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);

/// Basis of {v integer : a * v == 0}, canonical (row HNF of the basis).
/// The lattice it spans is saturated and has cols - rank(a) generators.
std::vector<Vec> rational_kernel_basis(const IntMatrix& a);

/// Basis of {v in F_p^cols : a * v == 0 mod p}, entries in [0, p), one vector
/// per free column of the reduced echelon form.
std::vector<Vec> kernel_mod_p(const IntMatrix& a, unsigned long p);

}  // namespace torsion
