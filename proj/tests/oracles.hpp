#pragma once

// Slow reference computations, kept independent of the library algorithms.

#include "torsion/matrix.hpp"

#include <functional>
#include <random>
#include <vector>

namespace oracle {

using torsion::Integer;
using torsion::IntMatrix;
using torsion::Vec;

/// Fraction-free Gaussian elimination.
inline Integer bareiss_det(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return 0;
      m.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Cofactor expansion, for cross-checking the elimination on tiny inputs.
inline Integer laplace_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    Integer term = m(0, c) * laplace_det(minor);
    total += (c % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      f(idx);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

/// gcd of all k x k minors.
inline Integer minor_gcd(const IntMatrix& a, std::size_t k) {
  Integer g = 0;
  for_each_subset(a.rows(), k, [&](const std::vector<std::size_t>& rows) {
    for_each_subset(a.cols(), k, [&](const std::vector<std::size_t>& cols) {
      IntMatrix sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(rows[i], cols[j]);
      Integer d = bareiss_det(sub);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    });
  });
  return g;
}

/// Determinantal divisors d_k / d_(k-1): the full nonzero Smith diagonal.
inline std::vector<Integer> smith_diagonal_by_minors(const IntMatrix& a) {
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= std::min(a.rows(), a.cols()); ++k) {
    Integer g = minor_gcd(a, k);
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

/// Order of the torsion subgroup of Z^cols / rowspace(a).
inline Integer torsion_by_minors(const IntMatrix& a) {
  Integer t = 1;
  for (const auto& d : smith_diagonal_by_minors(a)) t *= d;
  return t;
}

inline Integer p_part(Integer n, unsigned long p) {
  Integer out = 1;
  if (n < 0) n = -n;
  while (n != 0 && mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    n /= p;
    out *= p;
  }
  return out;
}

/// All integer vectors with entries in [-bound, bound] solving a v = 0.
inline std::vector<Vec> small_kernel_vectors(const IntMatrix& a, long bound) {
  std::vector<Vec> out;
  Vec v(a.cols());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == v.size()) {
      if (torsion::is_zero(torsion::mul(a, v))) out.push_back(v);
      return;
    }
    for (long c = -bound; c <= bound; ++c) {
      v[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace oracle
