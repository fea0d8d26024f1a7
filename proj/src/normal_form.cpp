#include "torsion/normal_form.hpp"

#include "torsion/lattice.hpp"

#include <optional>
#include <stdexcept>

namespace torsion {

namespace {

int cmp_abs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

// row_i -= q * row_j, mirrored into the transform when present
void row_sub(IntMatrix& m, IntMatrix* t, std::size_t i, std::size_t j, const Integer& q) {
  if (q == 0) return;
  axpy(m.row(i), -q, m.row(j));
  if (t) axpy(t->row(i), -q, t->row(j));
}

void col_sub(IntMatrix& m, IntMatrix* t, std::size_t i, std::size_t j, const Integer& q) {
  if (q == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (m(r, j) != 0) m(r, i) -= q * m(r, j);
  if (t)
    for (std::size_t r = 0; r < t->rows(); ++r)
      if ((*t)(r, j) != 0) (*t)(r, i) -= q * (*t)(r, j);
}

void negate_row(IntMatrix& m, std::size_t i) {
  for (auto& e : m.row(i)) e = -e;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer trunc_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

struct SmithWork {
  IntMatrix d;
  std::optional<IntMatrix> left;
  std::optional<IntMatrix> right;
};

void smith_reduce(SmithWork& w, PivotStrategy strategy) {
  IntMatrix& d = w.d;
  IntMatrix* u = w.left ? &*w.left : nullptr;
  IntMatrix* v = w.right ? &*w.right : nullptr;
  const std::size_t rows = d.rows(), cols = d.cols();

  auto select_pivot = [&](std::size_t t) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    if (strategy == PivotStrategy::FirstNonzero) {
      for (std::size_t j = t; j < cols; ++j)
        for (std::size_t i = t; i < rows; ++i)
          if (d(i, j) != 0) return std::pair{i, j};
      return std::nullopt;
    }
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (d(i, j) != 0 && (!best || cmp_abs(d(i, j), d(best->first, best->second)) < 0)) {
          best = std::pair{i, j};
          if (abs(d(i, j)) == 1) return best;
        }
    return best;
  };

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    auto pivot = select_pivot(t);
    if (!pivot) break;
    d.swap_rows(t, pivot->first);
    if (u) u->swap_rows(t, pivot->first);
    d.swap_cols(t, pivot->second);
    if (v) v->swap_cols(t, pivot->second);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (d(i, t) != 0) {
          row_sub(d, u, i, t, trunc_div(d(i, t), d(t, t)));
          if (d(i, t) != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        if (d(t, j) != 0) {
          col_sub(d, v, j, t, trunc_div(d(t, j), d(t, t)));
          if (d(t, j) != 0) clean = false;
        }
      if (!clean) {
        // every remainder is smaller than the pivot, so moving one in makes progress
        std::optional<std::size_t> r, c;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (d(i, t) != 0 && (!r || (strategy == PivotStrategy::MinAbs && cmp_abs(d(i, t), d(*r, t)) < 0))) {
            r = i;
            if (strategy == PivotStrategy::FirstNonzero) break;
          }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (d(t, j) != 0 && (!c || (strategy == PivotStrategy::MinAbs && cmp_abs(d(t, j), d(t, *c)) < 0))) {
            c = j;
            if (strategy == PivotStrategy::FirstNonzero) break;
          }
        bool use_row = r && (!c || strategy == PivotStrategy::FirstNonzero || cmp_abs(d(*r, t), d(t, *c)) <= 0);
        if (use_row) {
          d.swap_rows(t, *r);
          if (u) u->swap_rows(t, *r);
        } else {
          d.swap_cols(t, *c);
          if (v) v->swap_cols(t, *c);
        }
        continue;
      }
      // divisibility: fold an offending row into the pivot row and repeat
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < rows && !bad; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (d(i, j) != 0 && !mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (!bad) break;
      row_sub(d, u, t, *bad, Integer(-1));
    }
    if (d(t, t) < 0) {
      negate_row(d, t);
      if (u) negate_row(*u, t);
    }
  }
}

}  // namespace

HermiteForm hnf(const IntMatrix& a) {
  HermiteForm h;
  h.form = a;
  h.transform = IntMatrix::identity(a.rows());
  IntMatrix& m = h.form;
  IntMatrix& t = h.transform;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    for (;;) {
      std::optional<std::size_t> best;
      std::size_t nonzero = 0;
      for (std::size_t i = row; i < m.rows(); ++i)
        if (m(i, col) != 0) {
          ++nonzero;
          if (!best || cmp_abs(m(i, col), m(*best, col)) < 0) best = i;
        }
      if (!best) break;
      m.swap_rows(row, *best);
      t.swap_rows(row, *best);
      if (nonzero == 1) break;
      for (std::size_t i = row + 1; i < m.rows(); ++i)
        if (m(i, col) != 0) row_sub(m, &t, i, row, trunc_div(m(i, col), m(row, col)));
    }
    if (m(row, col) == 0) continue;
    if (m(row, col) < 0) {
      negate_row(m, row);
      negate_row(t, row);
    }
    for (std::size_t i = 0; i < row; ++i)
      if (m(i, col) != 0) row_sub(m, &t, i, row, floor_div(m(i, col), m(row, col)));
    h.pivot_cols.push_back(col);
    ++row;
  }
  h.rank = row;
  return h;
}

SmithForm snf(const IntMatrix& a, PivotStrategy strategy) {
  SmithWork w{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols())};
  smith_reduce(w, strategy);
  SmithForm s;
  s.diagonal = std::move(w.d);
  s.left = std::move(*w.left);
  s.right = std::move(*w.right);
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
    if (s.diagonal(i, i) == 0) break;
    ++s.rank;
    if (s.diagonal(i, i) > 1) s.invariant_factors.push_back(s.diagonal(i, i));
  }
  return s;
}

std::vector<Integer> smith_diagonal(const IntMatrix& a) {
  SmithWork w{a, std::nullopt, std::nullopt};
  smith_reduce(w, PivotStrategy::MinAbs);
  std::vector<Integer> diag;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
    if (w.d(i, i) == 0) break;
    diag.push_back(w.d(i, i));
  }
  return diag;
}

std::size_t rank(const IntMatrix& a) {
  Lattice l(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) l.insert(a.row(i));
  return l.rank();
}

std::vector<Vec> rational_kernel_basis(const IntMatrix& a) {
  // v a^T == 0 as a row vector is a v == 0; the transform rows that kill a^T
  // extend to a unimodular matrix, so they span the saturated kernel.
  HermiteForm h = hnf(a.transpose());
  Lattice kernel(a.cols());
  for (std::size_t i = h.rank; i < h.transform.rows(); ++i) kernel.insert(h.transform.row(i));
  return kernel.basis_vectors();
}

std::vector<Vec> kernel_mod_p(const IntMatrix& a, unsigned long p) {
  if (!is_prime(p)) throw std::invalid_argument("kernel_mod_p: modulus must be prime");
  const std::size_t rows = a.rows(), cols = a.cols();
  const Integer mod = p;
  std::vector<Vec> m(rows, Vec(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      mpz_fdiv_r(m[i][j].get_mpz_t(), a(i, j).get_mpz_t(), mod.get_mpz_t());
    }
  std::vector<std::size_t> pivot_of_row;
  std::vector<bool> is_pivot(cols, false);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && m[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    Integer inv;
    mpz_invert(inv.get_mpz_t(), m[r][c].get_mpz_t(), mod.get_mpz_t());
    for (auto& e : m[r]) {
      e *= inv;
      mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Integer factor = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) {
        m[i][j] -= factor * m[r][j];
        mpz_fdiv_r(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), mod.get_mpz_t());
      }
    }
    pivot_of_row.push_back(c);
    is_pivot[c] = true;
    ++r;
  }
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_of_row.size(); ++i) {
      Integer e = -m[i][free];
      mpz_fdiv_r(v[pivot_of_row[i]].get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace torsion
