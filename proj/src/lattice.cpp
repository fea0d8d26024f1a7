#include "torsion/lattice.hpp"

#include "torsion/normal_form.hpp"

#include <stdexcept>

namespace torsion {

namespace {

std::size_t leading(std::span<const Integer> v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return v.size();
}

}  // namespace

Lattice Lattice::from_rows(const IntMatrix& rows) {
  Lattice l(rows.cols());
  for (std::size_t i = 0; i < rows.rows(); ++i) l.insert(rows.row(i));
  return l;
}

Lattice Lattice::from_vectors(const std::vector<Vec>& rows, std::size_t ambient) {
  Lattice l(ambient);
  for (const auto& r : rows) l.insert(r);
  return l;
}

void Lattice::insert(std::span<const Integer> v_in) {
  if (v_in.size() != ambient_) throw std::invalid_argument("Lattice::insert: width mismatch");
  Vec v(v_in.begin(), v_in.end());
  std::size_t lead = leading(v);
  std::size_t k = 0;
  while (lead < ambient_) {
    if (k == rows_.size() || lead < pivots_[k]) {
      rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(k), std::move(v));
      pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(k), lead);
      canonicalize();
      return;
    }
    if (lead == pivots_[k]) {
      Vec& b = rows_[k];
      const Integer bp = b[lead], vp = v[lead];
      if (mpz_divisible_p(vp.get_mpz_t(), bp.get_mpz_t())) {
        axpy(v, -Integer(vp / bp), b);
      } else {
        Integer g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), bp.get_mpz_t(), vp.get_mpz_t());
        Vec nb = torsion::scaled(b, s);
        axpy(nb, t, v);
        Vec nv = torsion::scaled(v, Integer(bp / g));
        axpy(nv, -Integer(vp / g), b);
        b = std::move(nb);
        v = std::move(nv);
      }
      lead = leading(v);
    }
    ++k;
  }
  canonicalize();
}

void Lattice::canonicalize() {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t pc = pivots_[k];
    if (rows_[k][pc] < 0)
      for (auto& e : rows_[k]) e = -e;
    const Integer& piv = rows_[k][pc];
    for (std::size_t i = 0; i < k; ++i) {
      if (rows_[i][pc] == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows_[i][pc].get_mpz_t(), piv.get_mpz_t());
      axpy(rows_[i], -q, rows_[k]);
    }
  }
}

std::optional<Vec> Lattice::coordinates(std::span<const Integer> v_in) const {
  if (v_in.size() != ambient_) throw std::invalid_argument("Lattice::coordinates: width mismatch");
  Vec v(v_in.begin(), v_in.end());
  Vec coords(rows_.size());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t pc = pivots_[k];
    for (std::size_t c = (k ? pivots_[k - 1] + 1 : 0); c < pc; ++c)
      if (v[c] != 0) return std::nullopt;
    if (v[pc] == 0) continue;
    if (!mpz_divisible_p(v[pc].get_mpz_t(), rows_[k][pc].get_mpz_t())) return std::nullopt;
    coords[k] = v[pc] / rows_[k][pc];
    axpy(v, -coords[k], rows_[k]);
  }
  if (!torsion::is_zero(v)) return std::nullopt;
  return coords;
}

bool Lattice::contains(const Lattice& other) const {
  if (other.ambient_ != ambient_) return false;
  for (const auto& r : other.rows_)
    if (!contains(r)) return false;
  return true;
}

Lattice Lattice::scaled(const Integer& k) const {
  Lattice l(ambient_);
  if (k == 0) return l;
  l.rows_ = rows_;
  l.pivots_ = pivots_;
  for (auto& r : l.rows_)
    for (auto& e : r) e *= k;
  l.canonicalize();
  return l;
}

Lattice Lattice::saturation() const {
  if (rows_.empty()) return Lattice(ambient_);
  auto orth = rational_kernel_basis(basis());
  if (orth.empty()) {
    Lattice full(ambient_);
    for (std::size_t i = 0; i < ambient_; ++i) {
      Vec e(ambient_);
      e[i] = 1;
      full.insert(e);
    }
    return full;
  }
  return from_vectors(rational_kernel_basis(IntMatrix::from_rows(orth, ambient_)), ambient_);
}

std::optional<Integer> Lattice::index_in(const Lattice& other) const {
  if (rank() != other.rank() || !other.contains(*this)) return std::nullopt;
  IntMatrix coords(0, other.rank());
  for (const auto& r : rows_) coords.append_row(*other.coordinates(r));
  Integer idx = 1;
  for (const auto& d : smith_diagonal(coords)) idx *= d;
  return idx;
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  Lattice s = a;
  for (const auto& r : b.basis_vectors()) s.insert(r);
  return s;
}

Lattice lattice_intersection(const Lattice& a, const Lattice& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("lattice_intersection: ambient mismatch");
  if (a.is_zero() || b.is_zero()) return Lattice(a.ambient());
  // (x, y) with x A = y B, i.e. the left kernel of [A; -B]
  IntMatrix stacked = vstack(a.basis(), scaled(b.basis(), Integer(-1)));
  auto kernel = rational_kernel_basis(stacked.transpose());
  Lattice out(a.ambient());
  for (const auto& k : kernel) {
    Vec x(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(a.rank()));
    out.insert(mul(x, a.basis()));
  }
  return out;
}

}  // namespace torsion
