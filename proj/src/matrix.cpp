#include "torsion/matrix.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace torsion {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw std::invalid_argument("IntMatrix: entry count does not match shape");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<Integer>& diag) {
  IntMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vec IntMatrix::col_vec(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void IntMatrix::append_row(std::span<const Integer> r) {
  if (r.size() != cols_) throw std::invalid_argument("IntMatrix::append_row: width mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_zero() const {
  for (const auto& e : data_)
    if (e != 0) return false;
  return true;
}

std::size_t IntMatrix::nonzero_rows() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    if (!torsion::is_zero(row(i))) ++n;
  return n;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Integer& bkj = b(k, j);
        if (bkj != 0) c(i, j) += aik * bkj;
      }
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: shape mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: shape mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

IntMatrix scaled(const IntMatrix& a, const Integer& k) {
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= k;
  return c;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: width mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < b.rows(); ++i) c.append_row(b.row(i));
  return c;
}

Vec mul(std::span<const Integer> v, const IntMatrix& a) {
  if (v.size() != a.rows()) throw std::invalid_argument("row vector product: shape mismatch");
  Vec out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) out[j] += v[i] * a(i, j);
  }
  return out;
}

Vec mul(const IntMatrix& a, std::span<const Integer> v) {
  if (v.size() != a.cols()) throw std::invalid_argument("column vector product: shape mismatch");
  Vec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (v[j] != 0 && a(i, j) != 0) out[i] += a(i, j) * v[j];
  return out;
}

bool is_zero(std::span<const Integer> v) {
  for (const auto& e : v)
    if (e != 0) return false;
  return true;
}

Vec add(std::span<const Integer> a, std::span<const Integer> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sum: length mismatch");
  Vec c(a.begin(), a.end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

Vec sub(std::span<const Integer> a, std::span<const Integer> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector difference: length mismatch");
  Vec c(a.begin(), a.end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

Vec scaled(std::span<const Integer> a, const Integer& k) {
  Vec c(a.begin(), a.end());
  for (auto& e : c) e *= k;
  return c;
}

void axpy(std::span<Integer> a, const Integer& k, std::span<const Integer> b) {
  if (k == 0) return;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] != 0) a[i] += k * b[i];
}

Integer content(std::span<const Integer> v) {
  Integer g = 0;
  for (const auto& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
  return g;
}

IntMatrix parse_matrix(std::istream& in) {
  long long r = -1, c = -1;
  if (!(in >> r >> c) || r < 0 || c < 0)
    throw std::invalid_argument("matrix text: expected 'rows cols' header");
  std::vector<Integer> entries;
  entries.reserve(static_cast<std::size_t>(r * c));
  std::string tok;
  for (long long k = 0; k < r * c; ++k) {
    if (!(in >> tok)) throw std::invalid_argument("matrix text: too few entries");
    Integer v;
    if (v.set_str(tok, 10) != 0) throw std::invalid_argument("matrix text: bad integer '" + tok + "'");
    entries.push_back(std::move(v));
  }
  if (in >> tok) throw std::invalid_argument("matrix text: trailing data '" + tok + "'");
  return IntMatrix(static_cast<std::size_t>(r), static_cast<std::size_t>(c), std::move(entries));
}

IntMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

std::string format_matrix(const IntMatrix& a) {
  std::ostringstream out;
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
    out << '\n';
  }
  return out.str();
}

Integer p_part(const Integer& n, unsigned long p) {
  if (n == 0) throw std::invalid_argument("p_part: n must be nonzero");
  if (!is_prime(p)) throw std::invalid_argument("p_part: p must be prime");
  return ipow(p, p_valuation(n, p));
}

unsigned long p_valuation(const Integer& n, unsigned long p) {
  if (n == 0) throw std::invalid_argument("p_valuation: n must be nonzero");
  Integer rest;
  Integer pp = p;
  return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
}

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Integer ipow(unsigned long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

unsigned long log_p_exact(const Integer& n, unsigned long p) {
  if (n <= 0) throw std::invalid_argument("log_p_exact: n must be positive");
  unsigned long k = p_valuation(n, p);
  if (ipow(p, k) != n) throw std::invalid_argument("log_p_exact: not a power of p");
  return k;
}

}  // namespace torsion
