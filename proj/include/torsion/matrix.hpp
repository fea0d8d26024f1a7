#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace torsion {

using Integer = mpz_class;
using Rational = mpq_class;
using Vec = std::vector<Integer>;

/// Dense matrix of unbounded integers, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);
  /// Convenience for tests and small literals.
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static IntMatrix diagonal(const std::vector<Integer>& diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Integer> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec row_vec(std::size_t i) const { return {row(i).begin(), row(i).end()}; }
  Vec col_vec(std::size_t j) const;

  void append_row(std::span<const Integer> r);
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  IntMatrix transpose() const;
  bool is_zero() const;
  std::size_t nonzero_rows() const;

  const std::vector<Integer>& entries() const noexcept { return data_; }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix scaled(const IntMatrix& a, const Integer& k);
/// Rows of `a` followed by rows of `b`; column counts must agree.
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

/// Row vector times matrix.
Vec mul(std::span<const Integer> v, const IntMatrix& a);
/// Matrix times column vector.
Vec mul(const IntMatrix& a, std::span<const Integer> v);

bool is_zero(std::span<const Integer> v);
Vec add(std::span<const Integer> a, std::span<const Integer> b);
Vec sub(std::span<const Integer> a, std::span<const Integer> b);
Vec scaled(std::span<const Integer> a, const Integer& k);
/// a += k * b
void axpy(std::span<Integer> a, const Integer& k, std::span<const Integer> b);
Integer content(std::span<const Integer> v);

/// Matrix text format: "rows cols" then row-major entries.
IntMatrix parse_matrix(std::istream& in);
IntMatrix parse_matrix(const std::string& text);
std::string format_matrix(const IntMatrix& a);

/// Largest power of `p` dividing `n`. Throws std::invalid_argument on n == 0.
Integer p_part(const Integer& n, unsigned long p);
/// Exponent of the largest power of `p` dividing `n` (n != 0).
unsigned long p_valuation(const Integer& n, unsigned long p);
bool is_prime(unsigned long p);
Integer ipow(unsigned long base, unsigned long exp);
/// Exponent k with p^k == n; throws if n is not a power of p.
unsigned long log_p_exact(const Integer& n, unsigned long p);

}  // namespace torsion
