#include "mechkernel/matrix.hpp"

#include <algorithm>
#include <utility>

#include "mechkernel/errors.hpp"

namespace mechkernel {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("matrix data size does not match shape");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::multiply(const Matrix& other) const {
  if (cols_ != other.rows_) {
    throw DimensionMismatch("matrix product: inner dimensions differ");
  }
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        out.at(i, j) += a * other.at(k, j);
      }
    }
  }
  return out;
}

RatVec Matrix::multiply(const RatVec& vec) const {
  if (cols_ != vec.size()) {
    throw DimensionMismatch("matrix-vector product: dimensions differ");
  }
  RatVec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (at(i, j) != 0) out[i] += at(i, j) * vec[j];
    }
  }
  return out;
}

Matrix Matrix::kronecker(const Matrix& other) const {
  Matrix out(rows_ * other.rows_, cols_ * other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const Rational& a = at(i, j);
      if (a == 0) continue;
      for (std::size_t p = 0; p < other.rows_; ++p) {
        for (std::size_t q = 0; q < other.cols_; ++q) {
          out.at(i * other.rows_ + p, j * other.cols_ + q) = a * other.at(p, q);
        }
      }
    }
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  }
  return out;
}

Matrix Matrix::stack_below(const Matrix& other) const {
  if (cols_ != other.cols_) {
    throw DimensionMismatch("stack_below: column counts differ");
  }
  Matrix out(rows_ + other.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
  }
  for (std::size_t i = 0; i < other.rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out.at(rows_ + i, j) = other.at(i, j);
  }
  return out;
}

Rref Matrix::reduced_row_echelon() const {
  Rref result{*this, {}, 0};
  Matrix& m = result.reduced;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols_ && pivot_row < rows_; ++col) {
    // first nonzero entry at or below pivot_row
    std::size_t sel = pivot_row;
    while (sel < rows_ && m.at(sel, col) == 0) ++sel;
    if (sel == rows_) continue;
    if (sel != pivot_row) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(pivot_row, j));
    }
    const Rational pivot = m.at(pivot_row, col);
    for (std::size_t j = 0; j < cols_; ++j) m.at(pivot_row, j) /= pivot;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pivot_row || m.at(r, col) == 0) continue;
      const Rational factor = m.at(r, col);
      for (std::size_t j = 0; j < cols_; ++j) {
        m.at(r, j) -= factor * m.at(pivot_row, j);
      }
    }
    result.pivot_cols.push_back(col);
    ++pivot_row;
  }
  result.rank = result.pivot_cols.size();
  return result;
}

std::size_t Matrix::rank() const { return reduced_row_echelon().rank; }

std::vector<RatVec> Matrix::null_space_basis() const {
  const Rref rref = reduced_row_echelon();
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t c : rref.pivot_cols) is_pivot[c] = true;

  std::vector<RatVec> basis;
  for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
    if (is_pivot[free_col]) continue;
    RatVec v(cols_);
    v[free_col] = 1;
    for (std::size_t r = 0; r < rref.rank; ++r) {
      v[rref.pivot_cols[r]] = -rref.reduced.at(r, free_col);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVec> Matrix::solve(const RatVec& rhs) const {
  if (rhs.size() != rows_) {
    throw DimensionMismatch("solve: rhs length does not match row count");
  }
  Matrix aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = rhs[i];
  }
  const Rref rref = aug.reduced_row_echelon();
  // inconsistent if the rhs column is a pivot
  for (std::size_t c : rref.pivot_cols) {
    if (c == cols_) return std::nullopt;
  }
  if (rref.rank < cols_) return std::nullopt;  // underdetermined
  RatVec x(cols_);
  for (std::size_t r = 0; r < rref.rank; ++r) {
    x[rref.pivot_cols[r]] = rref.reduced.at(r, cols_);
  }
  return x;
}

std::optional<Matrix> Matrix::inverse() const {
  if (rows_ != cols_) throw DimensionMismatch("inverse of non-square matrix");
  Matrix aug(rows_, 2 * cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = 1;
  }
  const Rref rref = aug.reduced_row_echelon();
  if (rref.rank < rows_) return std::nullopt;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (rref.pivot_cols[r] != r) return std::nullopt;
  }
  Matrix inv(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) inv.at(i, j) = rref.reduced.at(i, cols_ + j);
  }
  return inv;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& r) { return r == 0; });
}

bool null_space_contained(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionMismatch("null space comparison: column counts differ");
  }
  for (const RatVec& v : a.null_space_basis()) {
    for (const Rational& entry : b.multiply(v)) {
      if (entry != 0) return false;
    }
  }
  return true;
}

bool same_null_space(const Matrix& a, const Matrix& b) {
  return null_space_contained(a, b) && null_space_contained(b, a);
}

}  // namespace mechkernel
