#ifndef MECHKERNEL_MATRIX_HPP
#define MECHKERNEL_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "mechkernel/rational.hpp"

namespace mechkernel {

struct Rref;

// Dense matrix over exact rationals. Row-major storage. All elimination
// routines pivot on the first nonzero entry in column order, so results
// are deterministic functions of the input.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const Matrix& other) const = default;

  Matrix multiply(const Matrix& other) const;
  RatVec multiply(const RatVec& vec) const;
  Matrix kronecker(const Matrix& other) const;
  Matrix transpose() const;

  // Appends the rows of `other` below this matrix (column counts must match).
  Matrix stack_below(const Matrix& other) const;

  // Gauss-Jordan reduced row echelon form.
  Rref reduced_row_echelon() const;

  std::size_t rank() const;

  // Basis of {x : Ax = 0}. One vector per free column; entry at the free
  // column is 1, entries at pivot columns are read off the RREF.
  std::vector<RatVec> null_space_basis() const;

  // Solves Ax = b. Returns the unique solution, or nullopt when the system
  // is inconsistent or underdetermined.
  std::optional<RatVec> solve(const RatVec& rhs) const;

  // Inverse of a square matrix, or nullopt when singular.
  std::optional<Matrix> inverse() const;

  bool is_zero() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Result of Gauss-Jordan elimination.
struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

// ker(a) == ker(b) for matrices with the same column count, decided by
// checking each null basis vector of one against the other.
bool same_null_space(const Matrix& a, const Matrix& b);

// ker(a) subseteq ker(b).
bool null_space_contained(const Matrix& a, const Matrix& b);

}  // namespace mechkernel

#endif  // MECHKERNEL_MATRIX_HPP
