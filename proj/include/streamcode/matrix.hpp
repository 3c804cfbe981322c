// Dense matrices over a gf::Field with exact Gaussian elimination.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "streamcode/gf.hpp"

namespace streamcode::gf {

class Matrix {
 public:
  Matrix() = default;
  Matrix(const Field& field, std::size_t rows, std::size_t cols);

  static Matrix identity(const Field& field, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return *field_; }
  const Field* field_ptr() const { return field_; }

  FieldElement& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const FieldElement& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<FieldElement> column(std::size_t c) const;
  std::vector<FieldElement> row(std::size_t r) const;
  /// Submatrix keeping the listed columns, in the given order.
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  void swap_columns(std::size_t a, std::size_t b);

  Matrix operator*(const Matrix& rhs) const;
  /// Row vector times matrix.
  std::vector<FieldElement> left_multiply(std::span<const FieldElement> v) const;
  /// Matrix times column vector.
  std::vector<FieldElement> right_multiply(std::span<const FieldElement> v) const;

  std::size_t rank() const;
  /// Inverse of a square matrix; throws DivisionByZero if singular.
  Matrix inverse() const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  const Field* field_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldElement> data_;
};

/// Reduce in place to row echelon form; returns pivot column per pivot row.
/// Pivots are the first nonzero entry found scanning rows top-down.
std::vector<std::size_t> row_reduce(Matrix& m, std::size_t pivot_cols);

/// Coefficients lambda with columns * lambda = target, or nullopt when the
/// target is outside the column span. Free variables are set to zero.
std::optional<std::vector<FieldElement>> solve_in_span(const Matrix& columns, std::span<const FieldElement> target);

/// Whether the elements are linearly independent over the tower subfield
/// of order q.
bool fq_independent(std::span<const FieldElement> elems, std::uint64_t q);

}  // namespace streamcode::gf
