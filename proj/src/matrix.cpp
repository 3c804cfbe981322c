#include "streamcode/matrix.hpp"

#include <stdexcept>

namespace streamcode::gf {

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols)
    : field_(&field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

Matrix Matrix::identity(const Field& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

std::vector<FieldElement> Matrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("column index out of range");
  std::vector<FieldElement> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
  return out;
}

std::vector<FieldElement> Matrix::row(std::size_t r) const {
  if (r >= rows_) throw std::out_of_range("row index out of range");
  return {data_.begin() + static_cast<long>(r * cols_), data_.begin() + static_cast<long>((r + 1) * cols_)};
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix m(*field_, rows_, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] >= cols_) throw std::out_of_range("column index out of range");
    for (std::size_t r = 0; r < rows_; ++r) m(r, j) = (*this)(r, cols[j]);
  }
  return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix m(*field_, rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= rows_) throw std::out_of_range("row index out of range");
    for (std::size_t c = 0; c < cols_; ++c) m(i, c) = (*this)(rows[i], c);
  }
  return m;
}

void Matrix::swap_columns(std::size_t a, std::size_t b) {
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
  if (!field_->same_as(*rhs.field_)) throw FieldMismatch("matrix product: field mismatch");
  Matrix out(*field_, rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const FieldElement& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

std::vector<FieldElement> Matrix::left_multiply(std::span<const FieldElement> v) const {
  if (v.size() != rows_) throw std::invalid_argument("vector-matrix product: dimension mismatch");
  std::vector<FieldElement> out(cols_, field_->zero());
  for (std::size_t i = 0; i < rows_; ++i) {
    if (v[i].is_zero()) continue;
    for (std::size_t j = 0; j < cols_; ++j) out[j] += v[i] * (*this)(i, j);
  }
  return out;
}

std::vector<FieldElement> Matrix::right_multiply(std::span<const FieldElement> v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector product: dimension mismatch");
  std::vector<FieldElement> out(rows_, field_->zero());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    }
  }
  return out;
}

std::vector<std::size_t> row_reduce(Matrix& m, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(piv, k), m(r, k));
    }
    const FieldElement inv = m(r, c).inverse();
    for (std::size_t k = c; k < m.cols(); ++k) m(r, k) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const FieldElement f = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k) {
        if (!m(r, k).is_zero()) m(i, k) -= f * m(r, k);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t Matrix::rank() const {
  Matrix copy = *this;
  return row_reduce(copy, cols_).size();
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of a non-square matrix");
  Matrix aug(*field_, rows_, 2 * cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_ + i) = field_->one();
  }
  if (row_reduce(aug, cols_).size() != rows_) throw DivisionByZero("matrix is singular");
  Matrix out(*field_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = aug(i, cols_ + j);
  }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  return a.data_ == b.data_;
}

std::optional<std::vector<FieldElement>> solve_in_span(const Matrix& columns, std::span<const FieldElement> target) {
  if (target.size() != columns.rows()) throw std::invalid_argument("solve_in_span: dimension mismatch");
  const Field& f = columns.field();
  const std::size_t n = columns.cols();
  Matrix aug(f, columns.rows(), n + 1);
  for (std::size_t i = 0; i < columns.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = columns(i, j);
    if (!target[i].valid() || !target[i].field().same_as(f)) throw FieldMismatch("solve_in_span: field mismatch");
    aug(i, n) = target[i];
  }
  const auto pivots = row_reduce(aug, n);
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i) {
    if (!aug(i, n).is_zero()) return std::nullopt;
  }
  std::vector<FieldElement> lambda(n, f.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) lambda[pivots[i]] = aug(i, n);
  return lambda;
}

bool fq_independent(std::span<const FieldElement> elems, std::uint64_t q) {
  if (elems.empty()) return true;
  const Field& f = elems.front().field();
  for (const auto& e : elems) require_same_field(elems.front(), e);
  const int level = f.level_of_order(q);
  if (level < 0) throw FieldMismatch("fq_independent: q is not the order of a tower subfield");
  FieldPtr sub = f.prefix(static_cast<std::size_t>(level));
  const std::size_t coords = f.dimension() / sub->dimension();
  if (elems.size() > coords) return false;
  Matrix m(*sub, coords, elems.size());
  for (std::size_t j = 0; j < elems.size(); ++j) {
    const auto parts = expand_over(elems[j], q);
    for (std::size_t i = 0; i < coords; ++i) m(i, j) = parts[i];
  }
  return m.rank() == elems.size();
}

}  // namespace streamcode::gf
