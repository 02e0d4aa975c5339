#include "adacd/sparse_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adacd {

SparseColumnMatrix::SparseColumnMatrix(std::size_t n_rows, std::vector<SparseColumn> columns)
    : n_rows_(n_rows), columns_(std::move(columns)) {
  column_norms_.reserve(columns_.size());
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const SparseColumn& col = columns_[i];
    if (col.rows.size() != col.values.size()) {
      throw std::invalid_argument("column " + std::to_string(i) + ": index/value size mismatch");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < col.rows.size(); ++k) {
      if (col.rows[k] >= n_rows_) {
        throw std::invalid_argument("column " + std::to_string(i) + ": row index out of range");
      }
      if (k > 0 && col.rows[k] <= col.rows[k - 1]) {
        throw std::invalid_argument("column " + std::to_string(i) +
                                    ": row indices not strictly increasing");
      }
      const double v = col.values[k];
      if (v == 0.0 || !std::isfinite(v)) {
        throw std::invalid_argument("column " + std::to_string(i) + ": zero or non-finite value");
      }
      sq += v * v;
    }
    nnz_ += col.rows.size();
    column_norms_.push_back(std::sqrt(sq));
  }
}

double SparseColumnMatrix::density() const {
  const std::size_t cells = n_rows_ * n_cols();
  return cells == 0 ? 0.0 : static_cast<double>(nnz_) / static_cast<double>(cells);
}

std::vector<double> SparseColumnMatrix::to_dense() const {
  std::vector<double> dense(n_rows_ * n_cols(), 0.0);
  for (std::size_t i = 0; i < n_cols(); ++i) {
    const SparseColumn& col = columns_[i];
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      dense[col.rows[k] * n_cols() + i] = col.values[k];
    }
  }
  return dense;
}

double column_dot(const SparseColumnMatrix& m, std::size_t i, std::span<const double> v,
                  std::uint64_t& column_ops) {
  if (i >= m.n_cols()) throw std::out_of_range("column_dot: column index out of range");
  const SparseColumn& col = m.column(i);
  double acc = 0.0;
  for (std::size_t k = 0; k < col.nnz(); ++k) acc += col.values[k] * v[col.rows[k]];
  ++column_ops;
  return acc;
}

void add_scaled_column(std::span<double> v, const SparseColumnMatrix& m, std::size_t i, double c,
                       std::uint64_t& column_ops) {
  if (i >= m.n_cols()) throw std::out_of_range("add_scaled_column: column index out of range");
  const SparseColumn& col = m.column(i);
  for (std::size_t k = 0; k < col.nnz(); ++k) v[col.rows[k]] += c * col.values[k];
  ++column_ops;
}

}  // namespace adacd
