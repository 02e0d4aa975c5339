#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adacd/op_counter.hpp"

namespace adacd {

/// One sparse column: row indices strictly increasing, values nonzero.
struct SparseColumn {
  std::vector<std::uint32_t> rows;
  std::vector<double> values;

  std::size_t nnz() const { return rows.size(); }
};

/// Column-major sparse matrix. The column is the unit of access: the solver
/// touches exactly one column per iteration, so no row-wise view is kept.
/// Immutable after construction; column Euclidean norms are cached.
class SparseColumnMatrix {
 public:
  SparseColumnMatrix() = default;

  /// Takes ownership of the columns and validates the invariants
  /// (indices in range and strictly increasing, values nonzero and finite).
  SparseColumnMatrix(std::size_t n_rows, std::vector<SparseColumn> columns);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }
  std::size_t nnz() const { return nnz_; }
  double density() const;

  const SparseColumn& column(std::size_t i) const { return columns_[i]; }
  double column_norm(std::size_t i) const { return column_norms_[i]; }
  const std::vector<double>& column_norms() const { return column_norms_; }

  /// Dense d x n reconstruction, for small-instance oracles and tests.
  std::vector<double> to_dense() const;

 private:
  std::size_t n_rows_ = 0;
  std::size_t nnz_ = 0;
  std::vector<SparseColumn> columns_;
  std::vector<double> column_norms_;
};

/// a_i^T v over the column's nonzeros. Counts one column op.
double column_dot(const SparseColumnMatrix& m, std::size_t i, std::span<const double> v,
                  std::uint64_t& column_ops);

/// v += c * a_i. Counts one column op.
void add_scaled_column(std::span<double> v, const SparseColumnMatrix& m, std::size_t i, double c,
                       std::uint64_t& column_ops);

}  // namespace adacd
