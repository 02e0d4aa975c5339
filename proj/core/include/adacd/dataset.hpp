#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "adacd/sparse_matrix.hpp"

namespace adacd {

/// What a column of the matrix means. LIBSVM files load in
/// points_as_columns form (one datapoint per line); the Lasso
/// works on the transposed, features_as_columns form.
enum class Orientation {
  features_as_columns,  // Lasso: targets has one entry per row (datapoint)
  points_as_columns,    // SVM: targets has one +/-1 label per column (datapoint)
};

struct Dataset {
  SparseColumnMatrix matrix;
  std::vector<double> targets;
  Orientation orientation = Orientation::points_as_columns;
};

/// Raised on malformed input files; message carries the line number.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LibsvmOptions {
  bool strict = false;          // reject empty files
  std::size_t n_features = 0;   // 0 = infer from max index seen
};

/// Parses `label idx:val ...` lines with 1-based, strictly increasing
/// indices. Indices become 0-based here and nowhere else. Explicit zero
/// values are dropped. Result is points_as_columns with one label per
/// column; the loader reports d = n_rows (features), n = n_cols (points).
Dataset load_libsvm(const std::string& path, const LibsvmOptions& options = {});

/// Writes a points_as_columns dataset back to LIBSVM text, with enough
/// decimal digits that load_libsvm reproduces every value bit-exactly.
void save_libsvm(const std::string& path, const Dataset& ds);

enum class NormalizeMode { none, unit_l2 };

/// unit_l2 rescales every column to Euclidean norm 1; errors on an
/// all-zero column, naming it.
Dataset normalize_columns(const Dataset& ds, NormalizeMode mode);

/// Uniform row/column selection without replacement (seeded), followed by
/// removal of all-zero rows and columns, so output dims may be smaller.
Dataset subsample(const Dataset& ds, std::size_t n_rows, std::size_t n_cols, std::uint64_t seed);

/// Reorients a loaded dataset for a problem family. features_as_columns
/// transposes the matrix (targets then hold one response per row);
/// points_as_columns validates that every label is exactly +/-1.
Dataset with_orientation(const Dataset& ds, Orientation target);

/// Dense random regression instance: y = A alpha_true + noise * gaussian,
/// alpha_true with ceil(support_frac * n) nonzeros. Column scales are
/// drawn log-normally so norms differ, as in real data. Deterministic.
Dataset synthetic_lasso(std::size_t d, std::size_t n, double support_frac, double noise,
                        std::uint64_t seed);

/// Dense random binary classification instance in points_as_columns form:
/// labels are sign(u^T a_i + noise * gaussian) for a hidden u with
/// ceil(support_frac * d) nonzeros. Deterministic.
Dataset synthetic_svm(std::size_t d, std::size_t n, double support_frac, double noise,
                      std::uint64_t seed);

/// Summary statistics in the shape dataset tables usually print them.
/// Note the two norm-dispersion ratios: published tables label the column
/// c_v = mean/std while the conventional coefficient of variation is
/// std/mean, so both are reported side by side.
struct DatasetStats {
  std::size_t d = 0;  // rows (features in loaded orientation)
  std::size_t n = 0;  // columns (datapoints in loaded orientation)
  std::size_t nnz = 0;
  double density = 0.0;            // nnz / (n d)
  double column_norm_mean = 0.0;   // mu(||a_i||)
  double column_norm_std = 0.0;    // sigma(||a_i||), population
  double cv_std_over_mean = 0.0;   // sigma/mu, the usual c_v
  double cv_mean_over_std = 0.0;   // mu/sigma, as printed in dataset tables
};

DatasetStats describe(const Dataset& ds);

}  // namespace adacd
