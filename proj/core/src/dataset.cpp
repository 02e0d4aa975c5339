#include "adacd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "adacd/rng.hpp"

namespace adacd {

namespace {

double parse_double(std::string_view token, std::size_t line_no, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw data_error("line " + std::to_string(line_no) + ": malformed " + what + " '" +
                     std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw data_error("line " + std::to_string(line_no) + ": non-finite " + what);
  }
  return value;
}

std::size_t parse_index(std::string_view token, std::size_t line_no) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
    throw data_error("line " + std::to_string(line_no) + ": malformed feature index '" +
                     std::string(token) + "'");
  }
  return value;
}

std::string format_shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

Dataset load_libsvm(const std::string& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path + "'");

  std::vector<SparseColumn> points;
  std::vector<double> labels;
  std::size_t max_feature = options.n_features;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    // strip trailing CR and comments
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
      rest = rest.substr(0, hash);
    }
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ' || rest.back() == '\t')) {
      rest.remove_suffix(1);
    }
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
    if (rest.empty()) continue;

    const auto next_token = [&rest]() {
      const auto pos = rest.find_first_of(" \t");
      std::string_view tok = rest.substr(0, pos);
      rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
      return tok;
    };

    labels.push_back(parse_double(next_token(), line_no, "label"));

    SparseColumn col;
    std::size_t prev_index = 0;
    while (!rest.empty()) {
      const std::string_view tok = next_token();
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw data_error("line " + std::to_string(line_no) + ": expected idx:val, got '" +
                         std::string(tok) + "'");
      }
      const std::size_t index = parse_index(tok.substr(0, colon), line_no);
      const double value = parse_double(tok.substr(colon + 1), line_no, "feature value");
      if (index <= prev_index) {
        throw data_error("line " + std::to_string(line_no) +
                         ": feature indices not strictly increasing");
      }
      prev_index = index;
      if (options.n_features != 0 && index > options.n_features) {
        throw data_error("line " + std::to_string(line_no) + ": feature index " +
                         std::to_string(index) + " exceeds configured count");
      }
      max_feature = std::max(max_feature, index);
      if (value != 0.0) {
        col.rows.push_back(static_cast<std::uint32_t>(index - 1));  // 1-based on disk only
        col.values.push_back(value);
      }
    }
    points.push_back(std::move(col));
  }

  if (options.strict && points.empty()) throw data_error("'" + path + "' contains no datapoints");

  Dataset ds;
  ds.matrix = SparseColumnMatrix(max_feature, std::move(points));
  ds.targets = std::move(labels);
  ds.orientation = Orientation::points_as_columns;
  return ds;
}

void save_libsvm(const std::string& path, const Dataset& ds) {
  if (ds.orientation != Orientation::points_as_columns) {
    throw std::invalid_argument("save_libsvm expects a points_as_columns dataset");
  }
  std::ofstream out(path);
  if (!out) throw data_error("cannot write '" + path + "'");
  for (std::size_t i = 0; i < ds.matrix.n_cols(); ++i) {
    out << format_shortest(ds.targets[i]);
    const SparseColumn& col = ds.matrix.column(i);
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      out << ' ' << (col.rows[k] + 1) << ':' << format_shortest(col.values[k]);
    }
    out << '\n';
  }
}

Dataset normalize_columns(const Dataset& ds, NormalizeMode mode) {
  if (mode == NormalizeMode::none) return ds;
  std::vector<SparseColumn> columns;
  columns.reserve(ds.matrix.n_cols());
  for (std::size_t i = 0; i < ds.matrix.n_cols(); ++i) {
    const double norm = ds.matrix.column_norm(i);
    if (norm == 0.0) {
      throw data_error("normalize: column " + std::to_string(i) + " is all-zero");
    }
    SparseColumn col = ds.matrix.column(i);
    for (double& v : col.values) v /= norm;
    columns.push_back(std::move(col));
  }
  Dataset out;
  out.matrix = SparseColumnMatrix(ds.matrix.n_rows(), std::move(columns));
  out.targets = ds.targets;
  out.orientation = ds.orientation;
  return out;
}

namespace {

/// Sorted selection of k distinct values from [0, limit), seeded.
std::vector<std::size_t> sample_without_replacement(std::size_t limit, std::size_t k,
                                                    SplitMix64& rng) {
  std::vector<std::size_t> pool(limit);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(limit - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

Dataset select_submatrix(const Dataset& ds, const std::vector<std::size_t>& row_ids,
                         const std::vector<std::size_t>& col_ids) {
  std::vector<std::uint32_t> row_map(ds.matrix.n_rows(), UINT32_MAX);
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    row_map[row_ids[r]] = static_cast<std::uint32_t>(r);
  }
  std::vector<SparseColumn> columns;
  columns.reserve(col_ids.size());
  for (const std::size_t c : col_ids) {
    const SparseColumn& src = ds.matrix.column(c);
    SparseColumn col;
    for (std::size_t k = 0; k < src.nnz(); ++k) {
      if (row_map[src.rows[k]] != UINT32_MAX) {
        col.rows.push_back(row_map[src.rows[k]]);
        col.values.push_back(src.values[k]);
      }
    }
    columns.push_back(std::move(col));
  }

  Dataset out;
  out.matrix = SparseColumnMatrix(row_ids.size(), std::move(columns));
  const bool targets_per_column = ds.orientation == Orientation::points_as_columns;
  const auto& keep = targets_per_column ? col_ids : row_ids;
  out.targets.reserve(keep.size());
  for (const std::size_t id : keep) out.targets.push_back(ds.targets[id]);
  out.orientation = ds.orientation;
  return out;
}

}  // namespace

Dataset subsample(const Dataset& ds, std::size_t n_rows, std::size_t n_cols, std::uint64_t seed) {
  if (n_rows > ds.matrix.n_rows() || n_cols > ds.matrix.n_cols()) {
    throw std::invalid_argument("subsample: requested size exceeds dataset");
  }
  SplitMix64 rng(seed);
  const auto rows = sample_without_replacement(ds.matrix.n_rows(), n_rows, rng);
  const auto cols = sample_without_replacement(ds.matrix.n_cols(), n_cols, rng);
  Dataset picked = select_submatrix(ds, rows, cols);

  // Zero rows/columns are removed only after the selection.
  std::vector<bool> row_used(picked.matrix.n_rows(), false);
  std::vector<std::size_t> keep_cols;
  for (std::size_t c = 0; c < picked.matrix.n_cols(); ++c) {
    if (picked.matrix.column(c).nnz() > 0) {
      keep_cols.push_back(c);
      for (const std::uint32_t r : picked.matrix.column(c).rows) row_used[r] = true;
    }
  }
  std::vector<std::size_t> keep_rows;
  for (std::size_t r = 0; r < row_used.size(); ++r) {
    if (row_used[r]) keep_rows.push_back(r);
  }
  if (keep_rows.size() == picked.matrix.n_rows() && keep_cols.size() == picked.matrix.n_cols()) {
    return picked;
  }
  return select_submatrix(picked, keep_rows, keep_cols);
}

Dataset with_orientation(const Dataset& ds, Orientation target) {
  if (ds.orientation == target) {
    if (target == Orientation::points_as_columns) {
      for (std::size_t i = 0; i < ds.targets.size(); ++i) {
        if (ds.targets[i] != 1.0 && ds.targets[i] != -1.0) {
          throw data_error("classification label at datapoint " + std::to_string(i) +
                           " is not +/-1");
        }
      }
    }
    return ds;
  }
  // Transpose: counting sort of entries by row.
  const SparseColumnMatrix& m = ds.matrix;
  std::vector<SparseColumn> columns(m.n_rows());
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    const SparseColumn& col = m.column(c);
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      columns[col.rows[k]].rows.push_back(static_cast<std::uint32_t>(c));
      columns[col.rows[k]].values.push_back(col.values[k]);
    }
  }
  Dataset out;
  out.matrix = SparseColumnMatrix(m.n_cols(), std::move(columns));
  out.targets = ds.targets;
  out.orientation = target;
  if (target == Orientation::points_as_columns) return with_orientation(out, target);
  return out;
}

namespace {

std::vector<SparseColumn> dense_gaussian_columns(std::size_t d, std::size_t n, SplitMix64& rng) {
  std::vector<SparseColumn> columns(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Log-normal per-column scale, so column norms spread like real data.
    const double scale = std::exp(0.5 * rng.next_gaussian());
    columns[j].rows.resize(d);
    columns[j].values.resize(d);
    for (std::size_t r = 0; r < d; ++r) {
      columns[j].rows[r] = static_cast<std::uint32_t>(r);
      double v = scale * rng.next_gaussian();
      if (v == 0.0) v = scale;  // keep the nonzero-value invariant
      columns[j].values[r] = v;
    }
  }
  return columns;
}

std::vector<std::size_t> random_support(std::size_t n, double frac, SplitMix64& rng) {
  const auto k = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n)));
  return sample_without_replacement(n, std::min(k, n), rng);
}

}  // namespace

Dataset synthetic_lasso(std::size_t d, std::size_t n, double support_frac, double noise,
                        std::uint64_t seed) {
  if (support_frac <= 0.0 || support_frac > 1.0) {
    throw std::invalid_argument("synthetic_lasso: support_frac must be in (0, 1]");
  }
  SplitMix64 rng(seed);
  Dataset ds;
  ds.matrix = SparseColumnMatrix(d, dense_gaussian_columns(d, n, rng));
  ds.orientation = Orientation::features_as_columns;

  std::vector<double> alpha_true(n, 0.0);
  for (const std::size_t j : random_support(n, support_frac, rng)) {
    const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
    alpha_true[j] = sign * (0.5 + 1.5 * rng.next_double());
  }
  ds.targets.assign(d, 0.0);
  std::uint64_t scratch_ops = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (alpha_true[j] != 0.0) {
      add_scaled_column(ds.targets, ds.matrix, j, alpha_true[j], scratch_ops);
    }
  }
  if (noise != 0.0) {
    for (double& y : ds.targets) y += noise * rng.next_gaussian();
  }
  return ds;
}

DatasetStats describe(const Dataset& ds) {
  DatasetStats s;
  s.d = ds.matrix.n_rows();
  s.n = ds.matrix.n_cols();
  s.nnz = ds.matrix.nnz();
  s.density = ds.matrix.density();
  if (s.n == 0) return s;
  double mean = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) mean += ds.matrix.column_norm(i);
  mean /= static_cast<double>(s.n);
  double var = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    const double diff = ds.matrix.column_norm(i) - mean;
    var += diff * diff;
  }
  var /= static_cast<double>(s.n);
  s.column_norm_mean = mean;
  s.column_norm_std = std::sqrt(var);
  s.cv_std_over_mean = mean > 0.0 ? s.column_norm_std / mean : 0.0;
  s.cv_mean_over_std = s.column_norm_std > 0.0 ? mean / s.column_norm_std : 0.0;
  return s;
}

Dataset synthetic_svm(std::size_t d, std::size_t n, double support_frac, double noise,
                      std::uint64_t seed) {
  if (support_frac <= 0.0 || support_frac > 1.0) {
    throw std::invalid_argument("synthetic_svm: support_frac must be in (0, 1]");
  }
  SplitMix64 rng(seed);
  Dataset ds;
  ds.matrix = SparseColumnMatrix(d, dense_gaussian_columns(d, n, rng));
  ds.orientation = Orientation::points_as_columns;

  std::vector<double> normal(d, 0.0);
  for (const std::size_t r : random_support(d, support_frac, rng)) {
    normal[r] = rng.next_gaussian();
  }
  ds.targets.resize(n);
  std::uint64_t scratch_ops = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double margin = column_dot(ds.matrix, j, normal, scratch_ops);
    if (noise != 0.0) margin += noise * rng.next_gaussian();
    ds.targets[j] = margin >= 0.0 ? 1.0 : -1.0;
  }
  return ds;
}

}  // namespace adacd
