#include "adacd/dataset.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "adacd/rng.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adacd;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            ("adacd_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++)))
               .string();
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("libsvm parsing: single line, 1-based indices") {
  TempFile f("1 3:0.5\n");
  const Dataset ds = load_libsvm(f.path);
  CHECK(ds.matrix.n_rows() == 3);  // d inferred from the max index
  CHECK(ds.matrix.n_cols() == 1);
  CHECK(ds.targets[0] == 1.0);
  REQUIRE(ds.matrix.column(0).nnz() == 1);
  CHECK(ds.matrix.column(0).rows[0] == 2);  // 0-based in memory
  CHECK(ds.matrix.column(0).values[0] == 0.5);
}

TEST_CASE("libsvm parsing: empty file") {
  TempFile f("");
  const Dataset ds = load_libsvm(f.path);
  CHECK(ds.matrix.n_cols() == 0);
  CHECK_THROWS_AS(load_libsvm(f.path, {.strict = true}), data_error);
}

TEST_CASE("libsvm parsing: malformed input carries the line number") {
  SUBCASE("bad pair") {
    TempFile f("1 1:1.0\n-1 garbage\n");
    CHECK_THROWS_WITH_AS(load_libsvm(f.path), doctest::Contains("line 2"), data_error);
  }
  SUBCASE("non-finite value") {
    TempFile f("1 1:inf\n");
    CHECK_THROWS_AS(load_libsvm(f.path), data_error);
  }
  SUBCASE("indices must increase") {
    TempFile f("1 2:1.0 2:2.0\n");
    CHECK_THROWS_WITH_AS(load_libsvm(f.path), doctest::Contains("increasing"), data_error);
  }
  SUBCASE("index above the configured count") {
    TempFile f("1 7:1.0\n");
    CHECK_THROWS_AS(load_libsvm(f.path, {.n_features = 5}), data_error);
  }
}

TEST_CASE("libsvm round-trip is bit-exact") {
  SplitMix64 rng(21);
  Dataset ds;
  ds.matrix = adacd::testing::random_matrix(23, 11, 0.35, rng);
  ds.orientation = Orientation::points_as_columns;
  ds.targets.assign(11, 0.0);
  for (double& y : ds.targets) y = rng.next_double() < 0.5 ? -1.0 : 1.0;

  TempFile f("");
  save_libsvm(f.path, ds);
  const Dataset back = load_libsvm(f.path, {.n_features = 23});
  REQUIRE(back.matrix.n_cols() == ds.matrix.n_cols());
  REQUIRE(back.matrix.n_rows() == ds.matrix.n_rows());
  for (std::size_t i = 0; i < ds.matrix.n_cols(); ++i) {
    const SparseColumn& a = ds.matrix.column(i);
    const SparseColumn& b = back.matrix.column(i);
    REQUIRE(a.nnz() == b.nnz());
    for (std::size_t k = 0; k < a.nnz(); ++k) {
      CHECK(a.rows[k] == b.rows[k]);
      CHECK(a.values[k] == b.values[k]);  // bit-exact
    }
  }
  CHECK(back.targets == ds.targets);
}

TEST_CASE("normalize_columns") {
  SUBCASE("(3,4) becomes (0.6, 0.8)") {
    std::vector<SparseColumn> cols(1);
    cols[0].rows = {0, 1};
    cols[0].values = {3.0, 4.0};
    Dataset ds{SparseColumnMatrix(2, std::move(cols)), {1.0}, Orientation::points_as_columns};
    const Dataset out = normalize_columns(ds, NormalizeMode::unit_l2);
    CHECK(out.matrix.column(0).values[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(out.matrix.column(0).values[1] == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("mode none is the identity") {
    const Dataset ds = adacd::testing::random_svm_dataset(5, 4, 3);
    const Dataset out = normalize_columns(ds, NormalizeMode::none);
    CHECK(out.matrix.column(2).values == ds.matrix.column(2).values);
  }
  SUBCASE("random 5x7: all norms 1 within 1e-12, and idempotent") {
    SplitMix64 rng(5);
    Dataset ds;
    ds.matrix = adacd::testing::random_matrix(5, 7, 0.8, rng);
    ds.orientation = Orientation::points_as_columns;
    ds.targets.assign(7, 1.0);
    const Dataset once = normalize_columns(ds, NormalizeMode::unit_l2);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(once.matrix.column_norm(i) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const Dataset twice = normalize_columns(once, NormalizeMode::unit_l2);
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t k = 0; k < once.matrix.column(i).nnz(); ++k) {
        CHECK(twice.matrix.column(i).values[k] ==
              doctest::Approx(once.matrix.column(i).values[k]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("zero column is named") {
    std::vector<SparseColumn> cols(2);
    cols[0].rows = {0};
    cols[0].values = {1.0};
    Dataset ds{SparseColumnMatrix(2, std::move(cols)), {1.0, 1.0},
               Orientation::points_as_columns};
    CHECK_THROWS_WITH_AS(normalize_columns(ds, NormalizeMode::unit_l2),
                         doctest::Contains("column 1"), data_error);
  }
}

TEST_CASE("subsample") {
  const Dataset ds = adacd::testing::random_svm_dataset(12, 9, 17, 0.5);

  SUBCASE("full-size selection only removes zero rows/cols") {
    const Dataset out = subsample(ds, 12, 9, 1);
    CHECK(out.matrix.n_cols() == 9);  // generator guarantees nonempty columns
    CHECK(out.matrix.nnz() == ds.matrix.nnz());
  }
  SUBCASE("deterministic given the seed") {
    const Dataset a = subsample(ds, 6, 5, 42);
    const Dataset b = subsample(ds, 6, 5, 42);
    REQUIRE(a.matrix.n_cols() == b.matrix.n_cols());
    for (std::size_t i = 0; i < a.matrix.n_cols(); ++i) {
      CHECK(a.matrix.column(i).rows == b.matrix.column(i).rows);
      CHECK(a.matrix.column(i).values == b.matrix.column(i).values);
    }
    CHECK(a.targets == b.targets);
  }
  SUBCASE("dims never exceed the request") {
    const Dataset out = subsample(ds, 6, 5, 7);
    CHECK(out.matrix.n_rows() <= 6);
    CHECK(out.matrix.n_cols() <= 5);
    CHECK(out.targets.size() == out.matrix.n_cols());
    for (std::size_t i = 0; i < out.matrix.n_cols(); ++i) {
      CHECK(out.matrix.column(i).nnz() > 0);  // no zero columns survive
    }
  }
  SUBCASE("oversized request rejected") {
    CHECK_THROWS_AS(subsample(ds, 13, 9, 1), std::invalid_argument);
  }
}

TEST_CASE("orientation changes") {
  const Dataset ds = adacd::testing::random_svm_dataset(6, 4, 9);
  const Dataset t = with_orientation(ds, Orientation::features_as_columns);
  CHECK(t.matrix.n_rows() == 4);
  CHECK(t.matrix.n_cols() == 6);
  // transpose twice round-trips the entries
  const Dataset back = with_orientation(t, Orientation::points_as_columns);
  for (std::size_t i = 0; i < ds.matrix.n_cols(); ++i) {
    CHECK(back.matrix.column(i).rows == ds.matrix.column(i).rows);
    CHECK(back.matrix.column(i).values == ds.matrix.column(i).values);
  }

  Dataset bad = ds;
  bad.targets[1] = 2.0;
  CHECK_THROWS_AS(with_orientation(bad, Orientation::points_as_columns), data_error);
}

TEST_CASE("synthetic lasso") {
  SUBCASE("zero noise reproduces y = A alpha exactly") {
    const Dataset ds = synthetic_lasso(10, 8, 0.25, 0.0, 3);
    CHECK(ds.orientation == Orientation::features_as_columns);
    CHECK(ds.targets.size() == 10);
    // deterministic per seed
    const Dataset again = synthetic_lasso(10, 8, 0.25, 0.0, 3);
    CHECK(ds.targets == again.targets);
    const Dataset other = synthetic_lasso(10, 8, 0.25, 0.0, 4);
    CHECK(ds.targets != other.targets);
  }
  SUBCASE("precondition") {
    CHECK_THROWS_AS(synthetic_lasso(4, 4, 0.0, 0.0, 1), std::invalid_argument);
  }
}

TEST_CASE("describe reports dims, density and both dispersion ratios") {
  std::vector<SparseColumn> cols(2);
  cols[0].rows = {0, 1};
  cols[0].values = {3.0, 4.0};  // norm 5
  cols[1].rows = {1};
  cols[1].values = {1.0};  // norm 1
  Dataset ds{SparseColumnMatrix(2, std::move(cols)), {1.0, -1.0},
             Orientation::points_as_columns};
  const DatasetStats s = describe(ds);
  CHECK(s.d == 2);
  CHECK(s.n == 2);
  CHECK(s.nnz == 3);
  CHECK(s.density == doctest::Approx(0.75));
  CHECK(s.column_norm_mean == doctest::Approx(3.0));
  CHECK(s.column_norm_std == doctest::Approx(2.0));
  CHECK(s.cv_std_over_mean == doctest::Approx(2.0 / 3.0));
  CHECK(s.cv_mean_over_std == doctest::Approx(1.5));
  // the two ratios are reciprocal views of the same dispersion
  CHECK(s.cv_std_over_mean * s.cv_mean_over_std == doctest::Approx(1.0));
}

TEST_CASE("synthetic svm labels are +/-1") {
  const Dataset ds = synthetic_svm(8, 20, 0.5, 0.1, 11);
  CHECK(ds.targets.size() == 20);
  for (const double y : ds.targets) CHECK(std::abs(y) == 1.0);
  CHECK_NOTHROW(with_orientation(ds, Orientation::points_as_columns));
}
