#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here recomputes results by brute force (dense algebra, linear scans,
// golden-section search) so the library paths are checked against code
// that shares none of their shortcuts.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "adacd/dataset.hpp"
#include "adacd/problem.hpp"
#include "adacd/rng.hpp"

namespace adacd::testing {

/// Prefix-scan reference for weighted sampling: first index whose running
/// weight sum exceeds u * total (ties on a boundary go right, zero-weight
/// entries are never returned).
inline std::size_t linear_scan_sample(std::span<const double> weights, double u) {
  double total = 0.0;
  for (const double w : weights) total += w;
  double target = u * total;
  if (!(target < total)) target = std::nextafter(total, 0.0);
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (target < cum) return i;
    if (weights[i] > 0.0) last = i;
  }
  return last;
}

/// Dense dot of column i against v, straight off the dense image.
inline double dense_column_dot(const SparseColumnMatrix& m, std::size_t i,
                               std::span<const double> v) {
  const std::vector<double> dense = m.to_dense();
  double acc = 0.0;
  for (std::size_t r = 0; r < m.n_rows(); ++r) acc += dense[r * m.n_cols() + i] * v[r];
  return acc;
}

/// Golden-section minimizer of a convex one-dimensional function. The
/// objective may return long double; comparisons happen in that type.
template <class F>
double golden_section_min(const F& f, double lo, double hi, double tol = 1e-12) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  auto fc = f(c);
  auto fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// O_A evaluated from scratch with dense linear algebra; no use of the
/// maintained w or the library objective paths. Accumulates in long double
/// so a golden-section search over this function can localize an argmin to
/// ~1e-9 (double accumulation would cap the oracle near sqrt(eps) ~ 1e-7).
inline long double dense_dual_objective(const ProblemInstance& p, const Dataset& ds,
                                        std::span<const double> alpha) {
  const std::vector<double> dense = ds.matrix.to_dense();
  const std::size_t d = ds.matrix.n_rows();
  const std::size_t n = ds.matrix.n_cols();
  std::vector<long double> image(d, 0.0L);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      image[r] += static_cast<long double>(dense[r * n + i]) * alpha[i];
    }
  }
  if (p.kind == ProblemKind::lasso) {
    long double quad = 0.0L, l1 = 0.0L;
    for (std::size_t r = 0; r < d; ++r) {
      const long double e = image[r] - static_cast<long double>(ds.targets[r]);
      quad += e * e;
    }
    for (const double a : alpha) l1 += std::abs(static_cast<long double>(a));
    return quad + static_cast<long double>(p.lambda) * l1;
  }
  const long double nn = static_cast<long double>(n);
  long double sq = 0.0L, lin = 0.0L;
  for (std::size_t r = 0; r < d; ++r) sq += image[r] * image[r];
  for (std::size_t i = 0; i < n; ++i) {
    lin += static_cast<long double>(alpha[i]) * ds.targets[i];
  }
  return sq / (2.0L * static_cast<long double>(p.lambda) * nn * nn) - lin / nn;
}

/// Sparse random matrix with varied column scales; every column nonempty.
inline SparseColumnMatrix random_matrix(std::size_t d, std::size_t n, double density,
                                        SplitMix64& rng) {
  std::vector<SparseColumn> columns(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = std::exp(0.7 * rng.next_gaussian());
    for (std::size_t r = 0; r < d; ++r) {
      if (rng.next_double() < density) {
        double v = scale * rng.next_gaussian();
        if (v == 0.0) v = scale;
        columns[i].rows.push_back(static_cast<std::uint32_t>(r));
        columns[i].values.push_back(v);
      }
    }
    if (columns[i].rows.empty()) {
      const auto r = static_cast<std::uint32_t>(rng.next_below(d));
      columns[i].rows.push_back(r);
      columns[i].values.push_back(scale);
    }
  }
  return SparseColumnMatrix(d, std::move(columns));
}

inline Dataset random_lasso_dataset(std::size_t d, std::size_t n, std::uint64_t seed,
                                    double density = 0.6) {
  SplitMix64 rng(seed);
  Dataset ds;
  ds.matrix = random_matrix(d, n, density, rng);
  ds.orientation = Orientation::features_as_columns;
  ds.targets.resize(d);
  for (double& y : ds.targets) y = rng.next_gaussian();
  return ds;
}

inline Dataset random_svm_dataset(std::size_t d, std::size_t n, std::uint64_t seed,
                                  double density = 0.6) {
  SplitMix64 rng(seed);
  Dataset ds;
  ds.matrix = random_matrix(d, n, density, rng);
  ds.orientation = Orientation::points_as_columns;
  ds.targets.resize(n);
  for (double& y : ds.targets) y = rng.next_double() < 0.5 ? -1.0 : 1.0;
  return ds;
}

/// A state reachable by the algorithm: k exact coordinate steps on random
/// coordinates from the zero start, then a fresh w rebuild.
inline PrimalDualState random_reachable_state(const ProblemInstance& p, const Dataset& ds,
                                              std::size_t steps, SplitMix64& rng) {
  PrimalDualState state = initial_state(p, ds);
  const std::size_t n = ds.matrix.n_cols();
  std::uint64_t ops = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto i = static_cast<std::size_t>(rng.next_below(n));
    const double delta = coordinate_update(p, ds, state, i, ops);
    apply_update(p, ds, state, i, delta, ops);
  }
  recompute_dual_vector(p, ds, state, ops);
  return state;
}

}  // namespace adacd::testing
