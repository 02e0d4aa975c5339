#include "adacd/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adacd {

namespace {

double soft_threshold(double x, double tau) {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

double hinge(double x) { return x > 0.0 ? x : 0.0; }

double l1_norm(std::span<const double> v) {
  double acc = 0.0;
  for (const double x : v) acc += std::abs(x);
  return acc;
}

double squared_norm(std::span<const double> v) {
  double acc = 0.0;
  for (const double x : v) acc += x * x;
  return acc;
}

void check_orientation(const ProblemInstance& p, const Dataset& ds) {
  const Orientation want = p.kind == ProblemKind::lasso ? Orientation::features_as_columns
                                                        : Orientation::points_as_columns;
  if (ds.orientation != want) {
    throw std::invalid_argument("dataset orientation does not match the problem kind");
  }
}

}  // namespace

double compute_support_radius(const Dataset& ds, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
  double sq = 0.0;
  for (const double y : ds.targets) sq += y * y;
  return sq / lambda;
}

ProblemInstance make_lasso(const Dataset& ds, double lambda) {
  if (ds.orientation != Orientation::features_as_columns) {
    throw std::invalid_argument("lasso expects a features_as_columns dataset");
  }
  if (ds.targets.size() != ds.matrix.n_rows()) {
    throw std::invalid_argument("lasso needs one target per row");
  }
  ProblemInstance p;
  p.kind = ProblemKind::lasso;
  p.lambda = lambda;
  p.support_radius = compute_support_radius(ds, lambda);
  p.smoothness_beta = 0.5;  // f(x) = ||x - y||^2 has 2-Lipschitz gradient
  p.lipschitz.assign(ds.matrix.n_cols(), p.support_radius);
  p.strong_convexity.assign(ds.matrix.n_cols(), 0.0);
  return p;
}

ProblemInstance make_hinge_svm(const Dataset& ds, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
  if (ds.orientation != Orientation::points_as_columns) {
    throw std::invalid_argument("hinge_svm expects a points_as_columns dataset");
  }
  if (ds.targets.size() != ds.matrix.n_cols()) {
    throw std::invalid_argument("hinge_svm needs one label per column");
  }
  for (const double y : ds.targets) {
    if (y != 1.0 && y != -1.0) throw std::invalid_argument("hinge_svm labels must be +/-1");
  }
  const std::size_t n = ds.matrix.n_cols();
  ProblemInstance p;
  p.kind = ProblemKind::hinge_svm;
  p.lambda = lambda;
  p.support_radius = 0.0;
  p.smoothness_beta = lambda;
  p.lipschitz.assign(n, 1.0 / static_cast<double>(n));
  p.strong_convexity.assign(n, 0.0);
  return p;
}

ProblemInstance make_problem(ProblemKind kind, const Dataset& ds, double lambda) {
  return kind == ProblemKind::lasso ? make_lasso(ds, lambda) : make_hinge_svm(ds, lambda);
}

PrimalDualState initial_state(const ProblemInstance& p, const Dataset& ds) {
  check_orientation(p, ds);
  PrimalDualState state;
  state.alpha.assign(ds.matrix.n_cols(), 0.0);
  state.w.assign(ds.matrix.n_rows(), 0.0);
  if (p.kind == ProblemKind::lasso) {
    for (std::size_t r = 0; r < state.w.size(); ++r) state.w[r] = -2.0 * ds.targets[r];
  }
  return state;
}

void recompute_dual_vector(const ProblemInstance& p, const Dataset& ds, PrimalDualState& state,
                           std::uint64_t& column_ops) {
  std::fill(state.w.begin(), state.w.end(), 0.0);
  const double unit = p.kind == ProblemKind::lasso
                          ? 2.0
                          : 1.0 / (p.lambda * static_cast<double>(state.alpha.size()));
  for (std::size_t i = 0; i < state.alpha.size(); ++i) {
    if (state.alpha[i] != 0.0) {
      add_scaled_column(state.w, ds.matrix, i, unit * state.alpha[i], column_ops);
    }
  }
  if (p.kind == ProblemKind::lasso) {
    for (std::size_t r = 0; r < state.w.size(); ++r) state.w[r] -= 2.0 * ds.targets[r];
  }
}

double dual_objective(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state) {
  if (p.kind == ProblemKind::lasso) {
    // f(A alpha) = ||r||^2 with r = w/2
    return 0.25 * squared_norm(state.w) + p.lambda * l1_norm(state.alpha);
  }
  const double n = static_cast<double>(state.alpha.size());
  double linear = 0.0;
  for (std::size_t i = 0; i < state.alpha.size(); ++i) linear += state.alpha[i] * ds.targets[i];
  return 0.5 * p.lambda * squared_norm(state.w) - linear / n;
}

double column_score(const ProblemInstance&, const Dataset& ds, const PrimalDualState& state,
                    std::size_t i, std::uint64_t& column_ops) {
  return column_dot(ds.matrix, i, state.w, column_ops);
}

double gap_from_score(const ProblemInstance& p, const Dataset& ds, std::size_t i, double alpha_i,
                      double score) {
  if (p.kind == ProblemKind::lasso) {
    return p.support_radius * hinge(std::abs(score) - p.lambda) + p.lambda * std::abs(alpha_i) +
           alpha_i * score;
  }
  const double n = static_cast<double>(ds.matrix.n_cols());
  const double y = ds.targets[i];
  return (hinge(1.0 - y * score) - alpha_i * y + alpha_i * score) / n;
}

// An exact coordinate step lands |a_i^T w| on the subdifferential kink, so
// the boundary case must absorb floating noise: without the relative band
// below, one ulp would flip the target set between {0} and {-B sign} and
// the residual of a freshly optimized coordinate would jump to B-scale.
constexpr double kBoundaryBand = 1e-10;

ResidualInfo residual_from_score(const ProblemInstance& p, const Dataset& ds, std::size_t i,
                                 double alpha_i, double score, BoundaryRule rule) {
  const double band_unit = rule == BoundaryRule::banded ? kBoundaryBand : 0.0;
  ResidualInfo out;
  if (p.kind == ProblemKind::lasso) {
    const double b = p.support_radius;
    const double band = band_unit * std::max({1.0, std::abs(score), p.lambda});
    if (std::abs(score) < p.lambda - band) {
      out.target_alpha = 0.0;
    } else if (std::abs(score) > p.lambda + band) {
      out.target_alpha = score > 0.0 ? -b : b;
    } else {
      // the subdifferential is the whole segment from 0 to -B sign(score)
      const double lo = std::min(0.0, score > 0.0 ? -b : b);
      const double hi = std::max(0.0, score > 0.0 ? -b : b);
      out.target_alpha = std::clamp(alpha_i, lo, hi);
    }
    out.kappa = std::abs(alpha_i - out.target_alpha);
    return out;
  }
  const double n = static_cast<double>(ds.matrix.n_cols());
  const double y = ds.targets[i];
  const double margin = y * score;
  const double band = band_unit * std::max(1.0, std::abs(margin));
  if (margin < 1.0 - band) {
    out.target_alpha = y;
  } else if (margin > 1.0 + band) {
    out.target_alpha = 0.0;
  } else {
    const double tau = std::clamp(alpha_i * y, 0.0, 1.0);
    out.target_alpha = tau * y;
  }
  // Residuals live in the per-sample scale of L_i = 1/n.
  out.kappa = std::abs(alpha_i - out.target_alpha) / n;
  return out;
}

double delta_from_score(const ProblemInstance& p, const Dataset& ds, std::size_t i, double alpha_i,
                        double score) {
  const double norm = ds.matrix.column_norm(i);
  const double q = norm * norm;
  if (q == 0.0) return 0.0;
  if (p.kind == ProblemKind::lasso) {
    // r = w/2, so a_i^T r = score/2
    const double z0 = alpha_i - 0.5 * score / q;
    return soft_threshold(z0, 0.5 * p.lambda / q) - alpha_i;
  }
  const double n = static_cast<double>(ds.matrix.n_cols());
  const double y = ds.targets[i];
  const double step = (1.0 - y * score) / (q / (p.lambda * n));
  const double target = std::clamp(y * alpha_i + step, 0.0, 1.0);
  return y * target - alpha_i;
}

double decrease_from_step(const ProblemInstance& p, const Dataset& ds, std::size_t i,
                          double alpha_i, double score, double delta) {
  const double norm = ds.matrix.column_norm(i);
  const double q = norm * norm;
  if (p.kind == ProblemKind::lasso) {
    return -(delta * score + delta * delta * q) +
           p.lambda * (std::abs(alpha_i) - std::abs(alpha_i + delta));
  }
  const double n = static_cast<double>(ds.matrix.n_cols());
  const double y = ds.targets[i];
  const double step = delta / n;
  return step * (y - score) - step * step * q / (2.0 * p.lambda);
}

double coordinate_gap(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                      std::size_t i, std::uint64_t& column_ops) {
  return gap_from_score(p, ds, i, state.alpha[i],
                        column_score(p, ds, state, i, column_ops));
}

double total_gap(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                 std::uint64_t& column_ops) {
  double acc = 0.0;
  for (std::size_t i = 0; i < state.alpha.size(); ++i) {
    acc += coordinate_gap(p, ds, state, i, column_ops);
  }
  return acc;
}

ResidualInfo dual_residual(const ProblemInstance& p, const Dataset& ds,
                           const PrimalDualState& state, std::size_t i,
                           std::uint64_t& column_ops) {
  return residual_from_score(p, ds, i, state.alpha[i],
                             column_score(p, ds, state, i, column_ops));
}

double coordinate_update(const ProblemInstance& p, const Dataset& ds, PrimalDualState& state,
                         std::size_t i, std::uint64_t& column_ops) {
  if (ds.matrix.column_norm(i) == 0.0) {
    state.zero_column_flagged = true;
    return 0.0;
  }
  return delta_from_score(p, ds, i, state.alpha[i],
                          column_score(p, ds, state, i, column_ops));
}

void apply_update(const ProblemInstance& p, const Dataset& ds, PrimalDualState& state,
                  std::size_t i, double delta, std::uint64_t& column_ops) {
  if (!std::isfinite(delta)) throw std::invalid_argument("apply_update: non-finite step");
  state.alpha[i] += delta;
  const double unit = p.kind == ProblemKind::lasso
                          ? 2.0
                          : 1.0 / (p.lambda * static_cast<double>(state.alpha.size()));
  // The touch is paid even when the step is zero: Algorithm iterations do
  // not skip, and the cost model counts coordinate visits.
  add_scaled_column(state.w, ds.matrix, i, unit * delta, column_ops);
  ++state.iteration;
}

Certificates compute_certificates(const ProblemInstance& p, const Dataset& ds,
                                  const PrimalDualState& state, std::uint64_t& column_ops) {
  const std::size_t n = state.alpha.size();
  Certificates out;
  out.gaps.resize(n);
  out.residuals.resize(n);

  double conj_sum = 0.0;  // sum_i g_i*(-a_i^T w)
  for (std::size_t i = 0; i < n; ++i) {
    const double score = column_score(p, ds, state, i, column_ops);
    out.gaps[i] = gap_from_score(p, ds, i, state.alpha[i], score);
    out.residuals[i] =
        ds.matrix.column_norm(i) == 0.0
            ? 0.0
            : residual_from_score(p, ds, i, state.alpha[i], score).kappa;
    if (p.kind == ProblemKind::lasso) {
      conj_sum += p.support_radius * hinge(std::abs(score) - p.lambda);
    } else {
      conj_sum += hinge(1.0 - ds.targets[i] * score) / static_cast<double>(n);
    }
    out.gap += out.gaps[i];
  }

  out.dual_obj = dual_objective(p, ds, state);
  if (p.kind == ProblemKind::lasso) {
    double wy = 0.0;
    for (std::size_t r = 0; r < state.w.size(); ++r) wy += state.w[r] * ds.targets[r];
    out.primal_obj = wy + 0.25 * squared_norm(state.w) + conj_sum;
  } else {
    out.primal_obj = 0.5 * p.lambda * squared_norm(state.w) + conj_sum;
  }
  return out;
}

double primal_objective(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                        std::uint64_t& column_ops) {
  double conj_sum = 0.0;
  const std::size_t n = state.alpha.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double score = column_score(p, ds, state, i, column_ops);
    if (p.kind == ProblemKind::lasso) {
      conj_sum += p.support_radius * hinge(std::abs(score) - p.lambda);
    } else {
      conj_sum += hinge(1.0 - ds.targets[i] * score) / static_cast<double>(n);
    }
  }
  if (p.kind == ProblemKind::lasso) {
    double wy = 0.0;
    for (std::size_t r = 0; r < state.w.size(); ++r) wy += state.w[r] * ds.targets[r];
    return wy + 0.25 * squared_norm(state.w) + conj_sum;
  }
  return 0.5 * p.lambda * squared_norm(state.w) + conj_sum;
}

}  // namespace adacd
