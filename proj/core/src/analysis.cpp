#include "adacd/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adacd/solver.hpp"

namespace adacd {

double chi(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("chi: empty vector");
  double sum = 0.0;
  for (const double v : x) {
    if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("chi: entries must be >= 0");
    sum += v;
  }
  if (sum <= 0.0) throw std::invalid_argument("chi: zero vector");

  // Definition route (population variance of the normalized vector); the
  // norm-ratio identity is left to the tests as the independent check.
  const double mean = 1.0 / static_cast<double>(n);
  double var = 0.0;
  for (const double v : x) {
    const double d = v / sum - mean;
    var += d * d;
  }
  var /= static_cast<double>(n);
  return std::sqrt(1.0 + static_cast<double>(n) * static_cast<double>(n) * var);
}

double f_t(const ProblemInstance& p, std::span<const double> column_norms,
           std::span<const double> residuals, std::span<const double> probabilities,
           double theta) {
  const std::size_t n = residuals.size();
  if (column_norms.size() != n || probabilities.size() != n) {
    throw std::invalid_argument("f_t: size mismatch");
  }
  bool any_mu = false;
  for (const double mu : p.strong_convexity) any_mu = any_mu || mu != 0.0;

  double min_p_support = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (residuals[i] != 0.0) {
      if (probabilities[i] <= 0.0) {
        throw coherence_error("f_t: probability 0 at support coordinate " + std::to_string(i), i);
      }
      min_p_support = std::min(min_p_support, probabilities[i]);
    }
  }

  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const double beta = p.smoothness_beta;
  double acc = 0.0;
  if (!any_mu) {
    for (std::size_t i = 0; i < n; ++i) {
      if (residuals[i] != 0.0) {
        const double prod = residuals[i] * column_norms[i];
        acc += prod * prod / probabilities[i];
      }
    }
    return acc / (nn * beta);
  }

  if (!(theta > 0.0) || theta > min_p_support) {
    throw std::invalid_argument("f_t: theta must lie in (0, min support probability]");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (residuals[i] != 0.0) {
      const double mu_beta = p.strong_convexity[i] * beta;
      const double q = column_norms[i] * column_norms[i];
      acc += (theta * (mu_beta + q) / probabilities[i] - mu_beta) * residuals[i] * residuals[i];
    }
  }
  return acc / (nn * beta * theta);
}

FtGap f_t_gap(const ProblemInstance& p, std::span<const double> column_norms,
              std::span<const double> residuals, std::span<const double> gaps) {
  const std::size_t n = residuals.size();
  if (column_norms.size() != n || gaps.size() != n) {
    throw std::invalid_argument("f_t_gap: size mismatch");
  }
  std::vector<double> products(n);
  double sum_products = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double prod = residuals[i] * column_norms[i];
    products[i] = prod * prod;
    sum_products += products[i];
  }
  std::vector<double> clipped(gaps.begin(), gaps.end());
  double total_gap = 0.0;
  for (double& g : clipped) {
    g = std::max(g, 0.0);
    total_gap += g;
  }
  if (total_gap <= 0.0) {
    throw std::invalid_argument("f_t_gap: zero duality gap (already converged)");
  }

  FtGap out;
  out.chi_gaps = chi(clipped);
  out.chi_residual_products = sum_products > 0.0 ? chi(products) : 1.0;
  const double denom = static_cast<double>(n) * p.smoothness_beta * out.chi_gaps * out.chi_gaps *
                       out.chi_gaps;
  out.value = out.chi_residual_products / denom * sum_products;
  return out;
}

double RateBounds::rate_rhs(double t) const {
  return (2.0 * f_circle * n * n + 2.0 * epsilon_a0 / p_min) / (2.0 / p_min + t);
}

double RateBounds::iterations_for_gap(double eps) const {
  const double warmup =
      std::max(0.0, std::log(2.0 * epsilon_a0 / (n * n * p_min * f_circle)) / p_min);
  return warmup + 5.0 * f_circle * n * n / eps - 1.0 / p_min;
}

double RateBounds::iterations_for_suboptimality(double eps) const {
  const double warmup =
      std::max(0.0, std::log(2.0 * epsilon_a0 / (n * n * p_min * f_circle)) / p_min);
  return warmup + 4.0 * f_circle * n * n / eps - 2.0 / p_min;
}

RateBounds theorem_bounds(double f_circle, double p_min, double epsilon_a0, std::size_t n) {
  if (f_circle <= 0.0 || p_min <= 0.0 || epsilon_a0 <= 0.0 || n == 0) {
    throw std::invalid_argument("theorem_bounds: inputs must be positive");
  }
  RateBounds b;
  b.f_circle = f_circle;
  b.p_min = p_min;
  b.epsilon_a0 = epsilon_a0;
  b.n = static_cast<double>(n);
  return b;
}

double gapwise_rate_rhs(double f_circle_gap, double epsilon_a0, std::size_t n, double t) {
  const double nn = static_cast<double>(n);
  return (2.0 * f_circle_gap * nn * nn + 2.0 * nn * epsilon_a0) / (t + 2.0 * nn);
}

double mixed_iteration_bound(double f_circle_ada, double epsilon_a0, std::size_t m_max,
                             double sigma, double eps, std::size_t n) {
  if (!(sigma > 0.0) || !(sigma < 1.0)) {
    throw std::invalid_argument("mixed_iteration_bound: sigma must lie in (0, 1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("mixed_iteration_bound: eps must be positive");
  const double nn = static_cast<double>(n);
  return 5.0 * f_circle_ada * nn * nn / (eps * (1.0 - sigma)) +
         5.0 * epsilon_a0 * static_cast<double>(m_max) / (eps * sigma);
}

std::span<const double> default_s_grid() {
  static const std::array<double, 11> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                              0.6, 0.7, 0.8, 0.9, 1.0};
  return grid;
}

DescentCheck descent_inequality_check(double gap_i, double kappa_i, double column_norm,
                                      double beta, double mu_i, double decrease,
                                      std::span<const double> s_grid, double slack) {
  DescentCheck out;
  const double kk = kappa_i * kappa_i;
  const double qq = column_norm * column_norm;
  for (const double s : s_grid) {
    const double gap_term = s * gap_i;
    const double mu_term = 0.5 * s * mu_i * (1.0 - s) * kk;
    const double smooth_term = 0.5 * s * s / beta * qq * kk;
    const double rhs = gap_term + mu_term - smooth_term;
    // Slack is relative to the magnitude of the evaluated terms: the two
    // sides are differences of quantities that can reach B^2 scale, where
    // an absolute 1e-10 would sit below double roundoff.
    const double scale =
        std::max({1.0, std::abs(gap_term), std::abs(mu_term), smooth_term, std::abs(decrease)});
    const double margin = (decrease - rhs) / scale;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_s = s;
    }
  }
  out.pass = out.worst_margin >= -slack;
  return out;
}

std::vector<std::size_t> kappa_bound_violations(const ProblemInstance& p,
                                                std::span<const double> residuals, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (residuals[i] > 2.0 * p.lipschitz[i] + tol) out.push_back(i);
  }
  return out;
}

ReferenceSolution reference_solution(const ProblemInstance& p, const Dataset& ds,
                                     double target_gap, std::uint64_t max_epochs,
                                     std::uint64_t seed) {
  if (!(target_gap > 0.0)) throw std::invalid_argument("reference_solution: target_gap must be > 0");
  SolverConfig cfg;
  cfg.scheme = SamplingScheme{SchemeKind::uniform};
  cfg.max_epochs = max_epochs;
  cfg.gap_tol = target_gap;
  cfg.seed = seed;
  RunResult result = run(p, ds, cfg);

  ReferenceSolution ref;
  ref.alpha = std::move(result.state.alpha);
  ref.dual_obj = result.trace.back().dual_obj;
  ref.gap = result.trace.back().gap;
  ref.reached = result.termination != Termination::budget_exhausted;
  return ref;
}

}  // namespace adacd
