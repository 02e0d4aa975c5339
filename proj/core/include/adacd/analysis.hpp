#pragma once

#include <cstdint>
#include <stdexcept>
#include <functional>
#include <span>
#include <vector>

#include "adacd/problem.hpp"

namespace adacd {

/// Nonuniformity measure: sqrt(1 + n^2 Var[x / ||x||_1]) with the
/// population variance. Ranges from 1 (all entries equal) to sqrt(n)
/// (single spike); ties the 1- and 2-norms together exactly:
/// ||x||_2 * sqrt(n) = chi(x) * ||x||_1.
double chi(std::span<const double> x);

class coherence_error : public std::runtime_error {
 public:
  coherence_error(const std::string& msg, std::size_t coordinate)
      : std::runtime_error(msg), coordinate(coordinate) {}
  std::size_t coordinate;
};

/// Per-iteration rate factor F^(t): with all mu_i = 0 this is
///   (1 / (n^2 beta)) sum_{kappa_i != 0} kappa_i^2 ||a_i||^2 / p_i.
/// The general form with strong convexity takes theta in
/// (0, min_{support} p_i]. Throws coherence_error when some p_i = 0 where
/// kappa_i != 0.
double f_t(const ProblemInstance& p, std::span<const double> column_norms,
           std::span<const double> residuals, std::span<const double> probabilities,
           double theta = 0.0);

/// Gap-wise analogue: chi(F) / (n beta chi(G)^3) * sum ||a_i||^2 kappa_i^2
/// with F_i = ||a_i||^2 kappa_i^2 and G the coordinate gaps. Requires a
/// positive total gap.
struct FtGap {
  double value = 0.0;
  double chi_gaps = 0.0;
  double chi_residual_products = 0.0;
};
FtGap f_t_gap(const ProblemInstance& p, std::span<const double> column_norms,
              std::span<const double> residuals, std::span<const double> gaps);

/// Rate and iteration bounds for coherent sampling with an empirical
/// F-circle estimate.
struct RateBounds {
  double f_circle = 0.0;
  double p_min = 0.0;
  double epsilon_a0 = 0.0;
  double n = 0.0;

  /// Suboptimality bound after t iterations.
  double rate_rhs(double t) const;
  /// Iterations guaranteeing duality gap <= eps.
  double iterations_for_gap(double eps) const;
  /// Iterations guaranteeing suboptimality <= eps/2.
  double iterations_for_suboptimality(double eps) const;
};
RateBounds theorem_bounds(double f_circle, double p_min, double epsilon_a0, std::size_t n);

/// Gap-wise sampling suboptimality bound after t iterations.
double gapwise_rate_rhs(double f_circle_gap, double epsilon_a0, std::size_t n, double t);

/// Iteration bound of the sigma-mixture scheme for a target gap eps:
///   5 F_ada n^2 / (eps (1 - sigma)) + 5 eps_a0 m / (eps sigma),
/// where m is the largest support size along the run — only known post
/// hoc, so callers take it from the trace (max over support_size).
double mixed_iteration_bound(double f_circle_ada, double epsilon_a0, std::size_t m_max,
                             double sigma, double eps, std::size_t n);

struct DescentCheck {
  bool pass = true;
  double worst_margin = 0.0;  // most negative slack over the grid
  double worst_s = 0.0;
};

/// One-coordinate descent inequality: for every s in the grid the actual
/// decrease must be at least
///   s * (G_i + (mu_i/2)(1-s) kappa_i^2 - (s / (2 beta)) ||a_i||^2 kappa_i^2)
/// up to the given slack, taken relative to the magnitude of the evaluated
/// terms (so the check is scale-free). worst_margin is that normalized
/// margin.
DescentCheck descent_inequality_check(double gap_i, double kappa_i, double column_norm,
                                      double beta, double mu_i, double decrease,
                                      std::span<const double> s_grid, double slack = 1e-10);

/// The default grid {0, 0.1, ..., 1.0}.
std::span<const double> default_s_grid();

/// kappa_i <= 2 L_i + tol for all i; returns indices of violations.
std::vector<std::size_t> kappa_bound_violations(const ProblemInstance& p,
                                                std::span<const double> residuals,
                                                double tol = 1e-12);

struct ReferenceSolution {
  std::vector<double> alpha;
  double dual_obj = 0.0;  // O_A at alpha, the suboptimality reference
  double gap = 0.0;       // certificate: true optimum is within [obj - gap, obj]
  bool reached = false;   // false when the budget ran out first
};

/// High-accuracy oracle for suboptimality curves: uniform-scheme run until
/// the duality gap falls below target_gap (default 1e-12).
ReferenceSolution reference_solution(const ProblemInstance& p, const Dataset& ds,
                                     double target_gap = 1e-12, std::uint64_t max_epochs = 200000,
                                     std::uint64_t seed = 0x5eedULL);

}  // namespace adacd
