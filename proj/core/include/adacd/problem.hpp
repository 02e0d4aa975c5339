#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adacd/dataset.hpp"
#include "adacd/op_counter.hpp"
#include "adacd/sparse_matrix.hpp"

namespace adacd {

enum class ProblemKind { lasso, hinge_svm };

/// A concrete primal-dual pair: the Lasso with the bounded-support
/// modification of the L1 term, or the hinge-loss SVM dual. Carries the
/// constants every sampling rule and rate bound consumes.
///
/// Conventions (fixed once, everything below is derived from them):
///   Lasso: f(x) = ||x - y||^2 without a 1/2 factor, so beta = 1/2,
///     w = 2(A alpha - y), f*(w) = w.y + ||w||^2/4 and the coordinate
///     threshold is lambda / (2 ||a_i||^2). L_i = B.
///   SVM: variables are kept in the unit box (alpha_i y_i in [0,1]) while
///     the separable template is expressed in per-sample scale alpha/n,
///     so L_i = 1/n, beta = lambda, and dual residuals carry a 1/n factor.
///     w is maintained as (1/(lambda n)) sum_i alpha_i a_i.
struct ProblemInstance {
  ProblemKind kind;
  double lambda = 0.0;
  double support_radius = 0.0;  // B; Lasso only, 0 when y = 0 (degenerate)
  double smoothness_beta = 0.0;
  std::vector<double> lipschitz;         // L_i
  std::vector<double> strong_convexity;  // mu_i, identically 0 for both problems
};

/// B = f(A*0)/lambda = ||y||^2 / lambda for the Lasso at the alpha = 0 start.
double compute_support_radius(const Dataset& ds, double lambda);

ProblemInstance make_lasso(const Dataset& ds, double lambda);
ProblemInstance make_hinge_svm(const Dataset& ds, double lambda);

ProblemInstance make_problem(ProblemKind kind, const Dataset& ds, double lambda);

/// Mutable iterate: alpha, the maintained dual vector w = grad f(A alpha)
/// (updated incrementally inside an epoch, recomputed at checkpoints), the
/// op counters and the iteration count.
struct PrimalDualState {
  std::vector<double> alpha;  // length n
  std::vector<double> w;      // length d
  OpCounter counters;
  std::uint64_t iteration = 0;
  bool zero_column_flagged = false;
};

/// Residual of one coordinate against the first-order conditions.
/// kappa is expressed in the scale of the declared L_i (for the SVM that
/// includes the 1/n factor); target_alpha is the nearest optimal value in
/// the units of state.alpha.
struct ResidualInfo {
  double kappa = 0.0;
  double target_alpha = 0.0;
};

/// How the subdifferential case split treats a score near its kink.
/// `banded` classifies a small relative band around the kink as the
/// boundary segment, so a freshly optimized coordinate reads as optimal
/// despite float noise; it drives sampling and reporting. `exact` uses
/// strict comparisons and is what inequality checks need: their algebra
/// only holds for a target drawn from an actual subgradient.
enum class BoundaryRule { banded, exact };

/// Everything a monitoring checkpoint needs, produced in one full pass.
struct Certificates {
  double dual_obj = 0.0;    // O_A
  double primal_obj = 0.0;  // O_B
  double gap = 0.0;         // sum of coordinate gaps
  std::vector<double> gaps;
  std::vector<double> residuals;  // |kappa_i|, zero columns masked to 0
};

PrimalDualState initial_state(const ProblemInstance& p, const Dataset& ds);

/// Rebuilds w from alpha alone (drift reset). Counts one column op per
/// nonzero alpha_i plus, for the Lasso, the dense shift by y.
void recompute_dual_vector(const ProblemInstance& p, const Dataset& ds, PrimalDualState& state,
                           std::uint64_t& column_ops);

/// O_A(alpha); uses the maintained w, no column ops.
double dual_objective(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state);

/// O_B(w); one full pass over columns.
double primal_objective(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                        std::uint64_t& column_ops);

/// a_i^T w, the one kernel every per-coordinate formula consumes.
double column_score(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                    std::size_t i, std::uint64_t& column_ops);

// Scalar forms: everything derivable from (alpha_i, a_i^T w) without
// touching the matrix again. The batch and single-coordinate operations
// below all route through these, so each formula exists exactly once.
double gap_from_score(const ProblemInstance& p, const Dataset& ds, std::size_t i, double alpha_i,
                      double score);
ResidualInfo residual_from_score(const ProblemInstance& p, const Dataset& ds, std::size_t i,
                                 double alpha_i, double score,
                                 BoundaryRule rule = BoundaryRule::banded);
double delta_from_score(const ProblemInstance& p, const Dataset& ds, std::size_t i, double alpha_i,
                        double score);
/// Exact O_A decrease of the step delta taken from (alpha_i, score).
/// Evaluated from scalars so the monotonicity audit is free of the
/// cancellation that plagues recomputing O_A twice.
double decrease_from_step(const ProblemInstance& p, const Dataset& ds, std::size_t i,
                          double alpha_i, double score, double delta);

double coordinate_gap(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                      std::size_t i, std::uint64_t& column_ops);
double total_gap(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                 std::uint64_t& column_ops);
ResidualInfo dual_residual(const ProblemInstance& p, const Dataset& ds,
                           const PrimalDualState& state, std::size_t i,
                           std::uint64_t& column_ops);

/// Exact single-coordinate minimizer of O_A; returns delta alpha_i.
/// A zero column yields 0 and flags the state once.
double coordinate_update(const ProblemInstance& p, const Dataset& ds, PrimalDualState& state,
                         std::size_t i, std::uint64_t& column_ops);

/// alpha_i += delta and the incremental w update; one column op. The
/// iteration counter is advanced even for delta = 0.
void apply_update(const ProblemInstance& p, const Dataset& ds, PrimalDualState& state,
                  std::size_t i, double delta, std::uint64_t& column_ops);

/// One full pass producing O_A, O_B, all coordinate gaps and all residuals.
/// Residuals of zero columns are reported as 0 (those coordinates are
/// frozen and excluded from sampling); their gaps stay honest.
Certificates compute_certificates(const ProblemInstance& p, const Dataset& ds,
                                  const PrimalDualState& state, std::uint64_t& column_ops);

}  // namespace adacd
