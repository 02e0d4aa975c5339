#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "adacd/problem.hpp"
#include "adacd/sampling.hpp"

namespace adacd {

struct SolverConfig {
  SamplingScheme scheme;
  std::uint64_t max_epochs = 50;
  double gap_tol = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t trace_every = 0;  // iterations per checkpoint; 0 means n (per epoch)
  bool record_theory = false;
  std::optional<double> suboptimality_ref;  // O_A at the reference solution
};

/// One monitoring row. Checkpoints rebuild w from scratch, so the
/// certificate columns are drift-free; w_drift records the relative error
/// the incremental updates had accumulated since the previous reset.
struct TraceRecord {
  double epoch = 0.0;  // iterations / n, real-valued
  std::uint64_t iterations = 0;
  std::uint64_t vector_ops = 0;
  double dual_obj = 0.0;
  double primal_obj = 0.0;
  double gap = 0.0;
  double suboptimality = 0.0;  // NaN when no reference is configured
  std::size_t support_size = 0;
  // theory columns; NaN unless record_theory
  double f_t = 0.0;
  double chi_gap = 0.0;
  double chi_residual = 0.0;
  double f_t_gap = 0.0;
  double w_drift = 0.0;
  double p_min_support = 0.0;
};

enum class Termination { budget_exhausted, gap_tol_reached, support_empty };

std::string to_string(Termination t);

struct TheoryViolation {
  std::uint64_t iteration = 0;
  std::size_t coordinate = 0;
  double s = 0.0;       // grid point of the failed inequality, -1 for monotonicity
  double margin = 0.0;  // how far below the bound the decrease fell
};

/// Aggregates collected when record_theory is on. The descent inequality
/// is evaluated for every iteration over s in {0, 0.1, ..., 1}.
struct TheorySummary {
  std::uint64_t checked_iterations = 0;
  std::vector<TheoryViolation> descent_violations;
  std::vector<TheoryViolation> monotonicity_violations;
  double f_t_max = 0.0;
  double f_t_mean = 0.0;
  double f_t_gap_max = 0.0;
  double f_t_gap_mean = 0.0;
  // audits over every checkpoint and distribution refresh of the run
  double kappa_excess_max = -std::numeric_limits<double>::infinity();  // max kappa_i - 2 L_i
  std::uint64_t coherence_checks = 0;
  std::uint64_t coherence_violations = 0;
};

struct RunResult {
  PrimalDualState state;
  std::vector<TraceRecord> trace;
  Termination termination = Termination::budget_exhausted;
  TheorySummary theory;  // populated when record_theory
};

/// Raised when an objective stops being finite; carries a state dump.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The coordinate descent loop: sample from the scheme's distribution,
/// take the exact one-coordinate step, update w incrementally. The
/// distribution refreshes per the scheme (fixed: once; per_epoch: every n
/// iterations; per_iteration: every iteration), checkpoints land every
/// trace_every iterations and once more at the stopping point. The trace
/// is deterministic given the config.
RunResult run(const ProblemInstance& problem, const Dataset& ds, const SolverConfig& config);

}  // namespace adacd
