#include "adacd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adacd/analysis.hpp"
#include "adacd/rng.hpp"

namespace adacd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Residual vector with zero columns masked, one full pass.
void residual_pass(const ProblemInstance& p, const Dataset& ds, const PrimalDualState& state,
                   std::vector<double>& kappas, std::uint64_t& ops) {
  const std::size_t n = state.alpha.size();
  kappas.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ds.matrix.column_norm(i) == 0.0) {
      kappas[i] = 0.0;
      continue;
    }
    const double score = column_score(p, ds, state, i, ops);
    kappas[i] = residual_from_score(p, ds, i, state.alpha[i], score).kappa;
  }
}

struct CheckpointOutcome {
  double gap = 0.0;
  std::size_t support = 0;
};

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::budget_exhausted: return "budget-exhausted";
    case Termination::gap_tol_reached: return "gap-tol-reached";
    case Termination::support_empty: return "support-empty";
  }
  return "?";
}

RunResult run(const ProblemInstance& problem, const Dataset& ds, const SolverConfig& config) {
  const std::size_t n = ds.matrix.n_cols();
  if (n == 0) throw std::invalid_argument("run: dataset has no columns");
  if (config.max_epochs < 1) throw std::invalid_argument("run: max_epochs must be >= 1");
  if (config.gap_tol < 0.0) throw std::invalid_argument("run: gap_tol must be >= 0");
  const std::uint64_t trace_every = config.trace_every == 0 ? n : config.trace_every;
  const std::uint64_t budget = config.max_epochs * static_cast<std::uint64_t>(n);
  const RefreshPolicy policy = config.scheme.refresh();

  RunResult result;
  result.state = initial_state(problem, ds);
  PrimalDualState& state = result.state;
  SplitMix64 rng(config.seed);

  std::optional<ProbabilityVector> dist;
  std::optional<SumTree> tree;
  bool fixed_built = false;

  std::vector<double> kappa_buf;
  std::vector<double> gap_buf;
  std::vector<double> checkpoint_kappas;
  double theory_f_sum = 0.0, theory_fgap_sum = 0.0;
  std::uint64_t theory_f_count = 0, theory_fgap_count = 0;

  std::uint64_t last_checkpoint = std::numeric_limits<std::uint64_t>::max();

  const auto sampler_weights_for_log = [&](std::span<const double> kappas,
                                           std::span<const double> gaps)
      -> std::optional<ProbabilityVector> {
    // Mid-epoch the frozen per-epoch distribution is the one actually
    // sampled from; everywhere else the scheme formula applied to the
    // checkpoint vectors matches what the next refresh builds.
    if (policy == RefreshPolicy::per_epoch && state.iteration % n != 0 && dist) return dist;
    SamplingInputs in{ds.matrix.column_norms(), problem.lipschitz, kappas, gaps};
    return build_distribution(config.scheme, in);
  };

  const auto do_checkpoint = [&]() -> CheckpointOutcome {
    // Drift reset: remember the incrementally maintained w, rebuild from
    // scratch, log the relative deviation.
    std::vector<double> w_inc = state.w;
    recompute_dual_vector(problem, ds, state, state.counters.monitor_column_ops);
    double diff = 0.0, norm = 0.0;
    for (std::size_t r = 0; r < state.w.size(); ++r) {
      diff += (w_inc[r] - state.w[r]) * (w_inc[r] - state.w[r]);
      norm += state.w[r] * state.w[r];
    }
    const double drift = norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);

    Certificates certs =
        compute_certificates(problem, ds, state, state.counters.monitor_column_ops);
    if (!std::isfinite(certs.dual_obj) || !std::isfinite(certs.primal_obj)) {
      std::ostringstream dump;
      dump << "non-finite objective at iteration " << state.iteration
           << ": O_A=" << certs.dual_obj << " O_B=" << certs.primal_obj
           << " max|alpha|=" << [&] {
                double m = 0.0;
                for (double a : state.alpha) m = std::max(m, std::abs(a));
                return m;
              }();
      throw numerical_error(dump.str());
    }

    std::vector<double> kappas = certs.residuals;
    flush_small(kappas);

    if (config.record_theory) {
      for (std::size_t i = 0; i < n; ++i) {
        result.theory.kappa_excess_max = std::max(
            result.theory.kappa_excess_max, certs.residuals[i] - 2.0 * problem.lipschitz[i]);
      }
    }
    checkpoint_kappas = kappas;

    TraceRecord row;
    row.epoch = static_cast<double>(state.iteration) / static_cast<double>(n);
    row.iterations = state.iteration;
    row.vector_ops = state.counters.vector_ops();
    row.dual_obj = certs.dual_obj;
    row.primal_obj = certs.primal_obj;
    row.gap = certs.gap;
    row.suboptimality =
        config.suboptimality_ref ? certs.dual_obj - *config.suboptimality_ref : kNaN;
    row.support_size = support_size(kappas);
    row.f_t = kNaN;
    row.chi_gap = kNaN;
    row.chi_residual = kNaN;
    row.f_t_gap = kNaN;
    row.p_min_support = kNaN;
    row.w_drift = drift;

    if (config.record_theory) {
      if (auto log_dist = sampler_weights_for_log(kappas, certs.gaps)) {
        std::vector<double> probs(n);
        for (std::size_t i = 0; i < n; ++i) probs[i] = log_dist->prob(i);
        try {
          row.f_t = f_t(problem, ds.matrix.column_norms(), kappas, probs);
          theory_f_sum += row.f_t;
          ++theory_f_count;
          result.theory.f_t_max = std::max(result.theory.f_t_max, row.f_t);
        } catch (const coherence_error&) {
          // frozen distribution no longer coherent mid-epoch: not defined
        }
        if (row.support_size > 0) row.p_min_support = log_dist->min_positive_prob();
      }
      try {
        const FtGap fg = f_t_gap(problem, ds.matrix.column_norms(), kappas, certs.gaps);
        row.f_t_gap = fg.value;
        row.chi_gap = fg.chi_gaps;
        row.chi_residual = fg.chi_residual_products;
        theory_fgap_sum += fg.value;
        ++theory_fgap_count;
        result.theory.f_t_gap_max = std::max(result.theory.f_t_gap_max, fg.value);
      } catch (const std::invalid_argument&) {
        // zero gap: converged, nothing to log
      }
    }

    result.trace.push_back(row);
    last_checkpoint = state.iteration;
    return {certs.gap, row.support_size};
  };

  // Refresh the sampling distribution from the current state. Returns the
  // total gap when the pass computed one (gap-based schemes), NaN otherwise;
  // empty optional at an empty support.
  const auto refresh = [&]() -> std::optional<double> {
    double known_gap = kNaN;
    SamplingInputs in;
    in.column_norms = ds.matrix.column_norms();
    in.lipschitz = problem.lipschitz;
    if (config.scheme.needs_residuals()) {
      residual_pass(problem, ds, state, kappa_buf, state.counters.refresh_column_ops);
      in.residuals = kappa_buf;
    } else if (config.scheme.needs_gaps()) {
      Certificates certs =
          compute_certificates(problem, ds, state, state.counters.refresh_column_ops);
      kappa_buf = std::move(certs.residuals);
      gap_buf = std::move(certs.gaps);
      in.residuals = kappa_buf;
      in.gaps = gap_buf;
      known_gap = certs.gap;
    }
    dist = build_distribution(config.scheme, in);
    if (!dist) return std::nullopt;
    tree.emplace(dist->weights());

    if (config.record_theory) {
      // Coherence audit against the residuals this distribution was built
      // from (for the fixed schemes: the residuals of the preceding
      // checkpoint, which always runs first).
      std::vector<double> flushed;
      std::span<const double> reference;
      if (!in.residuals.empty()) {
        flushed.assign(in.residuals.begin(), in.residuals.end());
        flush_small(flushed);
        reference = flushed;
      } else {
        reference = checkpoint_kappas;
      }
      if (!reference.empty()) {
        ++result.theory.coherence_checks;
        for (std::size_t i = 0; i < reference.size(); ++i) {
          if (reference[i] != 0.0 && dist->prob(i) == 0.0) {
            ++result.theory.coherence_violations;
            break;
          }
        }
      }
    }
    return known_gap;
  };

  Termination termination = Termination::budget_exhausted;
  for (;;) {
    if (state.iteration % trace_every == 0) {
      const CheckpointOutcome cp = do_checkpoint();
      // An empty support is only a stopping certificate together with the
      // gap: residuals are classified with a small boundary band, so they
      // can all vanish while exact coordinate steps still make progress.
      if (cp.gap <= config.gap_tol) {
        termination = cp.support == 0 ? Termination::support_empty
                                      : Termination::gap_tol_reached;
        break;
      }
    }
    if (state.iteration >= budget) {
      termination = Termination::budget_exhausted;
      break;
    }

    const bool need_refresh = policy == RefreshPolicy::per_iteration ||
                              (policy == RefreshPolicy::per_epoch && state.iteration % n == 0) ||
                              (policy == RefreshPolicy::fixed && !fixed_built);
    if (need_refresh) {
      const auto known_gap = refresh();
      fixed_built = true;
      if (!known_gap) {
        termination = Termination::support_empty;
        break;
      }
      if (!std::isnan(*known_gap) && *known_gap <= config.gap_tol &&
          state.iteration != last_checkpoint) {
        // Confirm against a drift-free certificate before stopping early.
        const CheckpointOutcome cp = do_checkpoint();
        if (cp.gap <= config.gap_tol) {
          termination = Termination::gap_tol_reached;
          break;
        }
      }
    }

    const double u = rng.next_double();
    const std::size_t i = tree->sample(u);

    if (ds.matrix.column_norm(i) == 0.0) {
      // unreachable: excluded from every distribution
      state.zero_column_flagged = true;
      apply_update(problem, ds, state, i, 0.0, state.counters.update_column_ops);
      continue;
    }
    const double alpha_i = state.alpha[i];
    const double score = column_score(problem, ds, state, i, state.counters.update_column_ops);
    const double delta = delta_from_score(problem, ds, i, alpha_i, score);

    if (config.record_theory) {
      const double gap_i = gap_from_score(problem, ds, i, alpha_i, score);
      // The inequality's algebra needs a target from an actual subgradient,
      // so the banded boundary classification is not used here.
      const double kappa_i =
          residual_from_score(problem, ds, i, alpha_i, score, BoundaryRule::exact).kappa;
      const double decrease = decrease_from_step(problem, ds, i, alpha_i, score, delta);
      ++result.theory.checked_iterations;
      if (decrease < -1e-12) {
        result.theory.monotonicity_violations.push_back(
            {state.iteration, i, -1.0, decrease});
      }
      const DescentCheck check = descent_inequality_check(
          gap_i, kappa_i, ds.matrix.column_norm(i), problem.smoothness_beta,
          problem.strong_convexity[i], decrease, default_s_grid());
      if (!check.pass) {
        result.theory.descent_violations.push_back(
            {state.iteration, i, check.worst_s, check.worst_margin});
      }
    }

    apply_update(problem, ds, state, i, delta, state.counters.update_column_ops);
  }

  if (state.iteration != last_checkpoint) do_checkpoint();
  result.termination = termination;
  if (theory_f_count > 0) {
    result.theory.f_t_mean = theory_f_sum / static_cast<double>(theory_f_count);
  }
  if (theory_fgap_count > 0) {
    result.theory.f_t_gap_mean = theory_fgap_sum / static_cast<double>(theory_fgap_count);
  }
  return result;
}

}  // namespace adacd
