#include "adacd/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "adacd/analysis.hpp"
#include "adacd/rng.hpp"

namespace adacd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kTraceSchema = "# adacd trace schema 1";
constexpr const char* kSummarySchema = "# adacd summary schema 1";

double median_of(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return std::isnan(v); }),
               values.end());
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

double mean_of(const std::vector<double>& values) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const double v : values) {
    if (!std::isnan(v)) {
      acc += v;
      ++count;
    }
  }
  return count == 0 ? kNaN : acc / static_cast<double>(count);
}

}  // namespace

std::string format_value(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Dataset prepare_dataset(const ExperimentSpec& spec) {
  Dataset ds;
  if (spec.synthetic) {
    const SyntheticSpec& syn = *spec.synthetic;
    const std::uint64_t gen_seed =
        derive_seed(spec.seeds.empty() ? 1 : spec.seeds.front(), 0xda7a);
    ds = spec.problem == ProblemKind::lasso
             ? synthetic_lasso(syn.d, syn.n, syn.support_frac, syn.noise, gen_seed)
             : synthetic_svm(syn.d, syn.n, syn.support_frac, syn.noise, gen_seed);
  } else {
    if (spec.data_path.empty()) throw data_error("no dataset: give a path or a synthetic spec");
    ds = load_libsvm(spec.data_path);
    ds = with_orientation(ds, spec.problem == ProblemKind::lasso
                                  ? Orientation::features_as_columns
                                  : Orientation::points_as_columns);
  }
  if (spec.normalize) ds = normalize_columns(ds, NormalizeMode::unit_l2);
  return ds;
}

std::string describe_line(const Dataset& ds) {
  const DatasetStats s = describe(ds);
  std::ostringstream out;
  out << "dataset: d=" << s.d << " n=" << s.n << " nnz=" << s.nnz
      << " density=" << format_value(s.density)
      << " norm std/mean=" << format_value(s.cv_std_over_mean)
      << " (table-style mean/std=" << format_value(s.cv_mean_over_std) << ")";
  return out.str();
}

void write_trace_csv(std::ostream& out, const RunResult& result, bool theory) {
  out << kTraceSchema << '\n';
  out << "epoch,iterations,vector_ops,dual_obj,primal_obj,gap,suboptimality,support_size";
  if (theory) out << ",F_t,chi_G,chi_F";
  out << '\n';
  for (const TraceRecord& row : result.trace) {
    out << format_value(row.epoch) << ',' << row.iterations << ',' << row.vector_ops << ','
        << format_value(row.dual_obj) << ',' << format_value(row.primal_obj) << ','
        << format_value(row.gap) << ',' << format_value(row.suboptimality) << ','
        << row.support_size;
    if (theory) {
      out << ',' << format_value(row.f_t) << ',' << format_value(row.chi_gap) << ','
          << format_value(row.chi_residual);
    }
    out << '\n';
  }
}

double epochs_to_gap(const std::vector<TraceRecord>& trace, double eps) {
  for (const TraceRecord& row : trace) {
    if (row.gap <= eps) return row.epoch;
  }
  return kNaN;
}

double epochs_to_gap_interpolated(const std::vector<TraceRecord>& trace, double eps) {
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace[k].gap <= eps) {
      if (k == 0) return trace[0].epoch;
      const double g0 = trace[k - 1].gap;
      const double g1 = trace[k].gap;
      if (!(g0 > eps) || g1 <= 0.0 || g0 <= 0.0) return trace[k].epoch;
      const double t =
          (std::log10(g0) - std::log10(eps)) / (std::log10(g0) - std::log10(g1));
      return trace[k - 1].epoch + t * (trace[k].epoch - trace[k - 1].epoch);
    }
  }
  return kNaN;
}

namespace {

SolverConfig config_for(const ExperimentSpec& spec, const SamplingScheme& scheme,
                        std::uint64_t seed, std::optional<double> ref) {
  SolverConfig cfg;
  cfg.scheme = scheme;
  cfg.max_epochs = spec.max_epochs;
  cfg.gap_tol = spec.gap_tol;
  cfg.seed = seed;
  cfg.trace_every = spec.trace_every;
  cfg.record_theory = spec.record_theory;
  cfg.suboptimality_ref = ref;
  return cfg;
}

void write_summary_csv(std::ostream& out, const CompareResult& result,
                       const std::vector<double>& gap_targets) {
  out << kSummarySchema << '\n';
  out << "scheme,seed";
  for (const double eps : gap_targets) out << ",epochs_to_gap_" << format_value(eps);
  out << ",final_gap,final_suboptimality,total_vector_ops,termination\n";
  for (const SummaryRow& row : result.rows) {
    out << row.scheme << ',' << row.seed;
    for (const double e : row.epochs_to_gap) out << ',' << format_value(e);
    out << ',' << format_value(row.final_gap) << ',' << format_value(row.final_suboptimality)
        << ',' << row.total_vector_ops << ',' << (row.failed ? "failed" : row.termination)
        << '\n';
  }
}

}  // namespace

int cmd_solve(const ExperimentSpec& spec, std::ostream& diagnostics) {
  if (spec.schemes.size() != 1 || spec.seeds.size() != 1) {
    throw std::invalid_argument("solve takes exactly one scheme and one seed");
  }
  const Dataset ds = prepare_dataset(spec);
  diagnostics << describe_line(ds) << '\n';
  const ProblemInstance problem = make_problem(spec.problem, ds, spec.lambda);
  const RunResult result =
      run(problem, ds, config_for(spec, spec.schemes.front(), spec.seeds.front(), std::nullopt));

  if (spec.out_path.empty()) {
    write_trace_csv(std::cout, result, spec.record_theory);
  } else {
    std::ofstream out(spec.out_path);
    if (!out) throw data_error("cannot write '" + spec.out_path + "'");
    write_trace_csv(out, result, spec.record_theory);
  }
  diagnostics << "scheme=" << spec.schemes.front().name() << " seed=" << spec.seeds.front()
              << " epochs=" << result.trace.back().epoch
              << " gap=" << format_value(result.trace.back().gap)
              << " termination=" << to_string(result.termination) << '\n';
  return 0;
}

CompareResult run_compare(const ExperimentSpec& spec, std::ostream& diagnostics,
                          std::vector<RunResult>* traces) {
  if (spec.schemes.empty() || spec.seeds.empty()) {
    throw std::invalid_argument("compare needs at least one scheme and one seed");
  }
  const Dataset ds = prepare_dataset(spec);
  diagnostics << describe_line(ds) << '\n';
  const ProblemInstance problem = make_problem(spec.problem, ds, spec.lambda);

  // One reference certificate per problem instance, shared by every run so
  // all suboptimality columns are offsets against the same value.
  const ReferenceSolution ref =
      reference_solution(problem, ds, spec.reference_target_gap, spec.reference_max_epochs);
  if (!ref.reached) {
    diagnostics << "warning: reference stopped at gap=" << format_value(ref.gap)
                << " before reaching " << format_value(spec.reference_target_gap) << '\n';
  }

  CompareResult result;
  result.reference_obj = ref.dual_obj;
  result.reference_gap = ref.gap;
  result.reference_reached = ref.reached;

  struct PerScheme {
    std::vector<std::vector<double>> epochs;  // [target][seed]
    std::vector<double> final_gap, final_subopt, ops;
  };
  std::vector<PerScheme> aggregates(spec.schemes.size());

  for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
    aggregates[s].epochs.resize(spec.gap_targets.size());
    for (const std::uint64_t seed : spec.seeds) {
      SummaryRow row;
      row.scheme = spec.schemes[s].name();
      row.seed = std::to_string(seed);
      try {
        const RunResult r = run(problem, ds, config_for(spec, spec.schemes[s], seed, ref.dual_obj));
        for (std::size_t g = 0; g < spec.gap_targets.size(); ++g) {
          row.epochs_to_gap.push_back(epochs_to_gap(r.trace, spec.gap_targets[g]));
          aggregates[s].epochs[g].push_back(
              epochs_to_gap_interpolated(r.trace, spec.gap_targets[g]));
        }
        row.final_gap = r.trace.back().gap;
        row.final_suboptimality = r.trace.back().suboptimality;
        row.total_vector_ops = r.trace.back().vector_ops;
        row.termination = to_string(r.termination);
        aggregates[s].final_gap.push_back(row.final_gap);
        aggregates[s].final_subopt.push_back(row.final_suboptimality);
        aggregates[s].ops.push_back(static_cast<double>(row.total_vector_ops));
        if (traces) traces->push_back(r);
      } catch (const std::exception& err) {
        row.failed = true;
        row.termination = "failed";
        row.epochs_to_gap.assign(spec.gap_targets.size(), kNaN);
        row.final_gap = kNaN;
        row.final_suboptimality = kNaN;
        diagnostics << "run " << row.scheme << "/" << row.seed << " failed: " << err.what()
                    << '\n';
        if (traces) traces->push_back(RunResult{});
      }
      result.rows.push_back(std::move(row));
    }
  }

  for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
    for (const bool use_median : {true, false}) {
      SummaryRow row;
      row.scheme = spec.schemes[s].name();
      row.seed = use_median ? "median" : "mean";
      for (const auto& per_target : aggregates[s].epochs) {
        row.epochs_to_gap.push_back(use_median ? median_of(per_target) : mean_of(per_target));
      }
      row.final_gap = use_median ? median_of(aggregates[s].final_gap)
                                 : mean_of(aggregates[s].final_gap);
      row.final_suboptimality = use_median ? median_of(aggregates[s].final_subopt)
                                           : mean_of(aggregates[s].final_subopt);
      row.total_vector_ops = static_cast<std::uint64_t>(
          use_median ? median_of(aggregates[s].ops) : mean_of(aggregates[s].ops));
      row.termination = "-";
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

int cmd_compare(const ExperimentSpec& spec, std::ostream& diagnostics) {
  std::vector<RunResult> traces;
  const CompareResult result = run_compare(spec, diagnostics, &traces);

  if (spec.out_path.empty()) {
    write_summary_csv(std::cout, result, spec.gap_targets);
    return 0;
  }
  std::ofstream out(spec.out_path);
  if (!out) throw data_error("cannot write '" + spec.out_path + "'");
  write_summary_csv(out, result, spec.gap_targets);

  const std::filesystem::path base(spec.out_path);
  const std::string stem = (base.parent_path() / base.stem()).string();
  std::size_t k = 0;
  for (const SamplingScheme& scheme : spec.schemes) {
    for (const std::uint64_t seed : spec.seeds) {
      const RunResult& r = traces[k++];
      if (r.trace.empty()) continue;  // failed run
      std::ofstream trace_out(stem + "_trace_" + scheme.name() + "_seed" + std::to_string(seed) +
                              ".csv");
      write_trace_csv(trace_out, r, spec.record_theory);
    }
  }
  return 0;
}

int cmd_bench(const ExperimentSpec& spec, std::ostream& fallback) {
  if (spec.schemes.empty()) throw std::invalid_argument("bench needs at least one scheme");
  std::ofstream file;
  if (!spec.out_path.empty()) {
    file.open(spec.out_path);
    if (!file) throw data_error("cannot write '" + spec.out_path + "'");
  }
  std::ostream& out = spec.out_path.empty() ? fallback : file;
  const Dataset ds = prepare_dataset(spec);
  const ProblemInstance problem = make_problem(spec.problem, ds, spec.lambda);
  const std::uint64_t seed = spec.seeds.empty() ? 1 : spec.seeds.front();

  out << "# adacd bench schema 1\n";
  out << "scheme,epochs,update_column_ops,refresh_column_ops,refresh_ops_per_epoch,cost_class\n";
  for (const SamplingScheme& scheme : spec.schemes) {
    const RunResult r = run(problem, ds, config_for(spec, scheme, seed, std::nullopt));
    const double epochs = r.trace.back().epoch;
    const double refresh_per_epoch =
        epochs > 0.0 ? static_cast<double>(r.state.counters.refresh_column_ops) / epochs : 0.0;
    const char* cost_class = nullptr;
    switch (scheme.refresh()) {
      case RefreshPolicy::fixed: cost_class = "O(nnz)"; break;
      case RefreshPolicy::per_epoch: cost_class = "O(nnz + n log n)"; break;
      case RefreshPolicy::per_iteration: cost_class = "O(n nnz)"; break;
    }
    out << scheme.name() << ',' << format_value(epochs) << ','
        << r.state.counters.update_column_ops << ',' << r.state.counters.refresh_column_ops << ','
        << format_value(refresh_per_epoch) << ',' << cost_class << '\n';
  }
  return 0;
}

}  // namespace adacd
