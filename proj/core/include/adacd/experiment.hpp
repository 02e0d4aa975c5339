#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adacd/dataset.hpp"
#include "adacd/solver.hpp"

namespace adacd {

struct SyntheticSpec {
  std::size_t d = 0;
  std::size_t n = 0;
  double support_frac = 0.12;
  double noise = 0.01;
};

/// Everything a command-line invocation pins down. Explicit flags only;
/// no environment variables, so a spec reproduces a run exactly.
struct ExperimentSpec {
  std::string data_path;                   // LIBSVM file, or
  std::optional<SyntheticSpec> synthetic;  // generated instance
  ProblemKind problem = ProblemKind::lasso;
  double lambda = 0.1;
  std::vector<SamplingScheme> schemes;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::uint64_t max_epochs = 50;
  double gap_tol = 0.0;
  std::uint64_t trace_every = 0;
  bool normalize = false;
  bool record_theory = false;
  std::string out_path;
  std::vector<double> gap_targets = {1e-1, 1e-2, 1e-3};
  double reference_target_gap = 1e-10;
  std::uint64_t reference_max_epochs = 20000;
};

/// Loads or generates the dataset, orients it for the problem and applies
/// normalization. Synthetic seeds derive from the first run seed.
Dataset prepare_dataset(const ExperimentSpec& spec);

/// One-line dataset summary (dims, density, both norm-dispersion ratios).
std::string describe_line(const Dataset& ds);

/// Trace CSV: a schema comment line, a header, one row per checkpoint.
/// Columns never change order within a schema version.
void write_trace_csv(std::ostream& out, const RunResult& result, bool theory);

std::string format_value(double v);

/// First checkpoint epoch with gap <= eps; NaN when never reached.
double epochs_to_gap(const std::vector<TraceRecord>& trace, double eps);

/// Crossing epoch interpolated linearly in log10(gap) between checkpoints;
/// falls back to the conservative value when interpolation is impossible.
double epochs_to_gap_interpolated(const std::vector<TraceRecord>& trace, double eps);

struct SummaryRow {
  std::string scheme;
  std::string seed;  // number, "median" or "mean"
  std::vector<double> epochs_to_gap;
  double final_gap = 0.0;
  double final_suboptimality = 0.0;
  std::uint64_t total_vector_ops = 0;
  std::string termination;
  bool failed = false;
};

struct CompareResult {
  std::vector<SummaryRow> rows;
  double reference_obj = 0.0;
  double reference_gap = 0.0;
  bool reference_reached = false;
};

/// Runs one scheme/seed pair and writes the trace CSV to spec.out_path
/// (stdout when empty).
int cmd_solve(const ExperimentSpec& spec, std::ostream& diagnostics);

/// Cartesian product of schemes x seeds against one shared reference
/// solution; writes per-run traces next to the summary, plus median and
/// mean rows per scheme. A failed run marks its row and the sweep goes on.
int cmd_compare(const ExperimentSpec& spec, std::ostream& diagnostics);
CompareResult run_compare(const ExperimentSpec& spec, std::ostream& diagnostics,
                          std::vector<RunResult>* traces = nullptr);

/// Measured per-epoch operation counts per scheme, with the asymptotic
/// cost class each scheme belongs to.
int cmd_bench(const ExperimentSpec& spec, std::ostream& out);

}  // namespace adacd
